#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>

#include "dpcp/random.hpp"

namespace dpcp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (epsilon, delta) privacy budget. epsilon = +inf is the non-private
/// baseline: mechanisms add no noise and compare exact values.
class PrivacyParams {
 public:
  PrivacyParams(double epsilon, double delta = 0.0);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  bool is_private() const { return epsilon_ != kInfinity; }

  // Same delta, epsilon scaled by `factor` (inf stays inf).
  PrivacyParams ScaledEpsilon(double factor) const;

 private:
  double epsilon_;
  double delta_;
};

/// Scale b of a zero-mean Laplace distribution. b = 0 means "no noise".
class LaplaceScale {
 public:
  explicit LaplaceScale(double b);

  // sensitivity / epsilon, zero when epsilon is infinite.
  static LaplaceScale For(double sensitivity, double epsilon);

  double value() const { return b_; }

 private:
  double b_;
};

double SampleLaplace(LaplaceScale scale, Rng& rng);

// Pull-based source of query answers; std::nullopt ends the sequence.
using QuerySource = std::function<std::optional<double>()>;

// Index (0-based) of argmax_i (values[i] + Lap(sensitivity/epsilon)). Ties go
// to the smallest index.
std::size_t ReportNoisyMax(std::span<const double> values, double sensitivity,
                           const PrivacyParams& privacy, Rng& rng);

// Sparse-vector AboveThresh. Draws the noisy threshold T + Lap(2s/eps) once,
// then pulls queries one at a time and halts at the first with
// value + Lap(4s/eps) > noisy threshold. Returns its 0-based position, or
// std::nullopt if the source runs dry first. No query is pulled after halting.
std::optional<std::size_t> AboveNoisyThreshold(const QuerySource& queries,
                                               double sensitivity,
                                               double threshold,
                                               const PrivacyParams& privacy,
                                               Rng& rng);

// Accuracy width of AboveThresh over m queries: 8 s log(2m/beta) / epsilon.
double AboveThreshAlpha(std::size_t m, double sensitivity, double beta,
                        double epsilon);

}  // namespace dpcp
