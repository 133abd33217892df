#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dpcp/hypothesis.hpp"
#include "dpcp/mechanisms.hpp"
#include "dpcp/random.hpp"

namespace dpcp {

// Partial log-likelihood ratios: values[k-1] = sum_{i=k}^{n} log ratio(x_i).
struct LlrProfile {
  std::vector<double> values;

  // 1-based accessor.
  double at(std::size_t k) const { return values.at(k - 1); }
};

enum class NoiseMode {
  kBoundedSensitivity,  // delta = 0, scale Delta(ell)/epsilon
  kTailBound,           // delta > 0, scale A_delta/epsilon
};

struct DetectionResult {
  std::size_t k_tilde;  // 1-based, in [1, n]
  double noise_scale_used;
  NoiseMode mode;
};

// One backward pass with compensated summation. Throws InvalidObservation
// carrying the 1-based index of the first bad point.
LlrProfile ComputeLlrProfile(const HypothesisPair& pair,
                             std::span<const double> data);

// Non-private change-point MLE (1-based), smallest k on ties.
std::size_t MaximumLikelihoodChangePoint(const HypothesisPair& pair,
                                         std::span<const double> data);

// The noise magnitude A the offline detector uses: Delta(ell) when
// delta == 0, A_delta otherwise. Throws kInfiniteSensitivity when it is not
// finite.
double OfflineSensitivity(const HypothesisPair& pair, double delta);

// Private change-point estimate by report-noisy-max over the profile.
DetectionResult DetectOffline(const HypothesisPair& pair,
                              std::span<const double> data,
                              const PrivacyParams& privacy, Rng& rng);

}  // namespace dpcp
