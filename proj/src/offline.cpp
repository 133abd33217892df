#include "dpcp/offline.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "dpcp/error.hpp"

namespace dpcp {
namespace {

// Neumaier running sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double CheckedLogRatio(const HypothesisPair& pair, double x,
                       std::size_t position) {
  try {
    return pair.LogRatio(x);
  } catch (const InvalidObservation& e) {
    throw InvalidObservation(position, std::string(e.what()) + " (index " +
                                           std::to_string(position) + ")");
  }
}

// Smallest index whose value is within accumulated rounding of the maximum.
// Suffixes that are equal in exact arithmetic can differ by an ulp after
// summation; they count as ties.
std::size_t ArgmaxWithTies(const std::vector<double>& values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double tol = 16.0 * DBL_EPSILON * scale;
  const double best = *std::max_element(values.begin(), values.end());
  std::size_t i = 0;
  while (values[i] < best - tol) ++i;
  return i;
}

}  // namespace

LlrProfile ComputeLlrProfile(const HypothesisPair& pair,
                             std::span<const double> data) {
  if (data.empty()) {
    throw Error(ErrorCode::kInvalidInput, "llr profile needs at least one point");
  }
  // Validate front to back so the reported index is the first bad one.
  std::vector<double> ratios(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    ratios[i] = CheckedLogRatio(pair, data[i], i + 1);
  }
  LlrProfile profile;
  profile.values.resize(data.size());
  CompensatedSum suffix;
  for (std::size_t i = data.size(); i-- > 0;) {
    suffix.Add(ratios[i]);
    profile.values[i] = suffix.value();
  }
  return profile;
}

std::size_t MaximumLikelihoodChangePoint(const HypothesisPair& pair,
                                         std::span<const double> data) {
  return ArgmaxWithTies(ComputeLlrProfile(pair, data).values) + 1;
}

double OfflineSensitivity(const HypothesisPair& pair, double delta) {
  const double a = delta == 0.0 ? pair.DeltaEll() : pair.ADelta(delta);
  if (!std::isfinite(a)) {
    throw Error(ErrorCode::kInfiniteSensitivity,
                "log-likelihood ratio sensitivity is infinite for " +
                    pair.Describe() + "; use delta > 0");
  }
  return a;
}

DetectionResult DetectOffline(const HypothesisPair& pair,
                              std::span<const double> data,
                              const PrivacyParams& privacy, Rng& rng) {
  const double a = OfflineSensitivity(pair, privacy.delta());
  const LlrProfile profile = ComputeLlrProfile(pair, data);
  const std::size_t index = privacy.is_private()
                                ? ReportNoisyMax(profile.values, a, privacy, rng)
                                : ArgmaxWithTies(profile.values);
  return DetectionResult{
      index + 1, LaplaceScale::For(a, privacy.epsilon()).value(),
      privacy.delta() == 0.0 ? NoiseMode::kBoundedSensitivity
                             : NoiseMode::kTailBound};
}

}  // namespace dpcp
