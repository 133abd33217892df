#include "dpcp/mechanisms.hpp"

#include <cmath>

#include "dpcp/error.hpp"

namespace dpcp {
namespace {

void CheckSensitivity(double sensitivity) {
  if (!(sensitivity >= 0.0) || !std::isfinite(sensitivity)) {
    throw Error(ErrorCode::kInvalidParameter,
                "sensitivity must be finite and non-negative");
  }
}

}  // namespace

PrivacyParams::PrivacyParams(double epsilon, double delta)
    : epsilon_(epsilon), delta_(delta) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "epsilon must be > 0");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "delta must lie in [0,1)");
  }
}

PrivacyParams PrivacyParams::ScaledEpsilon(double factor) const {
  return PrivacyParams(epsilon_ * factor, delta_);
}

LaplaceScale::LaplaceScale(double b) : b_(b) {
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidParameter,
                "laplace scale must be finite and non-negative");
  }
}

LaplaceScale LaplaceScale::For(double sensitivity, double epsilon) {
  if (epsilon == kInfinity) return LaplaceScale(0.0);
  if (!std::isfinite(sensitivity)) {
    throw Error(ErrorCode::kInfiniteSensitivity,
                "noise scale would be infinite");
  }
  return LaplaceScale(sensitivity / epsilon);
}

double SampleLaplace(LaplaceScale scale, Rng& rng) {
  if (scale.value() == 0.0) return 0.0;
  // u uniform on (-1/2, 1/2); inverse CDF.
  const double u = UniformOpen01(rng) - 0.5;
  const double magnitude = -scale.value() * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

std::size_t ReportNoisyMax(std::span<const double> values, double sensitivity,
                           const PrivacyParams& privacy, Rng& rng) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidInput, "report noisy max needs a value");
  }
  CheckSensitivity(sensitivity);
  const LaplaceScale scale = LaplaceScale::For(sensitivity, privacy.epsilon());
  std::size_t best = 0;
  double best_value = -kInfinity;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double noisy = values[i] + SampleLaplace(scale, rng);
    if (i == 0 || noisy > best_value) {
      best = i;
      best_value = noisy;
    }
  }
  return best;
}

std::optional<std::size_t> AboveNoisyThreshold(const QuerySource& queries,
                                               double sensitivity,
                                               double threshold,
                                               const PrivacyParams& privacy,
                                               Rng& rng) {
  CheckSensitivity(sensitivity);
  const double eps = privacy.epsilon();
  const double noisy_threshold =
      threshold + SampleLaplace(LaplaceScale::For(2.0 * sensitivity, eps), rng);
  const LaplaceScale query_scale = LaplaceScale::For(4.0 * sensitivity, eps);
  for (std::size_t i = 0;; ++i) {
    const std::optional<double> answer = queries();
    if (!answer) return std::nullopt;
    if (*answer + SampleLaplace(query_scale, rng) > noisy_threshold) return i;
  }
}

double AboveThreshAlpha(std::size_t m, double sensitivity, double beta,
                        double epsilon) {
  if (m < 1 || !(beta > 0.0 && beta < 1.0) || !(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                "abovethresh alpha needs m >= 1, beta in (0,1), epsilon > 0");
  }
  CheckSensitivity(sensitivity);
  return 8.0 * sensitivity * std::log(2.0 * static_cast<double>(m) / beta) /
         epsilon;
}

}  // namespace dpcp
