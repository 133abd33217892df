#include "dpcp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpcp/error.hpp"

namespace dpcp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidParameter, what);
}

void CheckCommon(double a, double c, double beta) {
  Require(a > 0.0 && std::isfinite(a), "A must be positive and finite");
  Require(c > 0.0 && std::isfinite(c), "C must be positive and finite");
  Require(beta > 0.0, "beta must be > 0");
}

void CheckEpsilon(double epsilon) {
  Require(epsilon > 0.0, "epsilon must be > 0");
}

// (k/eps) * log(arg), zero when eps is infinite.
double NoiseTerm(double k, double epsilon, double arg) {
  return epsilon == kInf ? 0.0 : k / epsilon * std::log(arg);
}

// beta large enough to make the log factor non-positive leaves no bound.
double Positive(double alpha) {
  Require(alpha > 0.0, "beta too large: bound is vacuous");
  return alpha;
}

}  // namespace

double AlphaMleBounded(double a, double c, double beta) {
  CheckCommon(a, c, beta);
  return Positive(2.0 * a * a / (c * c) * std::log(32.0 / (3.0 * beta)));
}

double AlphaPrivateBounded(double a, double c, double beta, double epsilon) {
  CheckCommon(a, c, beta);
  CheckEpsilon(epsilon);
  return Positive(
      std::max(8.0 * a * a / (c * c) * std::log(64.0 / (3.0 * beta)),
               NoiseTerm(4.0 * a / c, epsilon, 16.0 / beta)));
}

double AlphaMleRelaxed(double c_m, double beta) {
  Require(c_m > 0.0 && c_m <= std::log(2.0), "C_M must lie in (0, log 2]");
  Require(beta > 0.0, "beta must be > 0");
  return Positive(67.0 / (c_m * c_m) * std::log(64.0 / (3.0 * beta)));
}

double AlphaPrivateRelaxed(double a, double c_m, double beta, double epsilon) {
  Require(c_m > 0.0 && c_m <= std::log(2.0), "C_M must lie in (0, log 2]");
  Require(a > 0.0 && std::isfinite(a), "A must be positive and finite");
  Require(beta > 0.0, "beta must be > 0");
  CheckEpsilon(epsilon);
  return Positive(
      std::max(262.0 / (c_m * c_m) * std::log(128.0 / (3.0 * beta)),
               NoiseTerm(2.0 * a / c_m, epsilon, 16.0 / beta)));
}

ThresholdRange MakeThresholdRange(double t_low, double t_high) {
  return ThresholdRange{t_low, t_high, t_low <= t_high};
}

ThresholdRange OnlineThresholdRange(double a, double c, std::size_t n,
                                    std::size_t k_star, double beta,
                                    double epsilon) {
  CheckCommon(a, c, beta);
  CheckEpsilon(epsilon);
  Require(n >= 2, "window size must be >= 2");
  Require(2 * k_star >= n, "threshold range requires k* >= n/2");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k_star);
  const double noise = NoiseTerm(16.0 * a, epsilon, 8.0 * kd / beta);
  const double t_low =
      2.0 * a * std::sqrt(2.0 * std::log(64.0 * kd / beta)) - c + noise;
  const double t_high =
      nd * c / 2.0 - a / 2.0 * std::sqrt(nd * std::log(8.0 / beta)) - noise;
  return MakeThresholdRange(t_low, t_high);
}

double OnlineAlpha(double a, double c, std::size_t n, double beta,
                   double epsilon) {
  CheckCommon(a, c, beta);
  CheckEpsilon(epsilon);
  Require(n >= 1, "window size must be >= 1");
  const double nd = static_cast<double>(n);
  return Positive(
      std::max(16.0 * a * a / (c * c) * std::log(32.0 * nd / beta),
               NoiseTerm(4.0 * a / c, epsilon, 8.0 * nd / beta)));
}

AccuracyBound Evaluate(BoundKind which, double a, double c_or_c_m, double beta,
                       double epsilon, std::size_t n) {
  double alpha = 0.0;
  switch (which) {
    case BoundKind::kMleBounded:
      alpha = AlphaMleBounded(a, c_or_c_m, beta);
      epsilon = kInf;
      break;
    case BoundKind::kPrivateBounded:
      alpha = AlphaPrivateBounded(a, c_or_c_m, beta, epsilon);
      break;
    case BoundKind::kMleRelaxed:
      alpha = AlphaMleRelaxed(c_or_c_m, beta);
      epsilon = kInf;
      break;
    case BoundKind::kPrivateRelaxed:
      alpha = AlphaPrivateRelaxed(a, c_or_c_m, beta, epsilon);
      break;
    case BoundKind::kOnline:
      alpha = OnlineAlpha(a, c_or_c_m, n, beta, epsilon);
      break;
  }
  return AccuracyBound{alpha, which, a, c_or_c_m, beta, epsilon};
}

}  // namespace dpcp
