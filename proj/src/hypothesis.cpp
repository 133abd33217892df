#include "dpcp/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dpcp/error.hpp"
#include "dpcp/normal.hpp"

namespace dpcp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool IsProbability(double p) { return p > 0.0 && p < 1.0; }

double BernoulliLogRatio(const BernoulliModel& m, double x) {
  if (x == 1.0) return std::log(m.p1 / m.p0);
  if (x == 0.0) return std::log((1.0 - m.p1) / (1.0 - m.p0));
  throw InvalidObservation(0, "bernoulli observation must be 0 or 1");
}

double GaussianLogRatio(const GaussianUnitVarModel& m, double x) {
  return (m.mu1 - m.mu0) * (x - 0.5 * (m.mu0 + m.mu1));
}

double LogNormalDensity(double x, double mu) {
  constexpr double kLogSqrt2Pi = 0.91893853320467274178;
  const double z = x - mu;
  return -0.5 * z * z - kLogSqrt2Pi;
}

double LogAddExp(double a, double b) {
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// KL(P_i || (P0+P1)/2) for unit-variance Gaussians by Gauss-Kronrod over
// +/- 12 standard deviations around both means.
double GaussianMixtureKl(const GaussianUnitVarModel& m, bool first) {
  const double mu_i = first ? m.mu0 : m.mu1;
  auto integrand = [&](double x) {
    const double lp0 = LogNormalDensity(x, m.mu0);
    const double lp1 = LogNormalDensity(x, m.mu1);
    const double lpi = first ? lp0 : lp1;
    return std::exp(lpi) *
           (std::numbers::ln2 + lpi - LogAddExp(lp0, lp1));
  };
  const double lo = std::min(m.mu0, m.mu1) - 12.0;
  const double hi = std::max(m.mu0, m.mu1) + 12.0;
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          integrand, lo, hi, 15, 1e-12, &error);
  if (!std::isfinite(value) || error > 1e-8) {
    std::ostringstream os;
    os << "mixture KL quadrature did not converge: mean=" << mu_i
       << " value=" << value << " error_estimate=" << error;
    throw Error(ErrorCode::kNumericError, os.str());
  }
  return value;
}

}  // namespace

HypothesisPair HypothesisPair::Bernoulli(double p0, double p1) {
  if (!IsProbability(p0) || !IsProbability(p1)) {
    throw Error(ErrorCode::kInvalidParameter,
                "bernoulli parameters must lie in (0,1)");
  }
  if (p0 == p1) {
    throw Error(ErrorCode::kInvalidParameter,
                "bernoulli parameters must differ (p0 != p1)");
  }
  return HypothesisPair(BernoulliModel{p0, p1});
}

HypothesisPair HypothesisPair::GaussianUnitVar(double mu0, double mu1) {
  if (!std::isfinite(mu0) || !std::isfinite(mu1)) {
    throw Error(ErrorCode::kInvalidParameter, "gaussian means must be finite");
  }
  if (mu0 == mu1) {
    throw Error(ErrorCode::kInvalidParameter,
                "gaussian means must differ (mu0 != mu1)");
  }
  return HypothesisPair(GaussianUnitVarModel{mu0, mu1});
}

HypothesisPair HypothesisPair::Swapped() const {
  return std::visit(
      Overloaded{
          [](const BernoulliModel& m) { return Bernoulli(m.p1, m.p0); },
          [](const GaussianUnitVarModel& m) {
            return GaussianUnitVar(m.mu1, m.mu0);
          },
      },
      model_);
}

double HypothesisPair::LogRatio(double x) const {
  return std::visit(
      Overloaded{
          [x](const BernoulliModel& m) { return BernoulliLogRatio(m, x); },
          [x](const GaussianUnitVarModel& m) { return GaussianLogRatio(m, x); },
      },
      model_);
}

double HypothesisPair::DeltaEll() const {
  return std::visit(
      Overloaded{
          [](const BernoulliModel& m) {
            return std::abs(BernoulliLogRatio(m, 1.0) -
                            BernoulliLogRatio(m, 0.0));
          },
          [](const GaussianUnitVarModel&) {
            return std::numeric_limits<double>::infinity();
          },
      },
      model_);
}

double HypothesisPair::RatioTail(double t) const {
  return std::visit(
      Overloaded{
          [t](const BernoulliModel& m) {
            const double v1 = 2.0 * std::abs(BernoulliLogRatio(m, 1.0));
            const double v0 = 2.0 * std::abs(BernoulliLogRatio(m, 0.0));
            double worst = 0.0;
            for (double p : {m.p0, m.p1}) {
              const double mass = (v1 > t ? p : 0.0) + (v0 > t ? 1.0 - p : 0.0);
              worst = std::max(worst, mass);
            }
            return worst;
          },
          [t](const GaussianUnitVarModel& m) {
            // Under either hypothesis the log ratio is N(-+d^2/2, d^2); both
            // give the same two-sided tail by symmetry.
            const double d = std::abs(m.mu1 - m.mu0);
            const double s = 0.5 * t;
            return NormalSurvival((s + 0.5 * d * d) / d) +
                   NormalCdf((0.5 * d * d - s) / d);
          },
      },
      model_);
}

double HypothesisPair::ADelta(double delta) const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "delta must lie in (0,1)");
  }
  return std::visit(
      Overloaded{
          [delta, this](const BernoulliModel& m) {
            // Smallest candidate t (0 or a support value of 2|log ratio|)
            // whose tail is below delta/2.
            double candidates[] = {0.0,
                                   2.0 * std::abs(BernoulliLogRatio(m, 0.0)),
                                   2.0 * std::abs(BernoulliLogRatio(m, 1.0))};
            std::sort(std::begin(candidates), std::end(candidates));
            for (double t : candidates) {
              if (RatioTail(t) < 0.5 * delta) return t;
            }
            return candidates[2];
          },
          [delta](const GaussianUnitVarModel& m) {
            const double d = std::abs(m.mu1 - m.mu0);
            return 2.0 * d * (NormalQuantile(1.0 - 0.5 * delta) + 0.5 * d);
          },
      },
      model_);
}

KlConstants HypothesisPair::Kl() const {
  return std::visit(
      Overloaded{
          [](const BernoulliModel& m) {
            auto kl = [](double p, double q) {
              return p * std::log(p / q) + (1 - p) * std::log((1 - p) / (1 - q));
            };
            const double mix = 0.5 * (m.p0 + m.p1);
            return KlConstants{std::min(kl(m.p0, m.p1), kl(m.p1, m.p0)),
                               std::min(kl(m.p0, mix), kl(m.p1, mix))};
          },
          [](const GaussianUnitVarModel& m) {
            const double d = m.mu1 - m.mu0;
            return KlConstants{0.5 * d * d,
                               std::min(GaussianMixtureKl(m, true),
                                        GaussianMixtureKl(m, false))};
          },
      },
      model_);
}

double HypothesisPair::Sample(Regime regime, Rng& rng) const {
  const bool post = regime == Regime::kPost;
  return std::visit(
      Overloaded{
          [&](const BernoulliModel& m) {
            return UniformOpen01(rng) < (post ? m.p1 : m.p0) ? 1.0 : 0.0;
          },
          [&](const GaussianUnitVarModel& m) {
            std::normal_distribution<double> normal(post ? m.mu1 : m.mu0, 1.0);
            return normal(rng);
          },
      },
      model_);
}

std::string HypothesisPair::Describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const BernoulliModel& m) {
                   os << "bernoulli(" << m.p0 << "," << m.p1 << ")";
                 },
                 [&](const GaussianUnitVarModel& m) {
                   os << "gaussian(" << m.mu0 << "," << m.mu1 << ")";
                 },
             },
             model_);
  return os.str();
}

double ADeltaByBisection(const HypothesisPair& pair, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "delta must lie in (0,1)");
  }
  const double target = 0.5 * delta;
  if (pair.RatioTail(0.0) < target) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (pair.RatioTail(hi) >= target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) {
      throw Error(ErrorCode::kNumericError, "tail bound is unbounded");
    }
  }
  // Invariant: tail(lo) >= target > tail(hi).
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (pair.RatioTail(mid) < target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace dpcp
