#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpcp/bounds.hpp"
#include "dpcp/hypothesis.hpp"
#include "dpcp/random.hpp"

namespace dpcp {

// x_i ~ P0 for i < k_star and x_i ~ P1 for i >= k_star (1-based). k_star may
// be length + 1, meaning no change.
std::vector<double> GenerateStream(const HypothesisPair& true_pair,
                                   std::size_t k_star, std::size_t length,
                                   Rng& rng);

/// Empirical beta(alpha) = Pr[|k_tilde - k*| > alpha] on an integer alpha
/// grid. For online beta2 curves a point can be undefined (no trial in the
/// conditioning set); it is stored as NaN.
struct AccuracyCurve {
  std::string scenario;
  double epsilon;
  std::vector<std::size_t> alphas;
  std::vector<double> betas;

  // beta at real-valued alpha (errors are integers, so this is beta at
  // floor(alpha), clamped to the grid).
  double BetaAt(double alpha) const;
};

struct OfflineScenario {
  std::string id;
  HypothesisPair true_pair;
  HypothesisPair hypothesized_pair;
  std::size_t n = 200;
  std::size_t k_star = 100;
  std::vector<double> epsilons;
  std::size_t trials = 1000;
  // delta passed to the detector; required > 0 when Delta(ell) is infinite.
  double tail_delta = 0.0;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
};

// One curve per epsilon, alpha grid 0..n.
std::vector<AccuracyCurve> RunOffline(const OfflineScenario& scenario);

struct OnlineScenario {
  std::string id;
  HypothesisPair true_pair;
  HypothesisPair hypothesized_pair;
  std::size_t window_n = 700;
  std::size_t k_star = 5000;
  double threshold = 220.0;
  std::vector<double> epsilons;
  std::size_t trials = 1000;
  double tail_delta = 0.0;
  std::uint64_t master_seed = 0;
  std::size_t max_stream_len = 5700;
  unsigned workers = 1;
};

struct OnlineRunResult {
  // beta1: inaccurate estimate or alarm in a window missing k* (no alarm
  // counts as a failure at every alpha).
  std::vector<AccuracyCurve> beta1;
  // beta2: inaccurate estimate given an alarm whose window contains k*.
  std::vector<AccuracyCurve> beta2;
  std::vector<double> no_alarm_fraction;
  std::vector<std::size_t> correct_window_trials;
};

OnlineRunResult RunOnline(const OnlineScenario& scenario);

struct EmpiricalThreshold {
  ThresholdRange range;
  // realizations * (1 - q_low) < 10: the extreme quantile is essentially the
  // sample maximum and should not be trusted.
  bool low_quantile_undersampled;
};

// Quantile-based threshold search. The lower end is the (1 - fa_rate/k_star)
// quantile of W_n + Z over pure-P0 windows; the upper end is the miss_rate
// quantile of W_n + Z over windows that change at n/2. W_n comes from the
// CUSUM recursion and Z ~ Lap(8A/epsilon) (zero at epsilon = inf), the
// per-step noise of the online detector. Nearest-rank quantiles.
EmpiricalThreshold EmpiricalThresholdRange(const HypothesisPair& pair,
                                           double epsilon, std::size_t n,
                                           std::size_t k_star, double fa_rate,
                                           double miss_rate,
                                           std::size_t realizations, Rng& rng,
                                           double tail_delta = 0.0);

// Nearest-rank quantile of an ascending-sorted sample.
double NearestRankQuantile(const std::vector<double>& sorted, double q);

// CSV writers. epsilon = inf is written as the token "inf"; reals use 6
// significant digits; undefined beta2 points are written as "nan".
void WriteOfflineCsv(std::ostream& out, const std::vector<AccuracyCurve>& curves);
void WriteOnlineCsv(std::ostream& out, const OnlineRunResult& result);

std::string FormatReal(double value);

}  // namespace dpcp
