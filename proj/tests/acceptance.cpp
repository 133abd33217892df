// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dpcp/bounds.hpp"
#include "dpcp/hypothesis.hpp"
#include "dpcp/mechanisms.hpp"
#include "dpcp/offline.hpp"
#include "dpcp/online.hpp"
#include "dpcp/simulation.hpp"

using namespace dpcp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string Fmt(const char* format, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

std::string Fmt(const char* format, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double BinomialSigma(double p, double trials) {
  return std::sqrt(p * (1.0 - p) / trials);
}

const HypothesisPair kLarge = HypothesisPair::Bernoulli(0.2, 0.8);
const HypothesisPair kSmall = HypothesisPair::Bernoulli(0.2, 0.4);

std::vector<AccuracyCurve> Offline(const std::string& id, const HypothesisPair& truth,
                                   const HypothesisPair& hypothesis,
                                   std::vector<double> epsilons, std::uint64_t seed) {
  return RunOffline(OfflineScenario{.id = id,
                                    .true_pair = truth,
                                    .hypothesized_pair = hypothesis,
                                    .epsilons = std::move(epsilons),
                                    .trials = 1000,
                                    .master_seed = seed});
}

// argmax_k of sum_{i>=k} r_i recomputed from the counts of ones and zeros in
// each suffix, smallest k on ties.
std::size_t BruteForceArgmax(double p0, double p1, const std::vector<double>& x) {
  const long double up = std::log(static_cast<long double>(p1) / p0);
  const long double down = std::log((1.0L - p1) / (1.0L - p0));
  std::vector<long double> ell(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    long double ones = 0;
    long double zeros = 0;
    for (std::size_t i = k; i < x.size(); ++i) (x[i] == 1.0 ? ones : zeros) += 1;
    ell[k] = ones * up + zeros * down;
  }
  const long double best = *std::max_element(ell.begin(), ell.end());
  for (std::size_t k = 0; k < ell.size(); ++k) {
    if (ell[k] >= best - 1e-9L) return k + 1;
  }
  return ell.size();
}

Outcome OracleEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  // A coarse grid makes exact ties between suffixes common.
  const std::array<double, 6> grid{0.1, 0.2, 0.3, 0.5, 0.7, 0.8};
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::uniform_int_distribution<std::size_t> length(1, 300);
  Rng rng(102);
  int matches = 0;
  constexpr int kStreams = 1000;
  for (int s = 0; s < kStreams; ++s) {
    double p0 = grid[pick(gen)];
    double p1 = grid[pick(gen)];
    while (p1 == p0) p1 = grid[pick(gen)];
    const auto pair = HypothesisPair::Bernoulli(p0, p1);
    const std::size_t n = length(gen);
    std::uniform_int_distribution<std::size_t> change(1, n + 1);
    const std::vector<double> x = GenerateStream(pair, change(gen), n, rng);
    const std::size_t got = DetectOffline(pair, x, PrivacyParams(kInfinity), rng).k_tilde;
    matches += got == BruteForceArgmax(p0, p1, x);
  }
  const double secs = Seconds(start);
  Outcome o;
  o.Require(matches == kStreams, std::to_string(matches) + "/1000 match");
  o.Require(secs < 10.0, Fmt("%.2fs < 10s", secs));
  return o;
}

double NaiveWindowedMax(const std::vector<double>& r, std::size_t j, std::size_t n) {
  double best = -kInfinity;
  double suffix = 0.0;
  for (std::size_t k = j; k + n > j && k >= 1; --k) {
    suffix += r[k - 1];
    best = std::max(best, suffix);
  }
  return best;
}

Outcome WindowedCusumExact() {
  const auto start = std::chrono::steady_clock::now();
  constexpr std::size_t kLength = 5000;
  constexpr std::size_t kWindow = 100;
  std::mt19937_64 gen(201);
  std::uniform_int_distribution<int> step(-6, 5);
  std::size_t mismatches = 0;
  double worst_real = 0.0;
  Rng rng(202);
  for (int s = 0; s < 100; ++s) {
    // Integer-valued ratios: every partial sum is exact in double, so both
    // methods must agree bit for bit.
    std::vector<double> r(kLength);
    for (double& v : r) v = step(gen);
    CusumWindow w(kWindow);
    for (std::size_t j = 1; j <= kLength; ++j) {
      w.Push(r[j - 1]);
      if (j >= kWindow) mismatches += w.WindowedMax() != NaiveWindowedMax(r, j, kWindow);
    }
    // Log-likelihood ratios of a Bernoulli stream with a change in the middle.
    const std::vector<double> x = GenerateStream(kLarge, kLength / 2, kLength, rng);
    for (std::size_t i = 0; i < kLength; ++i) r[i] = kLarge.LogRatio(x[i]);
    CusumWindow real(kWindow);
    for (std::size_t j = 1; j <= kLength; ++j) {
      real.Push(r[j - 1]);
      if (j >= kWindow) {
        worst_real = std::max(
            worst_real, std::abs(real.WindowedMax() - NaiveWindowedMax(r, j, kWindow)));
      }
    }
  }
  const double secs = Seconds(start);
  Outcome o;
  o.Require(mismatches == 0, std::to_string(mismatches) + " integer-stream mismatches");
  o.Require(worst_real <= 1e-9, Fmt("max |diff| on LLR streams %.3g <= 1e-9", worst_real));
  o.Require(secs < 30.0, Fmt("%.2fs < 30s", secs));
  return o;
}

Outcome BoundHolds() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> epsilons{0.5, 1.0, kInfinity};
  const auto curves = Offline("bernoulli_A", kLarge, kLarge, epsilons, 301);
  const double a = kLarge.DeltaEll();
  const double c = kLarge.Kl().c;
  const double limit = 0.2 + 3.0 * std::sqrt(0.2 * 0.8 / 1000.0);
  Outcome o;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double alpha = std::min(200.0, AlphaPrivateBounded(a, c, 0.2, epsilons[e]));
    const double rate = curves[e].BetaAt(alpha);
    o.Require(rate <= limit, "eps=" + FormatReal(epsilons[e]) +
                                 Fmt(" alpha=%.1f rate=%.3f", alpha, rate));
  }
  const double secs = Seconds(start);
  o.Require(secs < 60.0, Fmt("%.1fs < 60s", secs));
  return o;
}

Outcome PrivacyOrdering() {
  const std::vector<double> epsilons{0.1, 0.5, 1.0, kInfinity};
  const auto a = Offline("bernoulli_A", kLarge, kLarge, epsilons, 401);
  const auto b = Offline("bernoulli_B", kSmall, kSmall, epsilons, 402);
  Outcome o;
  for (std::size_t e = 0; e + 1 < epsilons.size(); ++e) {
    const double hi = a[e].BetaAt(10);
    const double lo = a[e + 1].BetaAt(10);
    const double sigma = std::hypot(BinomialSigma(hi, 1000), BinomialSigma(lo, 1000));
    o.Require(hi + 3 * sigma >= lo, "A eps " + FormatReal(epsilons[e]) + " vs " +
                                        FormatReal(epsilons[e + 1]) +
                                        Fmt(": %.3f >= %.3f", hi, lo));
  }
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double pa = a[e].BetaAt(10);
    const double pb = b[e].BetaAt(10);
    const double sigma = std::hypot(BinomialSigma(pa, 1000), BinomialSigma(pb, 1000));
    o.Require(pa <= pb + 3 * sigma,
              "A<=B at eps " + FormatReal(epsilons[e]) + Fmt(": %.3f <= %.3f", pa, pb));
  }
  return o;
}

Outcome Misspecification() {
  const auto c = Offline("bernoulli_C", kLarge, kSmall, {1.0}, 501);
  const auto b = Offline("bernoulli_B", kSmall, kSmall, {1.0}, 502);
  const double pc = c[0].BetaAt(10);
  const double pb = b[0].BetaAt(10);
  const double sigma = std::hypot(BinomialSigma(pc, 1000), BinomialSigma(pb, 1000));
  Outcome o;
  o.Require(pc <= pb + 3 * sigma, Fmt("C %.3f <= B %.3f", pc, pb));
  return o;
}

Outcome ThresholdAnchor() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(601);
  const EmpiricalThreshold emp =
      EmpiricalThresholdRange(kLarge, kInfinity, 700, 5000, 0.1, 0.1, 10000, rng);
  const double secs = Seconds(start);
  const ThresholdRange analytic = OnlineThresholdRange(
      kLarge.DeltaEll(), kLarge.Kl().c, 700, 5000, 0.1, kInfinity);
  Outcome o;
  o.Require(emp.range.feasible,
            Fmt("empirical [%.2f, %.2f] feasible", emp.range.t_low, emp.range.t_high));
  o.Require(emp.range.t_low - 15 <= 220 && 220 <= emp.range.t_high + 15,
            "contains 220 +/- 15");
  o.Require(analytic.feasible && analytic.t_low < analytic.t_high,
            Fmt("analytic [%.3f, %.3f] feasible", analytic.t_low, analytic.t_high));
  o.Require(std::abs(analytic.t_low - 29.5) <= 0.5 &&
                std::abs(analytic.t_high - 214.3) <= 0.5,
            "analytic near [29.5, 214.3] +/- 0.5");
  o.Require(secs < 120.0, Fmt("%.1fs < 120s", secs));
  return o;
}

Outcome OnlineEndToEnd() {
  const auto start = std::chrono::steady_clock::now();
  const OnlineRunResult r = RunOnline(OnlineScenario{.id = "bernoulli_A",
                                                     .true_pair = kLarge,
                                                     .hypothesized_pair = kLarge,
                                                     .window_n = 700,
                                                     .k_star = 5000,
                                                     .threshold = 220,
                                                     .epsilons = {kInfinity},
                                                     .trials = 1000,
                                                     .master_seed = 701});
  const double secs = Seconds(start);
  const double correct = r.correct_window_trials[0] / 1000.0;
  const double beta2 = r.beta2[0].BetaAt(50);
  const double limit =
      0.1 + 3 * std::sqrt(0.1 * 0.9 / std::max<double>(1, r.correct_window_trials[0]));
  Outcome o;
  o.Require(correct >= 0.85, Fmt("correct window %.3f >= 0.85", correct));
  o.Require(beta2 <= limit, Fmt("beta2(50) %.3f <= %.3f", beta2, limit));
  o.Require(secs < 300.0, Fmt("%.1fs < 300s", secs));
  return o;
}

Outcome NoisyMaxRatio() {
  // Neighbouring data move every log-likelihood suffix sum up to the changed
  // point by the same amount, at most the sensitivity.
  constexpr int kRuns = 200000;
  const double eps = 0.5;
  const std::vector<double> base{0.0, 1.0, 0.5, 0.8};
  double worst = 0.0;
  Rng rng(801);
  for (std::size_t cut = 1; cut <= base.size(); ++cut) {
    for (double shift : {1.0, -1.0}) {
      std::vector<double> neighbour = base;
      for (std::size_t i = 0; i < cut; ++i) neighbour[i] += shift;
      std::array<int, 4> cv{};
      std::array<int, 4> cw{};
      for (int i = 0; i < kRuns; ++i) {
        ++cv[ReportNoisyMax(base, 1.0, PrivacyParams(eps), rng)];
        ++cw[ReportNoisyMax(neighbour, 1.0, PrivacyParams(eps), rng)];
      }
      for (std::size_t i = 0; i < base.size(); ++i) {
        worst = std::max(worst, static_cast<double>(std::max(cv[i], cw[i])) /
                                    std::max(1, std::min(cv[i], cw[i])));
      }
    }
  }
  Outcome o;
  o.Require(worst <= std::exp(eps) * 1.1,
            Fmt("max ratio %.4f <= %.4f", worst, std::exp(eps) * 1.1));
  return o;
}

Outcome ClosedFormAnchors() {
  const auto gauss = HypothesisPair::GaussianUnitVar(0.0, 1.0);
  const double c = gauss.Kl().c;
  const double a_delta = gauss.ADelta(0.05);
  const double bisected = ADeltaByBisection(gauss, 0.05);
  const double dl = kLarge.DeltaEll();
  Outcome o;
  o.Require(std::abs(c - 0.5) <= 1e-9, Fmt("C=%.12f", c));
  o.Require(std::abs(a_delta - 4.919928) <= 1e-5, Fmt("A_delta=%.6f", a_delta));
  o.Require(std::abs(a_delta - bisected) <= 1e-6,
            Fmt("bisection=%.6f (|diff| %.3g <= 1e-6)", bisected,
                std::abs(a_delta - bisected)));
  o.Require(std::abs(dl - std::log(16.0)) <= 1e-12, Fmt("Delta_ell=%.15f", dl));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle_equivalence", OracleEquivalence},
      {"windowed_cusum_exact", WindowedCusumExact},
      {"private_bound_holds", BoundHolds},
      {"privacy_and_change_size_ordering", PrivacyOrdering},
      {"misspecification_robustness", Misspecification},
      {"threshold_anchor", ThresholdAnchor},
      {"online_end_to_end", OnlineEndToEnd},
      {"noisy_max_privacy_ratio", NoisyMaxRatio},
      {"closed_form_anchors", ClosedFormAnchors},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", name, Seconds(start),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
