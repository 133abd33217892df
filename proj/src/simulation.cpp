#include "dpcp/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "dpcp/error.hpp"
#include "dpcp/mechanisms.hpp"
#include "dpcp/offline.hpp"
#include "dpcp/online.hpp"

namespace dpcp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be
// written to per-index slots; the lowest-index failure is rethrown.
template <class Body>
void ParallelFor(std::size_t count, unsigned workers, Body&& body) {
  std::vector<std::exception_ptr> failures(count);
  auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    const unsigned n = std::min<std::size_t>(workers, count);
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run(i);
      });
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(i) + ": " + e.what());
    }
  }
}

std::size_t AbsDiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// beta(alpha) for alpha = 0..max_alpha from integer errors; `failed_always`
// trials count as failures at every alpha.
std::vector<double> TailCurve(const std::vector<std::size_t>& errors,
                              std::size_t failed_always, std::size_t max_alpha) {
  const std::size_t total = errors.size() + failed_always;
  std::vector<double> betas(max_alpha + 1, kNaN);
  if (total == 0) return betas;
  // above[a] = #errors > a
  std::vector<std::size_t> histogram(max_alpha + 2, 0);
  for (std::size_t e : errors) ++histogram[std::min(e, max_alpha + 1)];
  std::size_t above = errors.size();
  for (std::size_t a = 0; a <= max_alpha; ++a) {
    above -= histogram[a];
    betas[a] = static_cast<double>(above + failed_always) /
               static_cast<double>(total);
  }
  return betas;
}

std::vector<std::size_t> Grid(std::size_t max_alpha) {
  std::vector<std::size_t> alphas(max_alpha + 1);
  for (std::size_t a = 0; a <= max_alpha; ++a) alphas[a] = a;
  return alphas;
}

void CheckEpsilons(const std::vector<double>& epsilons) {
  if (epsilons.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "at least one epsilon required");
  }
  for (double e : epsilons) PrivacyParams check(e);
}

}  // namespace

std::vector<double> GenerateStream(const HypothesisPair& true_pair,
                                   std::size_t k_star, std::size_t length,
                                   Rng& rng) {
  if (k_star < 1 || k_star > length + 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "change point must lie in [1, length + 1]");
  }
  std::vector<double> stream(length);
  for (std::size_t i = 1; i <= length; ++i) {
    stream[i - 1] =
        true_pair.Sample(i < k_star ? Regime::kPre : Regime::kPost, rng);
  }
  return stream;
}

double AccuracyCurve::BetaAt(double alpha) const {
  if (betas.empty()) {
    throw Error(ErrorCode::kInvalidInput, "empty accuracy curve");
  }
  if (alpha < 0.0) {
    throw Error(ErrorCode::kInvalidParameter, "alpha must be >= 0");
  }
  const double idx = std::floor(alpha);
  const std::size_t i =
      idx >= static_cast<double>(betas.size() - 1)
          ? betas.size() - 1
          : static_cast<std::size_t>(idx);
  return betas[i];
}

std::vector<AccuracyCurve> RunOffline(const OfflineScenario& s) {
  if (!(s.k_star > 1 && s.k_star <= s.n) || s.trials < 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "offline scenario needs 1 < k* <= n and trials >= 1");
  }
  CheckEpsilons(s.epsilons);
  // Fail before spending any trials if the detector cannot run.
  OfflineSensitivity(s.hypothesized_pair, s.tail_delta);

  std::vector<AccuracyCurve> curves;
  for (std::size_t e = 0; e < s.epsilons.size(); ++e) {
    const PrivacyParams privacy(s.epsilons[e], s.tail_delta);
    std::vector<std::size_t> errors(s.trials);
    ParallelFor(s.trials, s.workers, [&](std::size_t t) {
      Rng data_rng(DeriveSeed(s.master_seed, e, t, 0));
      Rng noise_rng(DeriveSeed(s.master_seed, e, t, 1));
      const std::vector<double> x =
          GenerateStream(s.true_pair, s.k_star, s.n, data_rng);
      const DetectionResult r =
          DetectOffline(s.hypothesized_pair, x, privacy, noise_rng);
      errors[t] = AbsDiff(r.k_tilde, s.k_star);
    });
    curves.push_back(AccuracyCurve{s.id, s.epsilons[e], Grid(s.n),
                                   TailCurve(errors, 0, s.n)});
  }
  return curves;
}

OnlineRunResult RunOnline(const OnlineScenario& s) {
  if (s.window_n < 2 || 2 * s.k_star < s.window_n || s.trials < 1 ||
      s.max_stream_len < s.k_star + s.window_n) {
    throw Error(ErrorCode::kInvalidParameter,
                "online scenario needs n >= 2, k* >= n/2, trials >= 1 and "
                "max_stream_len >= k* + n");
  }
  CheckEpsilons(s.epsilons);
  OfflineSensitivity(s.hypothesized_pair, s.tail_delta);

  OnlineRunResult result;
  for (std::size_t e = 0; e < s.epsilons.size(); ++e) {
    const OnlineConfig config{s.window_n, s.threshold,
                              PrivacyParams(s.epsilons[e], s.tail_delta)};
    std::vector<OnlineResult> outcomes(s.trials);
    ParallelFor(s.trials, s.workers, [&](std::size_t t) {
      Rng data_rng(DeriveSeed(s.master_seed, e, t, 0));
      Rng noise_rng(DeriveSeed(s.master_seed, e, t, 1));
      std::size_t position = 0;
      ObservationSource stream = [&]() -> std::optional<double> {
        if (position == s.max_stream_len) return std::nullopt;
        ++position;
        return s.true_pair.Sample(
            position < s.k_star ? Regime::kPre : Regime::kPost, data_rng);
      };
      outcomes[t] = DetectOnline(s.hypothesized_pair, stream, config, noise_rng);
    });

    std::vector<std::size_t> all_errors;      // alarm in a correct window
    std::size_t always_failed = 0;            // no alarm or wrong window
    std::size_t no_alarm = 0;
    for (const OnlineResult& r : outcomes) {
      if (!r.alarmed()) {
        ++no_alarm;
        ++always_failed;
        continue;
      }
      if (*r.window_start <= s.k_star && s.k_star <= *r.alarm_time) {
        all_errors.push_back(AbsDiff(*r.k_tilde_global, s.k_star));
      } else {
        ++always_failed;
      }
    }
    const double eps = s.epsilons[e];
    result.beta1.push_back(AccuracyCurve{
        s.id, eps, Grid(s.window_n),
        TailCurve(all_errors, always_failed, s.window_n)});
    result.beta2.push_back(AccuracyCurve{s.id, eps, Grid(s.window_n),
                                         TailCurve(all_errors, 0, s.window_n)});
    result.no_alarm_fraction.push_back(static_cast<double>(no_alarm) /
                                       static_cast<double>(s.trials));
    result.correct_window_trials.push_back(all_errors.size());
  }
  return result;
}

double NearestRankQuantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) {
    throw Error(ErrorCode::kInvalidInput, "quantile of empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "quantile level must be in [0,1]");
  }
  const double rank = std::ceil(q * static_cast<double>(sorted.size()));
  const std::size_t r =
      std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, sorted.size());
  return sorted[r - 1];
}

EmpiricalThreshold EmpiricalThresholdRange(const HypothesisPair& pair,
                                           double epsilon, std::size_t n,
                                           std::size_t k_star, double fa_rate,
                                           double miss_rate,
                                           std::size_t realizations, Rng& rng,
                                           double tail_delta) {
  if (!(fa_rate > 0.0 && fa_rate < 1.0) || !(miss_rate > 0.0 && miss_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "rates must lie in (0,1)");
  }
  if (realizations < 1000) {
    throw Error(ErrorCode::kInvalidParameter, "need at least 1000 realizations");
  }
  if (n < 2 || k_star < 1) {
    throw Error(ErrorCode::kInvalidParameter, "need n >= 2 and k* >= 1");
  }
  const double a = OfflineSensitivity(pair, tail_delta);
  const LaplaceScale noise = LaplaceScale::For(8.0 * a, PrivacyParams(epsilon).epsilon());

  auto noisy_cusum = [&](std::size_t change_at) {
    std::vector<double> sample(realizations);
    for (double& v : sample) {
      double w = 0.0;
      for (std::size_t i = 1; i <= n; ++i) {
        const double x =
            pair.Sample(i < change_at ? Regime::kPre : Regime::kPost, rng);
        w = CusumStep(w, pair.LogRatio(x));
      }
      v = w + SampleLaplace(noise, rng);
    }
    std::sort(sample.begin(), sample.end());
    return sample;
  };

  const double q_low = 1.0 - fa_rate / static_cast<double>(k_star);
  const std::vector<double> pre = noisy_cusum(n + 1);
  const std::vector<double> post = noisy_cusum(n / 2);
  return EmpiricalThreshold{
      MakeThresholdRange(NearestRankQuantile(pre, q_low),
                         NearestRankQuantile(post, miss_rate)),
      static_cast<double>(realizations) * (1.0 - q_low) < 10.0};
}

std::string FormatReal(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void WriteOfflineCsv(std::ostream& out, const std::vector<AccuracyCurve>& curves) {
  out << "scenario,epsilon,alpha,beta\n";
  for (const AccuracyCurve& c : curves) {
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
      out << c.scenario << ',' << FormatReal(c.epsilon) << ',' << c.alphas[i]
          << ',' << FormatReal(c.betas[i]) << '\n';
    }
  }
}

void WriteOnlineCsv(std::ostream& out, const OnlineRunResult& result) {
  out << "scenario,epsilon,alpha,beta1,beta2,no_alarm_fraction\n";
  for (std::size_t e = 0; e < result.beta1.size(); ++e) {
    const AccuracyCurve& b1 = result.beta1[e];
    const AccuracyCurve& b2 = result.beta2[e];
    for (std::size_t i = 0; i < b1.alphas.size(); ++i) {
      out << b1.scenario << ',' << FormatReal(b1.epsilon) << ',' << b1.alphas[i]
          << ',' << FormatReal(b1.betas[i]) << ',' << FormatReal(b2.betas[i])
          << ',' << FormatReal(result.no_alarm_fraction[e]) << '\n';
    }
  }
}

}  // namespace dpcp
