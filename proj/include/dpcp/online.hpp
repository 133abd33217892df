#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "dpcp/hypothesis.hpp"
#include "dpcp/mechanisms.hpp"
#include "dpcp/random.hpp"

namespace dpcp {

// One step of the CUSUM recursion W_i = max(W_{i-1}, 0) + ratio. Seeding with
// W_0 = 0 gives W_i = max_{1<=k<=i} sum_{j=k}^{i} ratio_j.
inline double CusumStep(double w_prev, double ratio) {
  return (w_prev > 0.0 ? w_prev : 0.0) + ratio;
}

/// Sliding-window maximum of the partial log-likelihood ratio,
///   l_j = max_{j-n+1 <= k <= j} sum_{i=k}^{j} ratio_i
///       = S_j - min_{j-n <= k <= j-1} S_k,
/// where S is the prefix sum of ratios. The minimum is kept in a monotone
/// deque, so each step is O(1) amortized and memory is O(n).
class CusumWindow {
 public:
  explicit CusumWindow(std::size_t window_n);

  void Push(double ratio);

  // Throws kNotReady until window_n ratios have been pushed.
  double WindowedMax() const;

  bool ready() const { return count_ >= window_n_; }
  std::size_t count() const { return count_; }
  std::size_t window_n() const { return window_n_; }

 private:
  std::size_t window_n_;
  std::size_t count_ = 0;
  double prefix_ = 0.0;  // S_count
  // (k, S_k) with strictly increasing S_k, k in [count-n, count-1].
  std::deque<std::pair<std::size_t, double>> minima_;
};

// Lazy stream of observations; std::nullopt ends it.
using ObservationSource = std::function<std::optional<double>()>;

ObservationSource SourceFromSpan(std::span<const double> data);

struct OnlineConfig {
  std::size_t window_n;
  double threshold;
  // privacy.delta() selects the sensitivity: 0 uses Delta(ell) exactly as
  // the bounded-ratio detector; > 0 switches to the A_delta tail bound.
  PrivacyParams privacy;
};

struct OnlineResult {
  std::optional<std::size_t> alarm_time;      // j, 1-based
  std::optional<std::size_t> k_tilde_global;  // 1-based stream index
  std::optional<std::size_t> window_start;    // j - n + 1

  bool alarmed() const { return alarm_time.has_value(); }
};

/// Streaming private detector. Splits epsilon evenly: AboveThresh over the
/// windowed statistic (threshold noise Lap(4A/eps), per-step Lap(8A/eps)),
/// then the offline detector at epsilon/2 on the alarmed window.
///
/// Pulls from `stream` until an alarm or exhaustion and never reads past the
/// alarm point. Throws kInsufficientData if fewer than window_n points arrive.
OnlineResult DetectOnline(const HypothesisPair& pair,
                          const ObservationSource& stream,
                          const OnlineConfig& config, Rng& rng);

}  // namespace dpcp
