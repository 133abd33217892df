#include "dpcp/online.hpp"

#include <string>
#include <vector>

#include "dpcp/error.hpp"
#include "dpcp/offline.hpp"

namespace dpcp {

CusumWindow::CusumWindow(std::size_t window_n) : window_n_(window_n) {
  if (window_n < 1) {
    throw Error(ErrorCode::kInvalidParameter, "window size must be >= 1");
  }
}

void CusumWindow::Push(double ratio) {
  // S_{count} becomes a candidate start for every window ending at or after
  // count + 1.
  while (!minima_.empty() && minima_.back().second >= prefix_) {
    minima_.pop_back();
  }
  minima_.emplace_back(count_, prefix_);
  prefix_ += ratio;
  ++count_;
  const std::size_t oldest = count_ > window_n_ ? count_ - window_n_ : 0;
  while (minima_.front().first < oldest) minima_.pop_front();
}

double CusumWindow::WindowedMax() const {
  if (!ready()) {
    throw Error(ErrorCode::kNotReady,
                "windowed statistic needs " + std::to_string(window_n_) +
                    " points, have " + std::to_string(count_));
  }
  return prefix_ - minima_.front().second;
}

ObservationSource SourceFromSpan(std::span<const double> data) {
  return [data, next = std::size_t{0}]() mutable -> std::optional<double> {
    if (next == data.size()) return std::nullopt;
    return data[next++];
  };
}

OnlineResult DetectOnline(const HypothesisPair& pair,
                          const ObservationSource& stream,
                          const OnlineConfig& config, Rng& rng) {
  const std::size_t n = config.window_n;
  if (n < 2) {
    throw Error(ErrorCode::kInvalidParameter, "window size must be >= 2");
  }
  const double a = OfflineSensitivity(pair, config.privacy.delta());

  CusumWindow cusum(n);
  std::vector<double> ring(n);
  std::size_t seen = 0;

  auto consume = [&](double x) {
    double ratio = 0.0;
    try {
      ratio = pair.LogRatio(x);
    } catch (const InvalidObservation& e) {
      throw InvalidObservation(seen + 1, std::string(e.what()) + " (index " +
                                             std::to_string(seen + 1) + ")");
    }
    ring[seen % n] = x;
    cusum.Push(ratio);
    ++seen;
  };
  auto insufficient = [&] {
    return Error(ErrorCode::kInsufficientData,
                 "stream ended after " + std::to_string(seen) +
                     " points; window needs " + std::to_string(n));
  };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::optional<double> x = stream();
    if (!x) throw insufficient();
    consume(*x);
  }
  QuerySource windowed = [&]() -> std::optional<double> {
    const std::optional<double> x = stream();
    if (!x) {
      if (seen < n) throw insufficient();
      return std::nullopt;
    }
    consume(*x);
    return cusum.WindowedMax();
  };

  const PrivacyParams half = config.privacy.ScaledEpsilon(0.5);
  const std::optional<std::size_t> hit =
      AboveNoisyThreshold(windowed, a, config.threshold, half, rng);
  if (!hit) return OnlineResult{};

  const std::size_t j = seen;
  std::vector<double> window(n);
  for (std::size_t i = 0; i < n; ++i) window[i] = ring[(j - n + i) % n];
  const DetectionResult offline = DetectOffline(pair, window, half, rng);
  return OnlineResult{j, offline.k_tilde + (j - n), j - n + 1};
}

}  // namespace dpcp
