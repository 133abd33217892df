#include "dpcp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "dpcp/bounds.hpp"
#include "dpcp/error.hpp"
#include "dpcp/hypothesis.hpp"
#include "dpcp/mechanisms.hpp"
#include "dpcp/offline.hpp"
#include "dpcp/online.hpp"
#include "dpcp/simulation.hpp"

namespace dpcp::cli {
namespace {

// Bad input line; `line` is 1-based.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> ParseReal(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

double ParseEpsilon(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  const std::optional<double> v = ParseReal(Trim(text));
  if (!v) {
    throw CLI::ValidationError("--epsilon", "expected a positive number or inf");
  }
  return *v;
}

std::vector<double> ParseEpsilonList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseEpsilon(std::string(Trim(item))));
  if (out.empty()) throw CLI::ValidationError("--epsilons", "empty list");
  return out;
}

// Pull-based reader of newline-delimited decimals. Blank lines are skipped.
// When a pair is given, each value must be a valid observation for it.
class LineReader {
 public:
  LineReader(std::istream& in, const HypothesisPair* pair)
      : in_(in), pair_(pair) {}

  std::optional<double> Next() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      const std::string_view text = Trim(raw);
      if (text.empty()) continue;
      const std::optional<double> value = ParseReal(text);
      if (!value) {
        throw LineError(ErrorCode::kInvalidInput, line_,
                        "malformed numeric value '" + std::string(text) + "'");
      }
      if (pair_ != nullptr) {
        try {
          pair_->LogRatio(*value);
        } catch (const InvalidObservation& e) {
          throw LineError(ErrorCode::kInvalidObservation, line_, e.what());
        }
      }
      return value;
    }
    return std::nullopt;
  }

 private:
  std::istream& in_;
  const HypothesisPair* pair_;
  std::size_t line_ = 0;
};

struct ModelFlags {
  std::string model;
  double p0 = 0.0;
  double p1 = 0.0;
  double mu0 = 0.0;
  double mu1 = 0.0;

  void Register(CLI::App* app, bool required) {
    auto* opt = app->add_option("--model", model, "bernoulli | gaussian")
                    ->check(CLI::IsMember({"bernoulli", "gaussian"}));
    if (required) opt->required();
    app->add_option("--p0", p0, "pre-change Bernoulli parameter");
    app->add_option("--p1", p1, "post-change Bernoulli parameter");
    app->add_option("--mu0", mu0, "pre-change Gaussian mean");
    app->add_option("--mu1", mu1, "post-change Gaussian mean");
  }

  HypothesisPair Build() const {
    if (model == "bernoulli") return HypothesisPair::Bernoulli(p0, p1);
    return HypothesisPair::GaussianUnitVar(mu0, mu1);
  }
};

struct InputFlags {
  std::string path;
  void Register(CLI::App* app) {
    app->add_option("--in", path, "input file (default: stdin)");
  }
  // Returns the stream to read; opens `storage` when a path was given.
  std::istream& Open(std::istream& fallback, std::ifstream& storage) const {
    if (path.empty()) return fallback;
    storage.open(path);
    if (!storage) {
      throw Error(ErrorCode::kInvalidInput, "cannot open input file " + path);
    }
    return storage;
  }
};

void WriteKeyValues(std::ostream& out,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

std::string Bool(bool b) { return b ? "true" : "false"; }

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

struct Scenario {
  HypothesisPair true_pair;
  HypothesisPair hypothesized_pair;
};

// Scenarios of the experimental study: (A) large change, (B) small change,
// (C) large true change tested against the small hypothesized one.
Scenario MakeScenario(const std::string& family, const std::string& id) {
  const bool bern = family == "bernoulli";
  const HypothesisPair large = bern ? HypothesisPair::Bernoulli(0.2, 0.8)
                                    : HypothesisPair::GaussianUnitVar(0.0, 1.0);
  const HypothesisPair small = bern ? HypothesisPair::Bernoulli(0.2, 0.4)
                                    : HypothesisPair::GaussianUnitVar(0.0, 0.5);
  if (id == "A") return {large, large};
  if (id == "B") return {small, small};
  return {large, small};
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially private change-point detection", "dpcp"};
  app.require_subcommand(1);
  std::function<void()> action;

  ModelFlags model;
  InputFlags input;
  std::string epsilon_text = "inf";
  double delta = 0.0;
  std::uint64_t seed = 0;

  // detect-offline
  CLI::App* offline = app.add_subcommand(
      "detect-offline", "private change-point estimate over a finite sample");
  model.Register(offline, true);
  input.Register(offline);
  offline->add_option("--epsilon", epsilon_text, "privacy budget or inf");
  offline->add_option("--delta", delta, "tail-bound relaxation (0: exact)");
  offline->add_option("--seed", seed, "random seed");
  offline->callback([&] {
    action = [&] {
      const HypothesisPair pair = model.Build();
      const PrivacyParams privacy(ParseEpsilon(epsilon_text), delta);
      OfflineSensitivity(pair, delta);
      std::ifstream file;
      LineReader reader(input.Open(in, file), &pair);
      std::vector<double> data;
      while (auto x = reader.Next()) data.push_back(*x);
      if (data.empty()) {
        throw Error(ErrorCode::kInsufficientData, "no observations in input");
      }
      Rng rng(seed);
      const DetectionResult r = DetectOffline(pair, data, privacy, rng);
      out << "k_tilde=" << r.k_tilde << " n=" << data.size()
          << " noise_scale=" << FormatReal(r.noise_scale_used) << " mode="
          << (r.mode == NoiseMode::kBoundedSensitivity ? "bounded" : "tail")
          << '\n';
    };
  });

  // detect-online
  std::size_t window = 0;
  double threshold = 0.0;
  CLI::App* online = app.add_subcommand(
      "detect-online", "streaming private detector over a sliding window");
  model.Register(online, true);
  input.Register(online);
  online->add_option("--epsilon", epsilon_text, "privacy budget or inf");
  online->add_option("--delta", delta, "tail-bound relaxation (0: exact)");
  online->add_option("--seed", seed, "random seed");
  online->add_option("--window", window, "window size n")->required();
  online->add_option("--threshold", threshold, "alarm threshold T")->required();
  online->callback([&] {
    action = [&] {
      const HypothesisPair pair = model.Build();
      const OnlineConfig config{window, threshold,
                                PrivacyParams(ParseEpsilon(epsilon_text), delta)};
      std::ifstream file;
      LineReader reader(input.Open(in, file), &pair);
      Rng rng(seed);
      const OnlineResult r =
          DetectOnline(pair, [&] { return reader.Next(); }, config, rng);
      if (r.alarmed()) {
        out << "k_tilde=" << *r.k_tilde_global << " alarm_time=" << *r.alarm_time
            << " window_start=" << *r.window_start << '\n';
      } else {
        out << "no_alarm=true\n";
      }
    };
  });

  // bounds
  std::string bound_kind;
  std::optional<double> a_opt;
  std::optional<double> c_opt;
  double beta = 0.1;
  std::size_t n = 0;
  std::size_t k_star = 0;
  ModelFlags bound_model;
  CLI::App* bounds = app.add_subcommand("bounds", "closed-form accuracy bounds");
  bounds
      ->add_option("kind", bound_kind,
                   "offline-mle | offline-private | relaxed-mle | "
                   "relaxed-private | online-alpha | online-threshold")
      ->required()
      ->check(CLI::IsMember({"offline-mle", "offline-private", "relaxed-mle",
                             "relaxed-private", "online-alpha",
                             "online-threshold"}));
  bounds->add_option("--A", a_opt, "sensitivity / tail bound A");
  bounds->add_option("--C,--CM", c_opt, "C (or C_M for the relaxed forms)");
  bounds->add_option("--beta", beta, "failure probability");
  bounds->add_option("--epsilon", epsilon_text, "privacy budget or inf");
  bounds->add_option("--n", n, "window size (online forms)");
  bounds->add_option("--k-star", k_star, "change point (online-threshold)");
  bounds->add_option("--delta", delta, "delta for A_delta when --model is used");
  bound_model.Register(bounds, false);
  bounds->callback([&] {
    action = [&] {
      const bool relaxed = bound_kind.starts_with("relaxed");
      double a = 0.0;
      double c = 0.0;
      if (!bound_model.model.empty()) {
        const HypothesisPair pair = bound_model.Build();
        const KlConstants kl = pair.Kl();
        a = OfflineSensitivity(pair, delta);
        c = relaxed ? kl.c_m : kl.c;
      }
      if (a_opt) a = *a_opt;
      if (c_opt) c = *c_opt;
      if ((bound_kind != "relaxed-mle" && a == 0.0) || c == 0.0) {
        throw CLI::ValidationError("bounds", "need --A and --C, or --model");
      }
      const double eps = ParseEpsilon(epsilon_text);
      std::vector<std::pair<std::string, std::string>> kv{{"bound", bound_kind}};
      if (bound_kind == "online-threshold") {
        const ThresholdRange r = OnlineThresholdRange(a, c, n, k_star, beta, eps);
        kv.insert(kv.end(), {{"t_low", FormatReal(r.t_low)},
                             {"t_high", FormatReal(r.t_high)},
                             {"feasible", Bool(r.feasible)}});
      } else {
        double alpha = 0.0;
        if (bound_kind == "offline-mle") alpha = AlphaMleBounded(a, c, beta);
        if (bound_kind == "offline-private") alpha = AlphaPrivateBounded(a, c, beta, eps);
        if (bound_kind == "relaxed-mle") alpha = AlphaMleRelaxed(c, beta);
        if (bound_kind == "relaxed-private") alpha = AlphaPrivateRelaxed(a, c, beta, eps);
        if (bound_kind == "online-alpha") alpha = OnlineAlpha(a, c, n, beta, eps);
        kv.emplace_back("alpha", FormatReal(alpha));
      }
      kv.insert(kv.end(), {{"A", FormatReal(a)},
                           {relaxed ? "C_M" : "C", FormatReal(c)},
                           {"beta", FormatReal(beta)},
                           {"epsilon", FormatReal(eps)}});
      WriteKeyValues(out, kv);
    };
  });

  // threshold-range
  double fa_rate = 0.1;
  double miss_rate = 0.1;
  std::size_t realizations = 10000;
  CLI::App* threshold_cmd = app.add_subcommand(
      "threshold-range", "empirical quantile search for the online threshold");
  model.Register(threshold_cmd, true);
  threshold_cmd->add_option("--epsilon", epsilon_text, "privacy budget or inf");
  threshold_cmd->add_option("--delta", delta, "tail-bound relaxation (0: exact)");
  threshold_cmd->add_option("--n", n, "window size")->required();
  threshold_cmd->add_option("--k-star", k_star, "change point")->required();
  threshold_cmd->add_option("--fa-rate", fa_rate, "false alarm rate");
  threshold_cmd->add_option("--miss-rate", miss_rate, "miss rate");
  threshold_cmd->add_option("--realizations", realizations, "Monte Carlo size");
  threshold_cmd->add_option("--seed", seed, "random seed");
  threshold_cmd->callback([&] {
    action = [&] {
      const HypothesisPair pair = model.Build();
      Rng rng(seed);
      const EmpiricalThreshold r =
          EmpiricalThresholdRange(pair, ParseEpsilon(epsilon_text), n, k_star,
                                  fa_rate, miss_rate, realizations, rng, delta);
      if (r.low_quantile_undersampled) {
        err << "warning: lower quantile undersampled; raise --realizations\n";
      }
      WriteKeyValues(out, {{"t_low", FormatReal(r.range.t_low)},
                           {"t_high", FormatReal(r.range.t_high)},
                           {"feasible", Bool(r.range.feasible)},
                           {"realizations", std::to_string(realizations)}});
    };
  });

  // simulate-offline / simulate-online
  std::string family = "bernoulli";
  std::string scenario_id = "A";
  std::string epsilons_text;
  std::size_t trials = 1000;
  std::optional<double> sim_delta;
  std::string out_path;
  unsigned workers = 1;
  std::size_t max_len = 0;
  auto register_sim = [&](CLI::App* cmd) {
    cmd->add_option("--family", family, "bernoulli | gaussian")
        ->check(CLI::IsMember({"bernoulli", "gaussian"}));
    cmd->add_option("--scenario", scenario_id, "A | B | C")
        ->check(CLI::IsMember({"A", "B", "C"}));
    cmd->add_option("--epsilons", epsilons_text, "comma-separated, inf allowed");
    cmd->add_option("--trials", trials, "trials per epsilon");
    cmd->add_option("--delta", sim_delta,
                    "tail-bound relaxation (default 0.05 gaussian, 0 bernoulli)");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--out", out_path, "CSV output path")->required();
    cmd->add_option("--workers", workers, "worker threads");
  };
  auto open_out = [&](std::ofstream& file) {
    file.open(out_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::kInvalidInput, "cannot write " + out_path);
  };
  auto label = [&] { return family + "_" + scenario_id; };
  auto effective_delta = [&] {
    return sim_delta ? *sim_delta : (family == "gaussian" ? 0.05 : 0.0);
  };

  CLI::App* sim_off = app.add_subcommand("simulate-offline",
                                         "Monte Carlo accuracy curves, offline");
  register_sim(sim_off);
  sim_off->add_option("--n", n, "sample size (default 200)");
  sim_off->add_option("--k-star", k_star, "change point (default 100)");
  sim_off->callback([&] {
    action = [&] {
      const Scenario sc = MakeScenario(family, scenario_id);
      OfflineScenario s{.id = label(),
                        .true_pair = sc.true_pair,
                        .hypothesized_pair = sc.hypothesized_pair,
                        .n = n ? n : 200,
                        .k_star = k_star ? k_star : 100,
                        .epsilons = ParseEpsilonList(
                            epsilons_text.empty() ? "0.1,0.5,1,inf" : epsilons_text),
                        .trials = trials,
                        .tail_delta = effective_delta(),
                        .master_seed = seed,
                        .workers = workers};
      const std::vector<AccuracyCurve> curves = RunOffline(s);
      std::ofstream file;
      open_out(file);
      WriteOfflineCsv(file, curves);
      WriteKeyValues(out, {{"scenario", s.id},
                           {"trials", std::to_string(s.trials)},
                           {"out", out_path}});
    };
  });

  CLI::App* sim_on = app.add_subcommand("simulate-online",
                                        "Monte Carlo accuracy curves, online");
  register_sim(sim_on);
  sim_on->add_option("--window", window, "window size (default 700)");
  sim_on->add_option("--k-star", k_star, "change point (default 5000)");
  sim_on->add_option("--threshold", threshold, "alarm threshold (default 220)");
  sim_on->add_option("--max-len", max_len, "stream length cap (default k*+n)");
  sim_on->callback([&] {
    action = [&] {
      const Scenario sc = MakeScenario(family, scenario_id);
      const std::size_t w = window ? window : 700;
      const std::size_t ks = k_star ? k_star : 5000;
      OnlineScenario s{.id = label(),
                       .true_pair = sc.true_pair,
                       .hypothesized_pair = sc.hypothesized_pair,
                       .window_n = w,
                       .k_star = ks,
                       .threshold = sim_on->count("--threshold") ? threshold : 220.0,
                       .epsilons = ParseEpsilonList(
                           epsilons_text.empty() ? "0.5,1,inf" : epsilons_text),
                       .trials = trials,
                       .tail_delta = effective_delta(),
                       .master_seed = seed,
                       .max_stream_len = max_len ? max_len : ks + w,
                       .workers = workers};
      const OnlineRunResult r = RunOnline(s);
      std::ofstream file;
      open_out(file);
      WriteOnlineCsv(file, r);
      std::vector<std::pair<std::string, std::string>> kv{
          {"scenario", s.id}, {"trials", std::to_string(s.trials)}};
      for (std::size_t e = 0; e < s.epsilons.size(); ++e) {
        kv.emplace_back("no_alarm_fraction[" + FormatReal(s.epsilons[e]) + "]",
                        FormatReal(r.no_alarm_fraction[e]));
      }
      kv.emplace_back("out", out_path);
      WriteKeyValues(out, kv);
    };
  });

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                     args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    action();
  } catch (const LineError& e) {
    err << "error=" << ErrorName(e.code()) << " line=" << e.line()
        << " message=\"" << OneLine(e.what()) << "\"\n";
    return kExitDataError;
  } catch (const Error& e) {
    err << "error=" << ErrorName(e.code()) << " message=\""
        << OneLine(e.what()) << "\"\n";
    return kExitDataError;
  } catch (const CLI::ValidationError& e) {
    err << "error=usage message=\"" << OneLine(e.what()) << "\"\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace dpcp::cli
