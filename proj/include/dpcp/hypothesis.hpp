#pragma once

#include <string>
#include <variant>

#include "dpcp/random.hpp"

namespace dpcp {

// Which distribution of the pair generates an observation.
enum class Regime { kPre, kPost };

struct BernoulliModel {
  double p0;
  double p1;
};

// N(mu0, 1) versus N(mu1, 1).
struct GaussianUnitVarModel {
  double mu0;
  double mu1;
};

struct KlConstants {
  // min{ KL(P0||P1), KL(P1||P0) }
  double c;
  // min_i KL(P_i || (P0+P1)/2), always in [0, log 2]
  double c_m;
};

/// The hypothesized pre-change / post-change distributions (P0, P1).
///
/// Immutable value type. Construction validates the model parameters, so
/// every instance is a well-posed pair with P0 != P1.
class HypothesisPair {
 public:
  static HypothesisPair Bernoulli(double p0, double p1);
  static HypothesisPair GaussianUnitVar(double mu0, double mu1);

  const std::variant<BernoulliModel, GaussianUnitVarModel>& model() const {
    return model_;
  }
  bool is_bernoulli() const {
    return std::holds_alternative<BernoulliModel>(model_);
  }

  // The same pair with the roles of P0 and P1 exchanged.
  HypothesisPair Swapped() const;

  // log(P1(x) / P0(x)). Throws InvalidObservation for a Bernoulli x outside
  // {0, 1}.
  double LogRatio(double x) const;

  // max_x log ratio - min_x log ratio; +inf for the Gaussian pair.
  double DeltaEll() const;

  // max_{i=0,1} Pr_{x~P_i}[ 2|log ratio(x)| > t ], exact for each model.
  double RatioTail(double t) const;

  // A_delta, the tail bound that replaces DeltaEll() when delta > 0.
  // Gaussian uses the closed form 2|mu1-mu0| [Phi^{-1}(1-delta/2) + |mu1-mu0|/2];
  // Bernoulli enumerates its two support points.
  double ADelta(double delta) const;

  KlConstants Kl() const;

  double Sample(Regime regime, Rng& rng) const;

  std::string Describe() const;

 private:
  explicit HypothesisPair(std::variant<BernoulliModel, GaussianUnitVarModel> m)
      : model_(m) {}

  std::variant<BernoulliModel, GaussianUnitVarModel> model_;
};

// Generic A_delta: bisection on the pair's exact RatioTail, to absolute
// tolerance 1e-9. Usable for any model; the built-in models also have direct
// routes through HypothesisPair::ADelta.
double ADeltaByBisection(const HypothesisPair& pair, double delta);

}  // namespace dpcp
