#pragma once

#include <cstddef>

namespace dpcp {

// Accuracy widths alpha such that Pr[|k_tilde - k*| > alpha] <= beta. All
// logs are natural. Results above n are returned unclamped; callers that
// compare against data of length n cap them themselves.
//
// epsilon may be +inf, in which case the noise term of the private forms
// vanishes.

enum class BoundKind {
  kMleBounded,
  kPrivateBounded,
  kMleRelaxed,
  kPrivateRelaxed,
  kOnline,
};

struct AccuracyBound {
  double alpha;
  BoundKind which;
  double a;          // sensitivity or tail bound (unused by kMleRelaxed)
  double c_or_c_m;   // C for bounded/online forms, C_M for relaxed forms
  double beta;
  double epsilon;    // +inf for the MLE forms
};

// 2A^2/C^2 log(32/(3 beta))
double AlphaMleBounded(double a, double c, double beta);

// max{ 8A^2/C^2 log(64/(3 beta)), 4A/(C eps) log(16/beta) }
double AlphaPrivateBounded(double a, double c, double beta, double epsilon);

// 67/C_M^2 log(64/(3 beta))
double AlphaMleRelaxed(double c_m, double beta);

// max{ 262/C_M^2 log(128/(3 beta)), 2A log(16/beta) / (C_M eps) }
double AlphaPrivateRelaxed(double a, double c_m, double beta, double epsilon);

struct ThresholdRange {
  double t_low;
  double t_high;
  bool feasible;  // t_low <= t_high
};

ThresholdRange MakeThresholdRange(double t_low, double t_high);

// Threshold interval [T_L, T_U] for the online detector:
//   T_L = 2A sqrt(2 log(64 k*/beta)) - C + 16A/eps log(8 k*/beta)
//   T_U = nC/2 - (A/2) sqrt(n log(8/beta)) - 16A/eps log(8 k*/beta)
// Requires k* >= n/2.
ThresholdRange OnlineThresholdRange(double a, double c, std::size_t n,
                                    std::size_t k_star, double beta,
                                    double epsilon);

// max{ 16A^2/C^2 log(32n/beta), 4A/(C eps) log(8n/beta) }.
// NOTE: instantiating the offline bound at (beta/2n, eps/2) gives larger
// constants, 32A^2/C^2 log(64n/beta) and 8A/(C eps) log(16n/beta).
double OnlineAlpha(double a, double c, std::size_t n, double beta,
                   double epsilon);

AccuracyBound Evaluate(BoundKind which, double a, double c_or_c_m, double beta,
                       double epsilon, std::size_t n = 0);

}  // namespace dpcp
