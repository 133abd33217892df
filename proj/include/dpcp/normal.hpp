#pragma once

namespace dpcp {

// Standard normal CDF.
double NormalCdf(double x);

// Upper tail 1 - Phi(x), accurate for large x.
double NormalSurvival(double x);

// Inverse of the standard normal CDF for p in (0, 1). Acklam's rational
// approximation followed by one Halley correction step against erfc, which
// brings the absolute error well below 1e-12 over the usable range.
double NormalQuantile(double p);

}  // namespace dpcp
