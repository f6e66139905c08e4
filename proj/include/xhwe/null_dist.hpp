#pragma once

#include <cstdint>

namespace xhwe {

/// Reference null distribution of a test statistic: either a central
/// chi-square with `df` degrees of freedom, or the two-component mixture
/// X1 + w*X2 with X1, X2 independent chi-square(1).
struct NullSpec {
  enum class Kind { ChiSq, Mixture };
  Kind kind = Kind::ChiSq;
  int df = 1;        // ChiSq only
  double weight = 0; // Mixture only, in [0,1]

  static NullSpec chisq(int df) { return {Kind::ChiSq, df, 0.0}; }
  static NullSpec mixture(double w) { return {Kind::Mixture, 0, w}; }

  double sf(double x) const;
  double log_sf(double x) const;  // natural log
};

/// ln of the upper-tail probability P(chisq_df > x).
double chisq_log_sf(double x, int df);

/// Upper-tail probability P(chisq_df > x).
double chisq_sf(double x, int df);

/// ln erfc(y), accurate for large y where erfc underflows.
double log_erfc(double y);

/// ln P(X1 + w*X2 > x) for independent chi-square(1) X1, X2.
double mixture_log_sf(double x, double w);

double mixture_sf(double x, double w);

/// x such that mixture_sf(x, w) == alpha.
double mixture_quantile(double alpha, double w);

/// Empirical (1-alpha)-quantile of `draws` samples of X1 + w*X2.
/// Deterministic given (seed).
double mc_mixture_quantile(double alpha, double w, std::int64_t draws,
                           std::uint64_t seed);

}  // namespace xhwe
