#pragma once

#include <vector>

namespace hmt {

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // unbiased sample variance
  long n = 0;
};

MeanVar mean_var(const std::vector<double>& xs);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(long successes, long trials, double z = 1.959964);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Chi-square survival function P(X > x) with dof degrees of freedom.
double chi2_sf(double x, int dof);

}  // namespace hmt
