#pragma once

namespace dyad {

double log_beta(double a, double b);

// I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// P(F > f) for an F distribution with (d1, d2) degrees of freedom.
double f_distribution_sf(double f, double d1, double d2);

double normal_pdf(double z);
double normal_cdf(double z);

// P(Q <= q) for the studentized range of k groups with nu error degrees of
// freedom, by nested adaptive quadrature.
double studentized_range_cdf(double q, int k, double nu);

}  // namespace dyad
