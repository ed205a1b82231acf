#pragma once

// Scalar special functions needed by the generator: standard normal CDF
// and quantile, the regularized incomplete beta, and the Student t CDF.

namespace cumstream {

double norm_cdf(double x);

// Standard normal quantile.  Rational approximation refined by one
// Halley step against erfc; absolute error is near machine precision.
// Pre: 0 < p < 1, otherwise throws std::domain_error.
double norm_cdf_inv(double p);

// I_x(a, b) by continued fraction.  Pre: a > 0, b > 0, 0 <= x <= 1.
double reg_incomplete_beta(double a, double b, double x);

// CDF of the Student t distribution with dof degrees of freedom.
// Pre: dof > 0.
double student_t_cdf(double x, double dof);

}  // namespace cumstream
