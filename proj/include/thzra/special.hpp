#pragma once

namespace thzra::special {

/// Upper incomplete gamma function Γ(a, t) = ∫_t^∞ s^{a-1} e^{-s} ds.
///
/// Series for t < a + 1, modified Lentz continued fraction otherwise.
/// Requires a > 0 and t ≥ 0.
double gamma_upper_incomplete(double a, double t);

/// Regularized lower incomplete gamma P(a, t) = γ(a, t) / Γ(a).
double gamma_p(double a, double t);

/// Regularized upper incomplete gamma Q(a, t) = Γ(a, t) / Γ(a).
double gamma_q(double a, double t);

// Integer-order forms, valid for any real x (including x < 0), used by the
// finite closed forms where the argument (z - ρ)·L can be negative.
double gamma_upper_integer(int n, double x);
double gamma_lower_integer(int n, double x);

/// CDF of Gamma(shape, scale) at x.
double gamma_cdf(double shape, double scale, double x);

/// Chi-square survival function P[X > x] with `dof` degrees of freedom.
double chi_square_sf(double x, double dof);

/// Smallest x with chi_square_sf(x, dof) <= alpha (bisection).
double chi_square_critical(double dof, double alpha);

}  // namespace thzra::special
