#include "thzra/special.hpp"

#include <cmath>
#include <limits>

#include "thzra/error.hpp"

namespace thzra::special {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;

// Σ t^n / (a (a+1) ... (a+n)); returns the bare sum so callers pick the prefactor.
double lower_series(double a, double t)
{
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= t / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps)
            break;
    }
    return sum;
}

// Continued fraction for Γ(a,t) e^{t} t^{-a} (modified Lentz).
double upper_fraction(double a, double t)
{
    constexpr double tiny = 1e-300;
    double b = t + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps)
            break;
    }
    return h;
}

void check_args(double a, double t)
{
    if (!(a > 0.0) || !(t >= 0.0))
        throw Error(ErrorCode::DomainError, "incomplete gamma requires a > 0 and t >= 0");
}

}  // namespace

double gamma_p(double a, double t)
{
    check_args(a, t);
    if (t == 0.0)
        return 0.0;
    if (std::isinf(t))
        return 1.0;
    double log_pref = -t + a * std::log(t) - std::lgamma(a);
    if (t < a + 1.0)
        return std::exp(log_pref) * lower_series(a, t);
    return 1.0 - std::exp(log_pref) * upper_fraction(a, t);
}

double gamma_q(double a, double t)
{
    check_args(a, t);
    if (t == 0.0)
        return 1.0;
    if (std::isinf(t))
        return 0.0;
    double log_pref = -t + a * std::log(t) - std::lgamma(a);
    if (t < a + 1.0)
        return 1.0 - std::exp(log_pref) * lower_series(a, t);
    return std::exp(log_pref) * upper_fraction(a, t);
}

double gamma_upper_incomplete(double a, double t)
{
    check_args(a, t);
    if (t == 0.0)
        return std::tgamma(a);
    if (std::isinf(t))
        return 0.0;
    double log_pref = -t + a * std::log(t);
    if (t < a + 1.0)
        return std::tgamma(a) - std::exp(log_pref) * lower_series(a, t);
    return std::exp(log_pref) * upper_fraction(a, t);
}

double gamma_upper_integer(int n, double x)
{
    if (n < 1)
        throw Error(ErrorCode::DomainError, "integer incomplete gamma requires n >= 1");
    // (n-1)! e^{-x} Σ_{j<n} x^j / j!
    double term = 1.0;
    double sum = 1.0;
    double factorial = 1.0;
    for (int j = 1; j < n; ++j) {
        term *= x / j;
        sum += term;
        factorial *= j;
    }
    return factorial * std::exp(-x) * sum;
}

double gamma_lower_integer(int n, double x)
{
    if (n < 1)
        throw Error(ErrorCode::DomainError, "integer incomplete gamma requires n >= 1");
    if (x == 0.0)
        return 0.0;
    if (x < 0.0) {
        // x^n Σ_m (-x)^m / (m! (n+m)): every term has the same sign.
        double term = 1.0;
        double sum = 1.0 / n;
        for (int m = 1; m < kMaxIterations; ++m) {
            term *= -x / m;
            double add = term / (n + m);
            sum += add;
            if (add < sum * kEps)
                break;
        }
        return std::pow(x, n) * sum;
    }
    if (x < n + 1.0)
        return std::exp(-x + n * std::log(x)) * lower_series(n, x);
    return std::tgamma(static_cast<double>(n)) - gamma_upper_integer(n, x);
}

double gamma_cdf(double shape, double scale, double x)
{
    if (x <= 0.0)
        return 0.0;
    return gamma_p(shape, x / scale);
}

double chi_square_sf(double x, double dof)
{
    if (x <= 0.0)
        return 1.0;
    return gamma_q(0.5 * dof, 0.5 * x);
}

double chi_square_critical(double dof, double alpha)
{
    double lo = 0.0;
    double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 50.0;
    while (chi_square_sf(hi, dof) > alpha)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (chi_square_sf(mid, dof) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace thzra::special
