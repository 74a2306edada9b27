#include "roughcb/model.hpp"

#include "roughcb/detail/roots.hpp"
#include "roughcb/errors.hpp"
#include "roughcb/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace roughcb
{
    ModelParams::ModelParams(double alpha, double b, double c)
        : alpha_(alpha), b_(b), c_(c), c0_(0.0)
    {
        if (!(alpha > 0.0 && alpha < 1.0))
        {
            throw ParameterError("alpha must lie in the open interval (0,1), got " + std::to_string(alpha));
        }
        if (!(b >= 0.0) || !std::isfinite(b))
        {
            throw ParameterError("b must be a finite nonnegative number, got " + std::to_string(b));
        }
        if (!(c > 0.0) || !std::isfinite(c))
        {
            throw ParameterError("c must be a finite positive number, got " + std::to_string(c));
        }
        c0_ = std::pow(c / gamma_fn(1.0 - alpha), 1.0 / (1.0 + alpha));
    }

    double laplace_exponent(const ModelParams& p, double lambda)
    {
        if (!(lambda >= 0.0))
        {
            throw DomainError("laplace_exponent: lambda must be >= 0");
        }
        return p.b() * lambda + p.c() * std::pow(lambda, 1.0 + p.alpha());
    }

    double laplace_exponent_derivative(const ModelParams& p, double lambda)
    {
        return p.b() + p.c() * (1.0 + p.alpha()) * std::pow(lambda, p.alpha());
    }

    double levy_density(const ModelParams& p, double y)
    {
        if (!(y > 0.0))
        {
            throw DomainError("levy_density: y must be > 0");
        }
        const double a = p.alpha();
        return p.c() * a * (a + 1.0) / gamma_fn(1.0 - a) * std::pow(y, -a - 2.0);
    }

    double inverse_exponent(const ModelParams& p, double y)
    {
        if (!(y >= 0.0))
        {
            throw DomainError("inverse_exponent: y must be >= 0");
        }
        if (y == 0.0)
        {
            return 0.0;
        }
        const double drift_bound = p.b() > 0.0 ? y / p.b() : 0.0;
        const double stable_bound = std::pow(y / p.c(), 1.0 / (1.0 + p.alpha()));
        // Phi(upper) >= y for either bound, and Phi is convex: Newton started
        // there approaches the root monotonically from the right.
        const double upper = std::max(drift_bound, stable_bound);
        return detail::safeguarded_newton(
            [&](double x) { return laplace_exponent(p, x) - y; },
            [&](double x) { return laplace_exponent_derivative(p, x); },
            0.0, upper + 1.0, upper);
    }

    double scale_w_prime(const ModelParams& p, double x)
    {
        if (!(x > 0.0))
        {
            return 0.0;
        }
        const double a = p.alpha();
        const double xa = std::pow(x, a);
        return xa / x / p.c() * ml_two(a, -(p.b() / p.c()) * xa);
    }

    double scale_w(const ModelParams& p, double x)
    {
        if (!(x > 0.0))
        {
            return 0.0;
        }
        const double a = p.alpha();
        const double xa = std::pow(x, a);
        if (p.critical())
        {
            return xa / (p.c() * gamma_fn(1.0 + a));
        }
        return ml_one_complement(a, -(p.b() / p.c()) * xa) / p.b();
    }

    double one_minus_b_scale(const ModelParams& p, double x)
    {
        if (!(x > 0.0) || p.critical())
        {
            return 1.0;
        }
        const double a = p.alpha();
        return ml_one(a, -(p.b() / p.c()) * std::pow(x, a));
    }
}
