#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

// Thin layer over Boost's adaptive Gauss-Kronrod rule so that every module
// shares one integrator and one tolerance convention (relative to the L1
// norm of the integrand).
namespace roughcb::quad
{
    inline constexpr double kInf = std::numeric_limits<double>::infinity();

    struct Result
    {
        double value = 0.0;
        double error = 0.0;
    };

    // Adaptive G30K61 on [a, b]; either end may be infinite.
    template <class F>
    Result adaptive(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 15)
    {
        Result r;
        double l1 = 0.0;
        r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, a, b, max_depth, rel_tol, &r.error, &l1);
        return r;
    }

    template <class F>
    double integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 15)
    {
        return adaptive(f, a, b, rel_tol, max_depth).value;
    }

    // Fixed 10-point Gauss-Legendre rule; for short intervals on which the
    // integrand is analytic.
    template <class F>
    double legendre(F&& f, double a, double b)
    {
        return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
    }

    // Double-exponential rule on a finite [a, b] for integrands with
    // algebraic endpoint singularities. f(x, d_left, d_right) receives the
    // distances to both ends, the nearer one computed without cancellation.
    template <class F>
    double endpoint_singular(F&& f, double a, double b, double rel_tol = 1e-10)
    {
        thread_local boost::math::quadrature::tanh_sinh<double> rule;
        auto g = [&](double x, double xc) {
            if (xc < 0.0)
            {
                return f(x, -xc, b - x);
            }
            return f(x, x - a, xc);
        };
        return rule.integrate(g, a, b, rel_tol);
    }
}
