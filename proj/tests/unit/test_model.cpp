#include "roughcb/errors.hpp"
#include "roughcb/model.hpp"
#include "roughcb/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace roughcb;

namespace
{
    double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(ModelParams(0.0, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(ModelParams(1.0, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(ModelParams(0.5, -0.1, 1.0), ParameterError);
    CHECK_THROWS_AS(ModelParams(0.5, 0.0, 0.0), ParameterError);
    const ModelParams p(0.5, 1.0, 1.0);
    CHECK(p.c0() == doctest::Approx(0.6827840632552957).epsilon(1e-12));
    CHECK(p.c0() == doctest::Approx(std::pow(1.0 / std::tgamma(0.5), 2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("Laplace exponent")
{
    CHECK(laplace_exponent(ModelParams(0.5, 0.0, 1.0), 1.0) == 1.0);
    CHECK(laplace_exponent(ModelParams(0.5, 1.0, 2.0), 4.0) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(laplace_exponent(ModelParams(0.6, 1.5, 0.7), 0.0) == 0.0);
    CHECK_THROWS_AS(laplace_exponent(ModelParams(0.5, 0.0, 1.0), -1.0), DomainError);
    const ModelParams p(0.6, 1.5, 0.7);
    const double h = 1e-6;
    CHECK(laplace_exponent_derivative(p, 2.0) ==
          doctest::Approx((laplace_exponent(p, 2.0 + h) - laplace_exponent(p, 2.0 - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("Levy density")
{
    const double at1 = 0.75 / std::tgamma(0.5);
    CHECK(levy_density(ModelParams(0.5, 0.0, 1.0), 1.0) == doctest::Approx(at1).epsilon(1e-14));
    CHECK(levy_density(ModelParams(0.5, 0.0, 1.0), 4.0) == doctest::Approx(at1 * std::pow(4.0, -2.5)).epsilon(1e-14));
    CHECK(levy_density(ModelParams(0.5, 0.0, 2.0), 1.0) == doctest::Approx(2.0 * at1).epsilon(1e-14));
    CHECK_THROWS_AS(levy_density(ModelParams(0.5, 0.0, 1.0), 0.0), DomainError);
}

TEST_CASE("Levy-Khintchine form of the exponent")
{
    // c lambda^{1+alpha} = int_0^inf (e^{-lambda y} - 1 + lambda y) nu(dy)
    const ModelParams p(0.6, 0.0, 1.3);
    for (double lambda : {0.5, 2.0})
    {
        // Below 1e-100 the integrand (~ y^{-alpha}) is below 1e-60.
        auto f = [&](double y) {
            if (y < 1e-100)
            {
                return 0.0;
            }
            const double z = lambda * y;
            // e^{-z} - 1 + z without cancellation
            const double g = z < 1e-3 ? z * z * (0.5 - z / 6.0 + z * z / 24.0) : std::expm1(-z) + z;
            return g * levy_density(p, y);
        };
        // Both pieces have algebraic endpoint singularities; the tail is
        // mapped onto (0, 1] by y = 1/u.
        const double head = quad::endpoint_singular([&](double y, double, double) { return f(y); }, 0.0, 1.0, 1e-12);
        const double tail =
            quad::endpoint_singular(
                [&](double u, double, double) { return u < 1e-100 ? 0.0 : f(1.0 / u) / (u * u); },
                0.0, 1.0, 1e-12);
        const double v = head + tail;
        CHECK(rel(v, laplace_exponent(p, lambda)) < 1e-7);
    }
}

TEST_CASE("inverse exponent")
{
    CHECK(inverse_exponent(ModelParams(0.5, 0.0, 1.0), 8.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(inverse_exponent(ModelParams(0.5, 0.0, 1.0), 0.0) == 0.0);
    const ModelParams p(0.6, 1.5, 0.7);
    CHECK(rel(inverse_exponent(p, laplace_exponent(p, 2.3)), 2.3) < 1e-10);
    for (double y : {1e-9, 1e-3, 1.0, 1e3, 1e9})
    {
        CHECK(rel(laplace_exponent(p, inverse_exponent(p, y)), y) < 1e-10);
    }
}

TEST_CASE("scale function closed forms")
{
    const ModelParams crit(0.5, 0.0, 1.0);
    CHECK(scale_w_prime(crit, 4.0) == doctest::Approx(0.28209479177387814).epsilon(1e-12));
    CHECK(scale_w_prime(crit, -1.0) == 0.0);
    CHECK(scale_w(crit, 1.0) == doctest::Approx(1.1283791670955126).epsilon(1e-12));
    CHECK(scale_w(crit, 0.0) == 0.0);
    CHECK(scale_w(crit, -2.0) == 0.0);

    const ModelParams sub(0.5, 2.0, 1.0);
    const double x = 1e3;
    const double tail = 1.0 * 0.5 * std::pow(x, -1.5) / (4.0 * std::tgamma(0.5));
    CHECK(rel(scale_w_prime(sub, x), tail) < 0.05);
}

TEST_CASE("W is the integral of W'")
{
    const ModelParams p(0.5, 1.0, 1.0);
    // Remove the x^{-1/2} singularity with x = u^2.
    const double v = quad::integrate([&](double u) { return 2.0 * u * scale_w_prime(p, u * u); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(v - scale_w(p, 1.0)) < 1e-8);
}

TEST_CASE("scale function Laplace identity")
{
    // int_0^inf e^{-lambda x} W(x) dx = 1 / Phi(lambda)
    for (double a : {0.3, 0.6, 0.9})
    {
        for (double b : {0.0, 0.5, 2.0})
        {
            const ModelParams p(a, b, 1.0);
            for (double lambda : {0.5, 2.0})
            {
                auto f = [&](double x) { return std::exp(-lambda * x) * scale_w(p, x); };
                const double v = quad::integrate(f, 0.0, 1.0, 1e-11) + quad::integrate(f, 1.0, quad::kInf, 1e-11);
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(lambda);
                CHECK(rel(v, 1.0 / laplace_exponent(p, lambda)) < 1e-5);
            }
        }
    }
}

TEST_CASE("scale function monotone, bW increases to one")
{
    const ModelParams p(0.7, 1.5, 0.8);
    double prev = 0.0;
    for (double x = 0.01; x < 1e5; x *= 2.0)
    {
        const double w = scale_w(p, x);
        CHECK(w > prev);
        CHECK(p.b() * w < 1.0);
        CHECK(rel(one_minus_b_scale(p, x), 1.0 - p.b() * w) < 1e-6);
        prev = w;
    }
    CHECK(p.b() * scale_w(p, 1e8) > 0.99);
}
