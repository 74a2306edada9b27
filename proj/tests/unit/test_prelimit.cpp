#include "roughcb/errors.hpp"
#include "roughcb/model.hpp"
#include "roughcb/prelimit.hpp"
#include "roughcb/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace roughcb;

namespace
{
    double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("gamma_n rule")
{
    for (std::int64_t n : {1, 10, 1000})
    {
        CHECK(make_discrete(ModelParams(0.6, 0.0, 1.0), n).gamma_n() == 0.6);
    }
    const ModelParams p(0.5, 1.0, 1.0);
    const DiscreteModel dm = make_discrete(p, 100);
    CHECK(dm.gamma_n() == doctest::Approx(0.5 * (1.0 - 0.1 / p.c0())).epsilon(1e-14));
    CHECK_THROWS_AS(make_discrete(p, 1), ParameterError);
    CHECK_THROWS_AS(make_discrete(p, 0), ParameterError);

    for (std::int64_t n : {50, 1000, 100000})
    {
        const DiscreteModel d = make_discrete(ModelParams(0.6, 2.0, 0.8), n);
        const double lhs = std::pow(static_cast<double>(n), 0.6) * (1.0 - d.gamma_n() / 0.6);
        CHECK(rel(lhs, 2.0 / d.c0()) < 1e-12);
    }
}

TEST_CASE("jump and initial laws")
{
    const DiscreteModel dm = make_discrete(ModelParams(0.5, 0.0, 1.0), 10);
    CHECK(jump_tail(dm, 0.0) == 1.0);
    CHECK(jump_tail(dm, 1.0) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
    CHECK(sample_initial(dm, 0.25) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(sample_jump(dm, 1.0 - 1e-15) < 1e-14);
    CHECK_THROWS_AS(sample_jump(dm, 0.0), DomainError);
    CHECK_THROWS_AS(sample_jump(dm, 1.0), DomainError);
    CHECK_THROWS_AS(sample_initial(dm, 1.5), DomainError);

    std::mt19937_64 eng(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int m = 1'000'000;
    int above = 0;
    for (int i = 0; i < m; ++i)
    {
        double u = unif(eng);
        while (u == 0.0)
        {
            u = unif(eng);
        }
        above += sample_initial(dm, u) > 3.0 ? 1 : 0;
    }
    const double p_hat = static_cast<double>(above) / m;
    CHECK(std::abs(p_hat - 0.5) < 3.0 * std::sqrt(0.25 / m));
}

TEST_CASE("jump mean is 1/alpha")
{
    // Finite variance needs alpha > 1 in the tail exponent; use the exact
    // mean of the inverse-CDF map instead of a sample average.
    const DiscreteModel dm = make_discrete(ModelParams(0.5, 0.0, 1.0), 10);
    const double mean = quad::endpoint_singular(
        [&](double u, double, double) { return u < 1.0 ? sample_jump(dm, u) : 0.0; }, 0.0, 1.0);
    CHECK(rel(mean, 2.0) < 1e-6);
}

TEST_CASE("discrete Laplace exponent")
{
    const DiscreteModel dm = make_discrete(ModelParams(0.6, 0.0, 1.0), 64);
    CHECK(discrete_exponent(dm, 0.0) == 0.0);
    const double big = 1e7;
    CHECK(rel(discrete_exponent(dm, big), big - dm.gamma_n()) < 1e-9);

    // Against the jump Laplace transform by direct quadrature.
    for (double lambda : {0.1, 1.0, 5.0})
    {
        const double direct = quad::integrate(
            [&](double x) { return std::exp(-lambda * x) * 1.6 * std::pow(1.0 + x, -2.6); }, 0.0, quad::kInf, 1e-12);
        CHECK(rel(jump_laplace(dm, lambda), direct) < 1e-9);
    }

    const double h = 1e-6;
    CHECK(discrete_exponent_derivative(dm, 0.7) ==
          doctest::Approx((discrete_exponent(dm, 0.7 + h) - discrete_exponent(dm, 0.7 - h)) / (2 * h)).epsilon(1e-7));
    CHECK(discrete_inverse(dm, 0.0) == 0.0);
    CHECK(rel(discrete_inverse(dm, discrete_exponent(dm, 0.7)), 0.7) < 1e-9);
}

TEST_CASE("rescaled prelimit exponent converges")
{
    const ModelParams p(0.3, 0.0, 1.0);
    const std::int64_t n = 4096;
    const DiscreteModel dm = make_discrete(p, n);
    const double nn = static_cast<double>(n);
    CHECK(rel(std::pow(nn, 1.3) * discrete_exponent(dm, p.c0() / nn), laplace_exponent(p, 1.0)) < 0.01);
    CHECK(rel(nn * discrete_inverse(dm, std::pow(nn, -1.3)), p.c0() * inverse_exponent(p, 1.0)) < 0.01);
}

TEST_CASE("prelimit error decays like n^{-(1-alpha)}")
{
    const ModelParams p(0.5, 0.0, 1.0);
    auto error = [&](std::int64_t n) {
        const DiscreteModel dm = make_discrete(p, n);
        const double nn = static_cast<double>(n);
        return rel(std::pow(nn, 1.5) * discrete_exponent(dm, p.c0() / nn), laplace_exponent(p, 1.0));
    };
    const double ratio = error(4096) / error(65536);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("renewal table")
{
    const DiscreteModel dm = make_discrete(ModelParams(0.6, 0.0, 1.0), 64);
    CHECK_THROWS_AS(discrete_scale(dm, 0.0, 10.0), DomainError);
    const ScaleTable t = discrete_scale(dm, 0.01, 200.0);
    CHECK(t.values[0] == 1.0);
    CHECK(t.at(-1.0) == 0.0);
    CHECK_THROWS_AS(t.at(201.0), DomainError);
    for (std::size_t i = 1; i < t.values.size(); ++i)
    {
        REQUIRE(t.values[i] >= t.values[i - 1]);
    }

    // int_0^inf e^{-lambda x} W(x) dx = 1/Phi(lambda): table part by the
    // trapezoidal rule, tail beyond x_max from the power-law growth W ~ C x^alpha
    // (bounded by the last value times e^{-lambda x_max}/lambda at lambda = 1).
    const double lambda = 1.0;
    const ScaleTable s = discrete_scale(dm, 0.005, 40.0);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
    {
        const double x = s.step * static_cast<double>(i);
        sum += 0.5 * s.step * (std::exp(-lambda * x) * s.values[i] + std::exp(-lambda * (x + s.step)) * s.values[i + 1]);
    }
    CHECK(rel(sum, 1.0 / discrete_exponent(dm, lambda)) < 1e-3);
}

TEST_CASE("renewal table step refinement")
{
    const DiscreteModel dm = make_discrete(ModelParams(0.6, 0.5, 1.0), 64);
    const double coarse = discrete_scale(dm, 0.02, 50.0).values.back();
    const double mid = discrete_scale(dm, 0.01, 50.0).values.back();
    const double fine = discrete_scale(dm, 0.005, 50.0).values.back();
    CHECK(std::abs(fine - mid) < std::abs(mid - coarse));
    CHECK(rel(mid, fine) < 1e-3);
}

TEST_CASE("renewal table converges to the limit scale function")
{
    const ModelParams p(0.3, 0.0, 1.0);
    const std::int64_t n = 1024;
    const DiscreteModel dm = make_discrete(p, n);
    const double y = dm.level_for_time(1.0);
    const ScaleTable t = discrete_scale(dm, 0.05, y);
    CHECK(rel(std::pow(1024.0, -0.3) * t.at(y), p.c0() * scale_w(p, 1.0)) < 0.02);
}

TEST_CASE("local time Laplace transforms")
{
    const DiscreteModel dm = make_discrete(ModelParams(0.6, 0.0, 1.0), 64);
    CHECK(z_laplace_from_t(dm, 2.0, std::numbers::ln2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(z_laplace_from_t(dm, 2.0, 0.0) == 1.0);
    CHECK(z_laplace_from_t(dm, 1.0, 0.8) == 1.0);
    CHECK_THROWS_AS(z_laplace_from_t(dm, 0.5, 1.0), DomainError);

    // Geometric pgf: p / (1 - (1-p) e^{-lambda}), p = 1/W
    for (double w : {1.5, 3.0, 40.0})
    {
        for (double lambda : {0.1, 1.0, 4.0})
        {
            const double q = 1.0 / w;
            CHECK(rel(z_laplace_from_t(dm, w, lambda), q / (1.0 - (1.0 - q) * std::exp(-lambda))) < 1e-14);
        }
    }

    CHECK(z_laplace_from_x(dm, 2.0, 1.0, 0.0) == 1.0);
    CHECK(z_laplace_from_x(dm, 2.0, 2.0, 0.9) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(z_laplace_from_x(dm, 2.0, 1.0, std::numbers::ln2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(z_laplace_from_x(dm, 2.0, 3.0, 1.0), DomainError);
}
