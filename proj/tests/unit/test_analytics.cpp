#include "roughcb/analytics.hpp"
#include "roughcb/errors.hpp"
#include "roughcb/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace roughcb;

namespace
{
    double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("extinction exponent closed form")
{
    const ModelParams p(0.5, 0.0, 1.0);
    // W(t) = 1 at t = Gamma(1.5)^2
    const double t = std::pow(std::tgamma(1.5), 2.0);
    CHECK(scale_w(p, t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(extinction_exponent(p, t, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(extinction_exponent_integral(p, t, 1.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(extinction_exponent(p, 1.0, 0.0) == 0.0);
    CHECK(extinction_exponent_integral(p, 1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(extinction_exponent(p, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(extinction_exponent(p, 1.0, -1.0), DomainError);
}

TEST_CASE("slope of the extinction exponent at zero is the mean")
{
    for (double b : {0.0, 0.7})
    {
        const ModelParams p(0.6, b, 1.2);
        const double h = 1e-6;
        const double slope = extinction_exponent(p, 2.0, h) / h;
        CHECK(std::abs(slope - (1.0 - b * scale_w(p, 2.0))) < 1e-4);
        CHECK(mean_mass(p, 1.0, 2.0) == doctest::Approx(1.0 - b * scale_w(p, 2.0)).epsilon(1e-10));
    }
}

TEST_CASE("integral oracle at b = 0")
{
    const ModelParams p(0.7, 0.0, 2.0);
    for (double lambda : {0.1, 3.0})
    {
        const double w = scale_w(p, 1.5);
        CHECK(rel(extinction_exponent_integral(p, 1.5, lambda), lambda / (1.0 + lambda * w)) < 1e-5);
    }
}

TEST_CASE("extinction exponent is concave, increasing and tends to vbar")
{
    const ModelParams p(0.6, 0.8, 1.0);
    for (double t : {0.3, 1.0, 5.0})
    {
        double prev = 0.0;
        double prev_inc = std::numeric_limits<double>::infinity();
        for (double lambda = 0.1; lambda < 100.0; lambda += 0.1)
        {
            const double v = extinction_exponent(p, t, lambda);
            CHECK(v >= prev);
            CHECK(v - prev <= prev_inc * (1.0 + 1e-12));
            prev_inc = v - prev;
            prev = v;
        }
        if (scale_w(p, t) >= 0.1)
        {
            CHECK(rel(extinction_exponent(p, t, 1e6), vbar(p, t)) < 1e-4);
        }
    }
}

TEST_CASE("vbar and survival")
{
    const ModelParams crit(0.5, 0.0, 1.0);
    CHECK(vbar(crit, 1.0) == doctest::Approx(0.886226925452758).epsilon(1e-12));
    CHECK(vbar(crit, 1.0) > vbar(crit, 2.0));
    CHECK(vbar(crit, 2.0) > vbar(crit, 4.0));
    for (double t : {0.01, 1.0, 100.0})
    {
        CHECK(rel(vbar(crit, t) * std::pow(t, 0.5), std::tgamma(1.5)) < 1e-13);
    }
    const ModelParams sub(0.5, 2.0, 1.0);
    CHECK(rel(vbar(sub, 1e4), std::pow(1e4, -0.5) / std::tgamma(0.5)) < 0.05);

    CHECK(extinction_survival(crit, 1.0, 1.0) == doctest::Approx(0.5877918857330363).epsilon(1e-12));
    const double zeta = 1e-8;
    CHECK(rel(extinction_survival(crit, zeta, 1.0) / (zeta * vbar(crit, 1.0)), 1.0) < 1e-7);
    CHECK(extinction_survival(sub, 1.0, 1e12) < 1e-5);
}

TEST_CASE("progeny exponent and transform")
{
    const ModelParams crit(0.5, 0.0, 1.0);
    CHECK(progeny_exponent(crit, 8.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(progeny_exponent(crit, 0.0) == 0.0);
    CHECK(progeny_laplace(crit, 1.0, 8.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(progeny_laplace(crit, 1.0, 0.0) == 1.0);

    const ModelParams sub(0.5, 1.0, 1.0);
    CHECK(rel(progeny_exponent(sub, 1e-6), std::pow(1e-6, 0.5)) < 1e-3);

    double prev = 1.0;
    for (double lambda = 0.05; lambda < 50.0; lambda *= 1.5)
    {
        const double l = progeny_laplace(sub, 1.3, lambda);
        CHECK(l < prev);
        prev = l;
    }

    // -log E[e^{-lambda T}] / (zeta c^{1/(1+a)} lambda^{a/(1+a)}) = 1 at b = 0
    const ModelParams q(0.7, 0.0, 2.5);
    for (double lambda : {1e-3, 1.0, 1e3})
    {
        const double expected = 2.0 * std::pow(2.5, 1.0 / 1.7) * std::pow(lambda, 0.7 / 1.7);
        CHECK(rel(-std::log(progeny_laplace(q, 2.0, lambda)), expected) < 1e-12);
    }
}

TEST_CASE("mean mass")
{
    CHECK(mean_mass(ModelParams(0.5, 0.0, 1.0), 2.0, 3.0) == 2.0);
    CHECK(mean_mass(ModelParams(0.5, 1.0, 1.0), 1.5, 0.0) == 1.5);
    CHECK(mean_mass(ModelParams(0.5, 1.0, 1.0), 1.0, 1e12) < 1e-4);
}

TEST_CASE("mass Laplace transform")
{
    const ModelParams crit(0.5, 0.0, 1.0);
    // W(1) = 1/Gamma(1.5), v = 1/(1 + W(1))
    const double w = 1.0 / std::tgamma(1.5);
    CHECK(mass_laplace(crit, 1.0, 1.0, 1.0) == doctest::Approx(std::exp(-1.0 / (1.0 + w))).epsilon(1e-12));
    CHECK(mass_laplace(crit, 1.0, 1.0, 0.0) == 1.0);
}

TEST_CASE("tail asymptotes")
{
    const auto et = extinction_tail_asymptote(ModelParams(0.5, 0.0, 1.0), 1.0);
    CHECK(et.kind == TailKind::power_law);
    CHECK(et.exponent == 0.5);
    CHECK(et.constant == doctest::Approx(std::tgamma(1.5)).epsilon(1e-14));
    const auto es = extinction_tail_asymptote(ModelParams(0.5, 2.0, 1.0), 1.0);
    CHECK(es.exponent == 0.5);
    CHECK(es.constant == doctest::Approx(1.0 / std::tgamma(0.5)).epsilon(1e-14));
    CHECK(extinction_tail_asymptote(ModelParams(0.5, 2.0, 1.0), 2.0).constant ==
          doctest::Approx(2.0 * es.constant).epsilon(1e-14));

    const auto pt = progeny_tail_asymptote(ModelParams(0.5, 0.0, 1.0), 1.0);
    CHECK(pt.exponent == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(pt.constant == doctest::Approx(1.0 / std::tgamma(2.0 / 3.0)).epsilon(1e-14));
    const auto ps = progeny_tail_asymptote(ModelParams(0.5, 1.0, 1.0), 1.0);
    CHECK(ps.exponent == 0.5);
    CHECK(ps.constant == doctest::Approx(1.0 / std::tgamma(0.5)).epsilon(1e-14));
    CHECK(progeny_tail_asymptote(ModelParams(0.5, 1.0, 1.0), 3.0).constant ==
          doctest::Approx(3.0 * ps.constant).epsilon(1e-14));
    CHECK(!et.regime_note.empty());
}

TEST_CASE("tail asymptote matches the survival function")
{
    // Critical case: P{tau > t} = 1 - exp(-zeta c Gamma(1+a) t^{-a}) exactly
    const ModelParams p(0.6, 0.0, 1.4);
    const auto a = extinction_tail_asymptote(p, 0.7);
    const double t = 1e8;
    CHECK(rel(extinction_survival(p, 0.7, t), a.constant * std::pow(t, -a.exponent)) < 1e-4);
}

TEST_CASE("Feller baseline")
{
    // b = 0: v_t(lambda) = lambda / (1 + c lambda t)
    CHECK(feller_mass_laplace(0.0, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(feller_mass_laplace(0.0, 1.0, 1.0, 1.0, 0.0) == 1.0);
    CHECK(feller_mass_laplace(1.0, 1.0, 1.5, 0.0, 1.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK(feller_extinction_survival(0.0, 2.0, 1.0, 3.0) == doctest::Approx(1.0 - std::exp(-1.0 / 6.0)).epsilon(1e-14));
    CHECK(feller_progeny_laplace(0.0, 1.0, 1.0, 0.0) == 1.0);
    // b = 0: E[e^{-lambda T}] = exp(-zeta sqrt(lambda / c))
    CHECK(feller_progeny_laplace(0.0, 4.0, 1.0, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

    const auto crit = feller_asymptotes(0.0, 1.0, 1.0);
    CHECK(crit.extinction.exponent == 1.0);
    CHECK(crit.extinction.constant == 1.0);
    const auto c4 = feller_asymptotes(0.0, 4.0, 1.0);
    CHECK(c4.progeny.exponent == 0.5);
    CHECK(c4.progeny.constant == doctest::Approx(1.0 / (2.0 * std::tgamma(0.5))).epsilon(1e-14));

    const auto sub = feller_asymptotes(0.8, 2.0, 1.0);
    CHECK(sub.extinction.kind == TailKind::exponential);
    CHECK(sub.extinction.rate == 0.8);
    CHECK(sub.progeny.kind == TailKind::exponential_bound);
    CHECK(sub.progeny.rate == doctest::Approx(0.64 / 8.0).epsilon(1e-14));
}

TEST_CASE("rough extinction tail is heavier than the Feller one")
{
    for (double a : {0.3, 0.6, 0.9})
    {
        CHECK(extinction_tail_asymptote(ModelParams(a, 0.0, 1.0), 1.0).exponent <
              feller_asymptotes(0.0, 1.0, 1.0).extinction.exponent);
        CHECK(progeny_tail_asymptote(ModelParams(a, 0.0, 1.0), 1.0).exponent <
              feller_asymptotes(0.0, 1.0, 1.0).progeny.exponent);
    }
}

TEST_CASE("gap identity on a few points")
{
    for (double b : {0.0, 0.5, 2.0})
    {
        const ModelParams p(0.6, b, 0.7);
        for (double t : {0.1, 3.0})
        {
            CHECK(rel(gap_integral(p, t), one_minus_b_scale(p, t)) < 1e-8);
        }
    }
}
