#include "roughcb/analytics.hpp"

#include "roughcb/errors.hpp"
#include "roughcb/quadrature.hpp"
#include "roughcb/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace roughcb
{
    namespace
    {
        void check_time(double t, const char* who)
        {
            if (!(t > 0.0) || !std::isfinite(t))
            {
                throw DomainError(std::string(who) + ": t must be finite and > 0");
            }
        }

        void check_lambda(double lambda, const char* who)
        {
            if (!(lambda >= 0.0))
            {
                throw DomainError(std::string(who) + ": lambda must be >= 0");
            }
        }

        void check_zeta(double zeta, const char* who)
        {
            if (!(zeta > 0.0) || !std::isfinite(zeta))
            {
                throw DomainError(std::string(who) + ": zeta must be finite and > 0");
            }
        }

        void check_feller(double b, double c, const char* who)
        {
            if (!(b >= 0.0) || !(c > 0.0))
            {
                throw ParameterError(std::string(who) + ": need b >= 0 and c > 0");
            }
        }

        // (1 - e^{-bt}) / b, continuous at b = 0.
        double feller_horizon(double b, double t)
        {
            return b > 0.0 ? -std::expm1(-b * t) / b : t;
        }
    }

    double extinction_exponent(const ModelParams& p, double t, double lambda)
    {
        check_time(t, "extinction_exponent");
        check_lambda(lambda, "extinction_exponent");
        const double w = scale_w(p, t);
        return lambda * one_minus_b_scale(p, t) / (1.0 + lambda * w);
    }

    double increment_integral(const ModelParams& p, double t)
    {
        check_time(t, "increment_integral");
        const double a = p.alpha();
        const double wt = scale_w(p, t);

        // alpha x^{-alpha-1} (W(t) - W(t-x)) on (0, t). For small x the
        // increment over x is the mean of W' on [t-x, t], which avoids
        // subtracting two nearly equal values (and 0/0 as x -> 0).
        auto integrand = [&](double, double x, double y) {
            if (x <= 1e-3 * t)
            {
                const double mean_slope = quad::legendre([&](double s) { return scale_w_prime(p, t - x * s); }, 0.0, 1.0);
                return a * std::pow(x, -a) * mean_slope;
            }
            return a * std::pow(x, -a - 1.0) * (wt - scale_w(p, y));
        };
        const double inner = quad::endpoint_singular(integrand, 0.0, t, 1e-10);

        return wt * std::pow(t, -a) + inner;
    }

    double extinction_exponent_integral(const ModelParams& p, double t, double lambda)
    {
        check_time(t, "extinction_exponent_integral");
        check_lambda(lambda, "extinction_exponent_integral");
        const double wt = scale_w(p, t);
        const double k = p.c() / gamma_fn(1.0 - p.alpha());
        return k * lambda / (lambda * wt + 1.0) * increment_integral(p, t);
    }

    double gap_integral(const ModelParams& p, double t)
    {
        check_time(t, "gap_integral");
        const double a = p.alpha();
        const double ratio = p.b() / p.c();

        // x in (0, t/2]: u = x^{1-alpha}, x^{-alpha} dx = du / (1-alpha).
        const double inv_one_minus = 1.0 / (1.0 - a);
        auto near_zero = [&](double u) {
            const double x = std::pow(u, inv_one_minus);
            return scale_w_prime(p, t - x) * inv_one_minus;
        };
        const double part_a = quad::integrate(near_zero, 0.0, std::pow(0.5 * t, 1.0 - a), 1e-9);

        // y = t - x in (0, t/2): s = y^alpha, W'(y) dy = E_{alpha,alpha}(-(b/c) s) / (c alpha) ds.
        const double inv_a = 1.0 / a;
        auto near_t = [&](double s) {
            const double y = std::pow(s, inv_a);
            return ml_two(a, -ratio * s) / (p.c() * a) * std::pow(t - y, -a);
        };
        const double part_b = quad::integrate(near_t, 0.0, std::pow(0.5 * t, a), 1e-9);

        return p.c() / gamma_fn(1.0 - a) * (part_a + part_b);
    }

    double vbar(const ModelParams& p, double t)
    {
        check_time(t, "vbar");
        return one_minus_b_scale(p, t) / scale_w(p, t);
    }

    double extinction_survival(const ModelParams& p, double zeta, double t)
    {
        check_zeta(zeta, "extinction_survival");
        return -std::expm1(-zeta * vbar(p, t));
    }

    double progeny_exponent(const ModelParams& p, double lambda)
    {
        check_lambda(lambda, "progeny_exponent");
        return p.c() * std::pow(inverse_exponent(p, lambda), p.alpha());
    }

    double progeny_laplace(const ModelParams& p, double zeta, double lambda)
    {
        check_zeta(zeta, "progeny_laplace");
        return std::exp(-zeta * progeny_exponent(p, lambda));
    }

    double mass_laplace(const ModelParams& p, double zeta, double t, double lambda)
    {
        check_zeta(zeta, "mass_laplace");
        return std::exp(-zeta * extinction_exponent(p, t, lambda));
    }

    TailAsymptote extinction_tail_asymptote(const ModelParams& p, double zeta)
    {
        check_zeta(zeta, "extinction_tail_asymptote");
        const double a = p.alpha();
        TailAsymptote r;
        r.kind = TailKind::power_law;
        r.exponent = a;
        if (p.critical())
        {
            r.constant = zeta * p.c() * gamma_fn(1.0 + a);
            r.regime_note = "critical (b = 0): P{tau > t} ~ zeta c Gamma(1+alpha) t^{-alpha}";
        }
        else
        {
            r.constant = zeta * p.c() / gamma_fn(1.0 - a);
            r.regime_note = "subcritical (b > 0): P{tau > t} ~ zeta c / Gamma(1-alpha) t^{-alpha}";
        }
        return r;
    }

    TailAsymptote progeny_tail_asymptote(const ModelParams& p, double zeta)
    {
        check_zeta(zeta, "progeny_tail_asymptote");
        const double a = p.alpha();
        TailAsymptote r;
        r.kind = TailKind::power_law;
        if (p.critical())
        {
            const double e = 1.0 / (1.0 + a);
            r.exponent = a * e;
            r.constant = zeta * std::pow(p.c(), e) / gamma_fn(e);
            r.regime_note = "critical (b = 0): P{T > x} ~ zeta c^{1/(1+alpha)} / Gamma(1/(1+alpha)) x^{-alpha/(1+alpha)}";
        }
        else
        {
            r.exponent = a;
            r.constant = zeta * p.c() / (std::pow(p.b(), a) * gamma_fn(1.0 - a));
            r.regime_note = "subcritical (b > 0): P{T > x} ~ zeta c / (b^alpha Gamma(1-alpha)) x^{-alpha}";
        }
        return r;
    }

    double mean_mass(const ModelParams& p, double zeta, double t)
    {
        check_zeta(zeta, "mean_mass");
        if (!(t >= 0.0))
        {
            throw DomainError("mean_mass: t must be >= 0");
        }
        return zeta * one_minus_b_scale(p, t);
    }

    double feller_mass_laplace(double b, double c, double zeta, double t, double lambda)
    {
        check_feller(b, c, "feller_mass_laplace");
        check_zeta(zeta, "feller_mass_laplace");
        check_lambda(lambda, "feller_mass_laplace");
        if (!(t >= 0.0))
        {
            throw DomainError("feller_mass_laplace: t must be >= 0");
        }
        const double v = lambda * std::exp(-b * t) / (1.0 + c * lambda * feller_horizon(b, t));
        return std::exp(-zeta * v);
    }

    double feller_extinction_survival(double b, double c, double zeta, double t)
    {
        check_feller(b, c, "feller_extinction_survival");
        check_zeta(zeta, "feller_extinction_survival");
        check_time(t, "feller_extinction_survival");
        return -std::expm1(-zeta * std::exp(-b * t) / (c * feller_horizon(b, t)));
    }

    double feller_progeny_laplace(double b, double c, double zeta, double lambda)
    {
        check_feller(b, c, "feller_progeny_laplace");
        check_zeta(zeta, "feller_progeny_laplace");
        check_lambda(lambda, "feller_progeny_laplace");
        if (lambda == 0.0)
        {
            return 1.0;
        }
        // (sqrt(b^2 + 4 c lambda) - b) / (2c), rationalised to keep precision for small lambda.
        const double root = std::sqrt(b * b + 4.0 * c * lambda);
        const double v = 2.0 * lambda / (root + b);
        return std::exp(-zeta * v);
    }

    FellerAsymptotes feller_asymptotes(double b, double c, double zeta)
    {
        check_feller(b, c, "feller_asymptotes");
        check_zeta(zeta, "feller_asymptotes");
        FellerAsymptotes r;
        if (b == 0.0)
        {
            r.extinction.kind = TailKind::power_law;
            r.extinction.exponent = 1.0;
            r.extinction.constant = zeta / c;
            r.extinction.regime_note = "Feller, critical: P{tau > t} ~ zeta / (c t)";
            r.progeny.kind = TailKind::power_law;
            r.progeny.exponent = 0.5;
            r.progeny.constant = zeta / (std::sqrt(c) * std::sqrt(std::numbers::pi));
            r.progeny.regime_note = "Feller, critical: P{T > x} ~ zeta / (sqrt(c) Gamma(1/2)) x^{-1/2}";
        }
        else
        {
            r.extinction.kind = TailKind::exponential;
            r.extinction.rate = b;
            r.extinction.constant = zeta * b / c;
            r.extinction.regime_note = "Feller, subcritical: P{tau > t} ~ zeta (b/c) e^{-b t}";
            r.progeny.kind = TailKind::exponential_bound;
            r.progeny.rate = b * b / (4.0 * c);
            r.progeny.constant = std::exp(b * zeta / (2.0 * c));
            r.progeny.regime_note = "Feller, subcritical: P{T > x} <= exp(b zeta / (2c) - b^2 x / (4c))";
        }
        return r;
    }
}
