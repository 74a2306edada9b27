#include "roughcb/prelimit.hpp"

#include "roughcb/detail/roots.hpp"
#include "roughcb/errors.hpp"
#include "roughcb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace roughcb
{
    namespace
    {
        void check_unit_interval(double u, const char* who)
        {
            if (!(u > 0.0 && u < 1.0))
            {
                throw DomainError(std::string(who) + ": u must lie in (0,1)");
            }
        }

        // int_0^inf g(x) (1+x)^{-1-alpha} dx. Near 0, g varies on the scale
        // 1/lambda, so [0, x1] with x1 = min(1, 40/lambda) is integrated in x;
        // the rest through w = (1+x)^{-alpha}, which maps the heavy tail onto
        // (0, w1] with a bounded integrand.
        template <class G>
        double against_jump_tail(double alpha, double lambda, G g, double rel_tol)
        {
            const double x1 = std::min(1.0, 40.0 / lambda);
            const double head = quad::integrate([&](double x) { return g(x) * std::pow(1.0 + x, -1.0 - alpha); },
                                                0.0, x1, rel_tol);
            const double inv_alpha = 1.0 / alpha;
            const double w1 = std::pow(1.0 + x1, -alpha);
            const double tail = quad::integrate([&](double w) { return g(std::expm1(-inv_alpha * std::log(w))); },
                                                0.0, w1, rel_tol) /
                                alpha;
            return head + tail;
        }

        // int_0^inf (1 - e^{-lambda x}) (1+x)^{-1-alpha} dx
        double tail_gap(double alpha, double lambda)
        {
            if (lambda == 0.0)
            {
                return 0.0;
            }
            return against_jump_tail(alpha, lambda, [=](double x) { return -std::expm1(-lambda * x); }, 1e-13);
        }

        // int_0^inf x e^{-lambda x} (1+x)^{-1-alpha} dx, lambda > 0.
        double tail_gap_slope(double alpha, double lambda)
        {
            return against_jump_tail(alpha, lambda, [=](double x) { return x * std::exp(-lambda * x); }, 1e-12);
        }
    }

    DiscreteModel make_discrete(const ModelParams& p, std::int64_t n)
    {
        if (n < 1)
        {
            throw ParameterError("make_discrete: n must be a positive integer");
        }
        const double na = std::pow(static_cast<double>(n), p.alpha());
        const double ratio = p.b() / p.c0();
        if (na <= ratio)
        {
            throw ParameterError("make_discrete: n^alpha = " + std::to_string(na) + " does not exceed b/c0 = " +
                                 std::to_string(ratio) + "; the arrival rate would be nonpositive, choose a larger n");
        }
        const double gamma_n = p.alpha() * (1.0 - ratio / na);
        return DiscreteModel(p, n, gamma_n);
    }

    double jump_tail(const DiscreteModel& dm, double x)
    {
        if (x < 0.0)
        {
            return 1.0;
        }
        return std::pow(1.0 + x, -(dm.alpha() + 1.0));
    }

    double sample_jump(const DiscreteModel& dm, double u)
    {
        check_unit_interval(u, "sample_jump");
        return std::expm1(-std::log(u) / (dm.alpha() + 1.0));
    }

    double sample_initial(const DiscreteModel& dm, double u)
    {
        check_unit_interval(u, "sample_initial");
        return std::expm1(-std::log(u) / dm.alpha());
    }

    double jump_laplace(const DiscreteModel& dm, double lambda)
    {
        if (!(lambda >= 0.0))
        {
            throw DomainError("jump_laplace: lambda must be >= 0");
        }
        // 1 - Lhat(lambda) = lambda * int e^{-lambda x} tail(x) dx
        const double a = dm.alpha();
        return 1.0 - lambda * (1.0 / a - tail_gap(a, lambda));
    }

    double discrete_exponent(const DiscreteModel& dm, double lambda)
    {
        if (!(lambda >= 0.0))
        {
            throw DomainError("discrete_exponent: lambda must be >= 0");
        }
        // lambda - gamma (1 - Lhat) = lambda [(1 - gamma/alpha) + gamma * tail_gap],
        // a sum of nonnegative terms even when gamma = alpha.
        const double a = dm.alpha();
        const double g = dm.gamma_n();
        return lambda * ((1.0 - g / a) + g * tail_gap(a, lambda));
    }

    double discrete_exponent_derivative(const DiscreteModel& dm, double lambda)
    {
        const double a = dm.alpha();
        const double g = dm.gamma_n();
        if (lambda == 0.0)
        {
            return 1.0 - g / a;
        }
        return (1.0 - g / a) + g * (tail_gap(a, lambda) + lambda * tail_gap_slope(a, lambda));
    }

    double discrete_inverse(const DiscreteModel& dm, double y)
    {
        if (!(y >= 0.0))
        {
            throw DomainError("discrete_inverse: y must be >= 0");
        }
        if (y == 0.0)
        {
            return 0.0;
        }
        // Phi(l) >= l - gamma_n, so y + gamma_n is to the right of the root;
        // tighten by halving while that stays true.
        double hi = y + dm.gamma_n();
        while (discrete_exponent(dm, 0.5 * hi) >= y)
        {
            hi *= 0.5;
        }
        return detail::safeguarded_newton(
            [&](double x) { return discrete_exponent(dm, x) - y; },
            [&](double x) { return discrete_exponent_derivative(dm, x); },
            0.5 * hi, hi, hi);
    }

    double ScaleTable::at(double x) const
    {
        if (x < 0.0)
        {
            return 0.0;
        }
        const double pos = x / step;
        const auto k = static_cast<std::size_t>(pos);
        if (k + 1 >= values.size())
        {
            if (k + 1 == values.size() && pos <= static_cast<double>(k) * (1.0 + 1e-12))
            {
                return values.back();
            }
            throw DomainError("ScaleTable::at: x = " + std::to_string(x) + " beyond table range " +
                              std::to_string(x_max()));
        }
        const double frac = pos - static_cast<double>(k);
        return values[k] + frac * (values[k + 1] - values[k]);
    }

    double default_scale_step(double x_max)
    {
        return std::min(0.01, x_max / 1e4);
    }

    ScaleTable discrete_scale(const DiscreteModel& dm, double step, double x_max)
    {
        if (!(step > 0.0))
        {
            throw DomainError("discrete_scale: step must be > 0");
        }
        if (!(x_max >= step))
        {
            throw DomainError("discrete_scale: x_max must be >= step");
        }
        const auto count = static_cast<std::size_t>(std::ceil(x_max / step - 1e-9)) + 1;
        std::vector<double> kernel(count);
        for (std::size_t j = 0; j < count; ++j)
        {
            kernel[j] = jump_tail(dm, step * static_cast<double>(j));
        }

        const double gh = dm.gamma_n() * step;
        const double diag = 1.0 - 0.5 * gh * kernel[0];
        ScaleTable table;
        table.step = step;
        table.values.assign(count, 0.0);
        table.values[0] = 1.0;
        const double* w = table.values.data();
        for (std::size_t k = 1; k < count; ++k)
        {
            double acc = 0.5 * kernel[k] * w[0];
            for (std::size_t j = 1; j < k; ++j)
            {
                acc += kernel[j] * w[k - j];
            }
            table.values[k] = (1.0 + gh * acc) / diag;
        }
        return table;
    }

    ScaleTable discrete_scale(const DiscreteModel& dm, double x_max)
    {
        return discrete_scale(dm, default_scale_step(x_max), x_max);
    }

    double z_laplace_from_t(const DiscreteModel&, double W_t, double lambda)
    {
        if (!(W_t >= 1.0))
        {
            throw DomainError("z_laplace_from_t: W(t) must be >= W(0) = 1");
        }
        if (!(lambda >= 0.0))
        {
            throw DomainError("z_laplace_from_t: lambda must be >= 0");
        }
        const double p = 1.0 / W_t;
        return p / (1.0 - std::exp(-lambda) * (1.0 - p));
    }

    double z_laplace_from_x(const DiscreteModel&, double W_t, double W_t_minus_x, double lambda)
    {
        if (!(W_t >= 1.0))
        {
            throw DomainError("z_laplace_from_x: W(t) must be >= W(0) = 1");
        }
        if (!(W_t_minus_x >= 0.0 && W_t_minus_x <= W_t))
        {
            throw DomainError("z_laplace_from_x: need 0 <= W(t-x) <= W(t)");
        }
        if (!(lambda >= 0.0))
        {
            throw DomainError("z_laplace_from_x: lambda must be >= 0");
        }
        const double p = 1.0 / W_t;
        const double hit = (W_t - W_t_minus_x) / W_t;
        return 1.0 - hit * (-std::expm1(-lambda)) / (1.0 - std::exp(-lambda) * (1.0 - p));
    }
}
