#include "roughcb/specfun.hpp"

#include "roughcb/errors.hpp"
#include "roughcb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace roughcb
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;

        // Beyond this value of |z|^{1/alpha} the optimally truncated expansion
        // has a remainder below 1e-17 relative.
        constexpr double kAsymptoticScale = 50.0;

        bool is_nonpositive_integer(double x)
        {
            return x <= 0.0 && std::floor(x) == x;
        }

        void check_alpha(double alpha)
        {
            if (!(alpha > 0.0 && alpha < 1.0))
            {
                throw DomainError("Mittag-Leffler: alpha must lie in (0,1), got " + std::to_string(alpha));
            }
        }

        void check_argument(double z)
        {
            if (!(z <= 0.0))
            {
                throw DomainError("Mittag-Leffler: argument must be <= 0, got " + std::to_string(z));
            }
        }

        struct KahanSum
        {
            double sum = 0.0;
            double carry = 0.0;

            void add(double term)
            {
                const double y = term - carry;
                const double t = sum + y;
                carry = (t - sum) - y;
                sum = t;
            }
        };

        // sum_{k >= first} z^k / Gamma(alpha k + beta)
        double series(double alpha, double beta, double z, int first)
        {
            KahanSum acc;
            double zk = std::pow(z, first);
            for (int k = first; k < 400; ++k)
            {
                const double term = zk * rgamma(alpha * k + beta);
                acc.add(term);
                if (k > first + 4 && std::abs(term) <= 1e-18 * std::abs(acc.sum))
                {
                    break;
                }
                zk *= z;
            }
            return acc.sum;
        }

        // -sum_{k >= 1} z^{-k} / Gamma(beta - alpha k), z = -x, truncated at the
        // smallest term (index ~ x^{1/alpha} / alpha).
        double asymptotic(double alpha, double beta, double x)
        {
            const double scale = std::pow(x, 1.0 / alpha);
            const double last = std::min(scale / alpha, 2000.0);
            KahanSum acc;
            double xk = 1.0;
            double sign = 1.0;
            for (int k = 1; k <= last; ++k)
            {
                xk /= x;
                const double arg = beta - alpha * k;
                const double term = sign * xk * rgamma(arg);
                acc.add(term);
                // Stop on the envelope x^{-k} Gamma(1 - arg) / pi, not on the
                // term: near a pole of Gamma the term is tiny while later ones
                // are not.
                const double envelope = arg < 0.5 ? xk * std::tgamma(1.0 - arg) / kPi : std::abs(term);
                if (k > 2 && envelope <= 1e-18 * std::abs(acc.sum))
                {
                    break;
                }
                sign = -sign;
            }
            return acc.sum;
        }

        // Integral representations, valid for x > 0. The denominator
        // (v + x cos(pi a))^2 + (x sin(pi a))^2 has its minimum at
        // v0 = -x cos(pi a) (positive when alpha > 1/2); the range is split at
        // max(v0, 1).
        double integral(double alpha, bool unit_beta, double x)
        {
            const double inv_alpha = 1.0 / alpha;
            const double cosine = std::cos(kPi * alpha);
            auto integrand = [=](double v) {
                const double w = std::pow(v, inv_alpha);
                const double denom = v * v + 2.0 * x * cosine * v + x * x;
                const double numer = unit_beta ? x : w;
                return std::exp(-w) * numer / denom;
            };
            // v^{1/alpha} is not smooth at 0, which stalls Gauss-Kronrod there;
            // the double-exponential rule absorbs the endpoint behaviour.
            const double split = std::max(-x * cosine, 1.0);
            const double head =
                quad::endpoint_singular([&](double v, double, double) { return integrand(v); }, 0.0, split, 1e-15);
            const double total = head + quad::integrate(integrand, split, quad::kInf, 1e-14);
            return std::sin(kPi * alpha) / (kPi * alpha) * total;
        }

        double evaluate(double alpha, double beta, bool unit_beta, double z, MLMethod method)
        {
            switch (method)
            {
            case MLMethod::series:
                return series(alpha, beta, z, 0);
            case MLMethod::asymptotic:
                return z == 0.0 ? rgamma(beta) : asymptotic(alpha, beta, -z);
            case MLMethod::integral:
                return z == 0.0 ? rgamma(beta) : integral(alpha, unit_beta, -z);
            }
            return 0.0;
        }
    }

    double gamma_fn(double x)
    {
        if (std::isnan(x) || is_nonpositive_integer(x))
        {
            throw DomainError("gamma_fn: pole at " + std::to_string(x));
        }
        return std::tgamma(x);
    }

    double rgamma(double x)
    {
        if (is_nonpositive_integer(x))
        {
            return 0.0;
        }
        if (x < 0.5)
        {
            // Reflection keeps the result finite where Gamma(x) overflows.
            return std::sin(kPi * x) * std::tgamma(1.0 - x) / kPi;
        }
        return 1.0 / std::tgamma(x);
    }

    double ml_series_limit(double alpha)
    {
        check_alpha(alpha);
        return 1.0;
    }

    double ml_asymptotic_limit(double alpha)
    {
        check_alpha(alpha);
        return std::max(std::pow(kAsymptoticScale, alpha), ml_series_limit(alpha));
    }

    MLRegime ml_regime(double alpha, double z)
    {
        check_alpha(alpha);
        check_argument(z);
        const double r = -z;
        const double series_end = ml_series_limit(alpha);
        const double asymptotic_start = ml_asymptotic_limit(alpha);
        if (r <= series_end)
        {
            return {MLMethod::series, series_end};
        }
        if (r < asymptotic_start)
        {
            return {MLMethod::integral, asymptotic_start};
        }
        return {MLMethod::asymptotic, std::numeric_limits<double>::infinity()};
    }

    double ml_two(double alpha, double z, MLMethod method)
    {
        check_alpha(alpha);
        check_argument(z);
        return evaluate(alpha, alpha, false, z, method);
    }

    double ml_one(double alpha, double z, MLMethod method)
    {
        check_alpha(alpha);
        check_argument(z);
        return evaluate(alpha, 1.0, true, z, method);
    }

    double ml_two(double alpha, double z)
    {
        return ml_two(alpha, z, ml_regime(alpha, z).kind);
    }

    double ml_one(double alpha, double z)
    {
        return ml_one(alpha, z, ml_regime(alpha, z).kind);
    }

    double ml_one_complement(double alpha, double z)
    {
        const MLRegime regime = ml_regime(alpha, z);
        if (regime.kind == MLMethod::series)
        {
            return -series(alpha, 1.0, z, 1);
        }
        return 1.0 - ml_one(alpha, z, regime.kind);
    }
}
