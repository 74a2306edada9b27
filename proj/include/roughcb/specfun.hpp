#pragma once

namespace roughcb
{
    /// Gamma function. Throws DomainError at 0, -1, -2, ...
    double gamma_fn(double x);

    /// 1/Gamma(x), entire; exactly zero at the poles of Gamma.
    double rgamma(double x);

    /// How a Mittag-Leffler value on the negative half-line is evaluated.
    ///
    /// Near the origin the defining power series is used. Far out, the
    /// algebraic asymptotic expansion truncated at its smallest term is exact
    /// to rounding. In between, both lose too many digits (the series
    /// cancels catastrophically, the expansion diverges too early), so the
    /// completely monotone integral representation
    ///
    ///     E_{a,1}(-x) = sin(pi a)/(pi a) * int_0^inf e^{-v^{1/a}} x / (v^2 + 2 x cos(pi a) v + x^2) dv
    ///     E_{a,a}(-x) = sin(pi a)/(pi a) * int_0^inf e^{-v^{1/a}} v^{1/a} / (v^2 + 2 x cos(pi a) v + x^2) dv
    ///
    /// is integrated numerically.
    enum class MLMethod
    {
        series,
        integral,
        asymptotic,
    };

    struct MLRegime
    {
        MLMethod kind = MLMethod::series;
        // |z| at which this regime hands over to the next one (the upper edge
        // of the regime; +inf for the asymptotic regime).
        double switch_point = 0.0;
    };

    /// Largest |z| evaluated by the power series.
    double ml_series_limit(double alpha);
    /// Smallest |z| evaluated by the asymptotic expansion.
    double ml_asymptotic_limit(double alpha);
    MLRegime ml_regime(double alpha, double z);

    /// E_{alpha,alpha}(z) for 0 < alpha < 1 and z <= 0.
    double ml_two(double alpha, double z);
    /// E_{alpha,1}(z) for 0 < alpha < 1 and z <= 0.
    double ml_one(double alpha, double z);

    /// Same, forcing one evaluation method regardless of |z|. Used to check
    /// that neighbouring regimes agree; the series is only meaningful for
    /// moderate |z| in double precision.
    double ml_two(double alpha, double z, MLMethod method);
    double ml_one(double alpha, double z, MLMethod method);

    /// 1 - E_{alpha,1}(z) without cancellation for small |z|.
    double ml_one_complement(double alpha, double z);
}
