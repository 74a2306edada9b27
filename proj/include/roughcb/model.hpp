#pragma once

namespace roughcb
{
    /// Parameters of the limit model: the spectrally positive stable process
    /// of index 1+alpha with Laplace exponent b*lambda + c*lambda^{1+alpha}.
    class ModelParams
    {
    public:
        /// Throws ParameterError unless 0 < alpha < 1, b >= 0, c > 0.
        ModelParams(double alpha, double b, double c);

        double alpha() const noexcept { return alpha_; }
        double b() const noexcept { return b_; }
        double c() const noexcept { return c_; }
        /// (c / Gamma(1-alpha))^{1/(1+alpha)}, the space scale of the
        /// compound Poisson approximation.
        double c0() const noexcept { return c0_; }
        bool critical() const noexcept { return b_ == 0.0; }

    private:
        double alpha_;
        double b_;
        double c_;
        double c0_;
    };

    double laplace_exponent(const ModelParams& p, double lambda);
    double laplace_exponent_derivative(const ModelParams& p, double lambda);

    /// Density of the Levy measure c alpha (alpha+1) / Gamma(1-alpha) y^{-alpha-2}.
    double levy_density(const ModelParams& p, double y);

    /// Inverse of the Laplace exponent on [0, inf).
    double inverse_exponent(const ModelParams& p, double y);

    /// Scale function W (zero on the negative half-line).
    double scale_w(const ModelParams& p, double x);
    /// W'(x) = x^{alpha-1} E_{alpha,alpha}(-(b/c) x^alpha) / c for x > 0, else 0.
    double scale_w_prime(const ModelParams& p, double x);
    /// 1 - b W(x), evaluated as E_{alpha,1}(-(b/c) x^alpha) so that it keeps
    /// full relative precision when b W(x) is close to one.
    double one_minus_b_scale(const ModelParams& p, double x);
}
