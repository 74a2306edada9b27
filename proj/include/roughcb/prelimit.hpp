#pragma once

#include "roughcb/model.hpp"

#include <cstdint>
#include <vector>

namespace roughcb
{
    /// Level-n compound Poisson approximation: drift -1, arrival rate gamma_n,
    /// Pareto II jumps with tail (1+x)^{-(alpha+1)}, and initial state drawn
    /// from the integrated-tail law with tail (1+x)^{-alpha}.
    class DiscreteModel
    {
    public:
        const ModelParams& params() const noexcept { return params_; }
        std::int64_t n() const noexcept { return n_; }
        double gamma_n() const noexcept { return gamma_n_; }
        double c0() const noexcept { return params_.c0(); }
        double alpha() const noexcept { return params_.alpha(); }

        /// Space/time scaling between the walk and the limit: a level of the
        /// walk y corresponds to time c0 y / n of the rescaled process.
        double level_for_time(double t) const noexcept { return static_cast<double>(n_) * t / c0(); }
        double time_for_level(double y) const noexcept { return c0() * y / static_cast<double>(n_); }

    private:
        friend DiscreteModel make_discrete(const ModelParams& p, std::int64_t n);
        DiscreteModel(const ModelParams& p, std::int64_t n, double gamma_n)
            : params_(p), n_(n), gamma_n_(gamma_n) {}

        ModelParams params_;
        std::int64_t n_;
        double gamma_n_;
    };

    /// gamma_n = alpha (1 - (b/c0) n^{-alpha}); throws ParameterError when this
    /// is not positive, i.e. when n^alpha <= b/c0.
    DiscreteModel make_discrete(const ModelParams& p, std::int64_t n);

    /// Tail of the jump law, (1+x)^{-(alpha+1)} (equal to 1 for x < 0).
    double jump_tail(const DiscreteModel& dm, double x);
    /// Inverse-CDF draws; u must lie in (0,1).
    double sample_jump(const DiscreteModel& dm, double u);
    double sample_initial(const DiscreteModel& dm, double u);

    /// Laplace transform of the jump law.
    double jump_laplace(const DiscreteModel& dm, double lambda);
    /// Phi^(n)(lambda) = lambda - gamma_n (1 - jump_laplace(lambda)).
    double discrete_exponent(const DiscreteModel& dm, double lambda);
    double discrete_exponent_derivative(const DiscreteModel& dm, double lambda);
    /// Psi^(n), the inverse of Phi^(n) on [0, inf).
    double discrete_inverse(const DiscreteModel& dm, double y);

    /// W^(n) on the grid k * step, k = 0..K.
    struct ScaleTable
    {
        double step = 0.0;
        std::vector<double> values;

        double x_max() const noexcept { return step * static_cast<double>(values.size() - 1); }
        /// Linear interpolation; 0 for x < 0, DomainError beyond x_max.
        double at(double x) const;
    };

    /// Default grid spacing for a table reaching x_max.
    double default_scale_step(double x_max);

    /// Solves W(x) = 1 + gamma_n int_0^x jump_tail(y) W(x-y) dy by the
    /// trapezoidal rule on a uniform grid.
    ScaleTable discrete_scale(const DiscreteModel& dm, double step, double x_max);
    ScaleTable discrete_scale(const DiscreteModel& dm, double x_max);

    /// E_t[exp(-lambda L(t))] for the walk started at the level t itself.
    double z_laplace_from_t(const DiscreteModel& dm, double W_t, double lambda);
    /// E_x[exp(-lambda L(t))] for a start x != t, given W(t) and W(t-x)
    /// (the latter 0 when x >= t).
    double z_laplace_from_x(const DiscreteModel& dm, double W_t, double W_t_minus_x, double lambda);
}
