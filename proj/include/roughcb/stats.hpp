#pragma once

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace roughcb
{
    struct Estimate
    {
        double value = 0.0;
        double se = 0.0;
    };

    /// Fraction of samples strictly above x, with binomial standard error.
    Estimate empirical_survival(std::span<const double> samples, double x);

    /// Mean of exp(-lambda x) with standard error sd / sqrt(N) (sd with
    /// divisor N).
    Estimate empirical_laplace(std::span<const double> samples, double lambda);

    /// Mean with standard error sd / sqrt(N) (sd with divisor N).
    Estimate empirical_mean(std::span<const double> samples);

    struct SlopeFit
    {
        double slope = 0.0;
        double std_error = 0.0;
        std::int64_t points = 0;
        std::int64_t excluded = 0; // censored samples left out
    };

    /// Tail slope d log S / d log x from the order statistics whose empirical
    /// quantile lies in [q_lo, q_hi]: log x_(k) is regressed on the expected
    /// minus-log survival of the k-th largest point (sum_{j>=k} 1/j) and the
    /// slope is minus the reciprocal coefficient. std_error is exact for
    /// Pareto data (Renyi representation of exponential spacings).
    /// `censored` (empty or same length) marks samples that are left out.
    /// Throws EstimationError with fewer than 100 points in the window or a
    /// degenerate design.
    SlopeFit loglog_slope(std::span<const double> samples, double q_lo = 0.90, double q_hi = 0.999,
                          const std::vector<bool>& censored = {});

    /// Two-point slope log(S(x_hi)/S(x_lo)) / log(x_hi/x_lo) with a
    /// delta-method standard error for the correlated pair of binomial
    /// estimates. Throws EstimationError if S(x_hi) = 0.
    SlopeFit two_point_slope(std::span<const double> samples, double x_lo, double x_hi);

    enum class Sidedness
    {
        two_sided,   // pass iff |z| <= z_crit or |empirical - analytic| <= tolerance
        upper_bound, // pass iff z <= z_crit or empirical - analytic <= tolerance
    };

    struct ReportRow
    {
        std::string name;
        double analytic = 0.0;
        double empirical = 0.0;
        double std_error = 0.0;
        double z = 0.0;
        double tolerance = 0.0;
        double z_crit = 3.0;
        Sidedness sidedness = Sidedness::two_sided;
        bool pass = false;
    };

    /// Fills z and pass from the other fields. se = 0 gives z = 0 for equal
    /// values and +-inf otherwise.
    ReportRow make_row(std::string name, double analytic, Estimate empirical, double tolerance = 0.0,
                       double z_crit = 3.0, Sidedness sidedness = Sidedness::two_sided);

    struct ComparisonReport
    {
        std::vector<ReportRow> rows;
        nlohmann::json metadata = nlohmann::json::object();

        bool all_pass() const;
    };

    enum class Functional
    {
        laplace,  // E[exp(-argument X)]
        survival, // P{X > argument}
        mean,     // E[X]
    };

    struct FunctionalSpec
    {
        Functional kind = Functional::mean;
        double argument = 0.0;
        double tolerance = 0.0; // absolute
    };

    struct Comparison
    {
        std::string name;
        double analytic = 0.0;
        std::vector<double> samples;
        FunctionalSpec spec;
    };

    Estimate estimate(std::span<const double> samples, const FunctionalSpec& spec);
    ComparisonReport build_report(const std::vector<Comparison>& pairs);
}
