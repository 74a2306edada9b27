#pragma once

#include "roughcb/model.hpp"
#include "roughcb/stats.hpp"

#include <cstdint>
#include <vector>

namespace roughcb
{
    /// Analytic-vs-Monte-Carlo comparison suite run by `roughcb validate`.
    struct BatteryConfig
    {
        ModelParams params{0.6, 0.0, 1.0};
        double zeta = 1.0;
        std::vector<std::int64_t> n_list{1024};
        std::int64_t samples = 5000;
        std::uint64_t seed = 1;
        /// Times for the survival, mean-mass and extinction-slope rows.
        std::vector<double> t_grid{0.5, 1.0, 2.0};
        /// Times for the mass Laplace-transform rows (and the convergence
        /// rows across n_list).
        std::vector<double> laplace_t_grid{1.0};
        double lambda = 1.0;
        /// Excursions per excursion-level check.
        std::int64_t excursions = 20000;
        /// Walk level used by the local-time checks.
        double level = 10.0;
        std::int64_t jump_cap = 10'000'000;
        /// Progeny runs stop at progeny_horizon / lambda; the truncated part
        /// of the Laplace transform is below exp(-progeny_horizon).
        double progeny_horizon = 15.0;
        /// Multiplies every analytic value by (1 + perturb); a detector
        /// sanity hook.
        double perturb = 0.0;
        unsigned threads = 1;
    };

    struct BatteryResult
    {
        ComparisonReport report;
        std::vector<double> censored_fraction; // per n, progeny runs
    };

    /// Rows are named "<quantity>[<coordinates>]@n=<n>"; see the README for
    /// the list. Throws ParameterError for an infeasible discretization.
    BatteryResult run_battery(const BatteryConfig& cfg);
}
