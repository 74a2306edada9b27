#include "roughcb/battery.hpp"

#include "roughcb/analytics.hpp"
#include "roughcb/csv.hpp"
#include "roughcb/errors.hpp"
#include "roughcb/prelimit.hpp"
#include "roughcb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace roughcb
{
    namespace
    {
        std::string coord(const char* name, double v)
        {
            return std::string(name) + "=" + io::format_double(v);
        }

        std::string label(const std::string& quantity, const std::string& coords, std::int64_t n)
        {
            return quantity + "[" + coords + "]@n=" + std::to_string(n);
        }

        struct Discrepancy
        {
            double error = 0.0;
            double se = 0.0;
        };

        std::vector<double> mass_at(const std::vector<AggregateSample>& s, std::size_t i)
        {
            std::vector<double> out;
            out.reserve(s.size());
            for (const auto& a : s)
            {
                out.push_back(a.mass_profile[i].mass);
            }
            return out;
        }

        std::vector<double> alive_at(const std::vector<AggregateSample>& s, std::size_t i)
        {
            std::vector<double> out;
            out.reserve(s.size());
            for (const auto& a : s)
            {
                out.push_back(a.mass_profile[i].mass > 0.0 ? 1.0 : 0.0);
            }
            return out;
        }

        // Mass, survival, mean and extinction-tail rows from one windowed run.
        // Returns the mass-Laplace discrepancy at each Laplace time for the
        // convergence rows.
        std::vector<Discrepancy> mass_rows(const BatteryConfig& cfg, const DiscreteModel& dm, std::uint64_t seed,
                                           std::vector<ReportRow>& rows)
        {
            const ModelParams& p = cfg.params;
            const double k = 1.0 + cfg.perturb;
            const auto n = dm.n();

            std::vector<double> grid = cfg.t_grid;
            grid.insert(grid.end(), cfg.laplace_t_grid.begin(), cfg.laplace_t_grid.end());
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            auto index_of = [&](double t) {
                return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
            };

            McConfig mc{dm};
            mc.zeta = cfg.zeta;
            mc.t_grid = grid;
            mc.n_samples = cfg.samples;
            mc.master_seed = seed;
            mc.jump_cap = cfg.jump_cap;
            mc.time_window = grid.back();
            const auto samples = run_monte_carlo(mc, cfg.threads);

            std::vector<Discrepancy> discrepancies;
            for (double t : cfg.laplace_t_grid)
            {
                const auto mass = mass_at(samples, index_of(t));
                const double lt = k * mass_laplace(p, cfg.zeta, t, cfg.lambda);
                const Estimate lt_hat = empirical_laplace(mass, cfg.lambda);
                rows.push_back(make_row(label("mass_laplace", coord("t", t) + ";" + coord("lambda", cfg.lambda), n), lt,
                                        lt_hat, 0.02 * lt));
                discrepancies.push_back({std::abs(lt_hat.value - lt), lt_hat.se});
            }
            for (double t : cfg.t_grid)
            {
                const std::size_t i = index_of(t);
                const auto mass = mass_at(samples, i);
                const std::string tc = coord("t", t);

                const double surv = k * extinction_survival(p, cfg.zeta, t);
                const Estimate surv_hat = empirical_mean(alive_at(samples, i));
                rows.push_back(make_row(label("survival_tau", tc, n), surv,
                                        {surv_hat.value, std::sqrt(surv_hat.value * (1.0 - surv_hat.value) /
                                                                   static_cast<double>(mass.size()))},
                                        0.10 * surv));

                rows.push_back(make_row(label("mean_mass", tc, n), k * mean_mass(p, cfg.zeta, t), empirical_mean(mass)));
            }

            // Decade slope of P{tau > t} below the window edge.
            const double t_hi = grid.back();
            const double t_lo = t_hi / 10.0;
            std::vector<double> tau;
            tau.reserve(samples.size());
            for (const auto& a : samples)
            {
                tau.push_back(a.extinction_time);
            }
            const double slope = std::log(extinction_survival(p, cfg.zeta, t_hi) / extinction_survival(p, cfg.zeta, t_lo)) /
                                 std::numbers::ln10;
            try
            {
                const SlopeFit fit = two_point_slope(tau, t_lo, t_hi * (1.0 - 1e-9));
                rows.push_back(make_row(label("tau_decade_slope", coord("t_lo", t_lo) + ";" + coord("t_hi", t_hi), n),
                                        k * slope, {fit.slope, fit.std_error}));
            }
            catch (const EstimationError&)
            {
                rows.push_back(make_row(label("tau_decade_slope", coord("t_lo", t_lo) + ";" + coord("t_hi", t_hi), n),
                                        k * slope, {std::numeric_limits<double>::quiet_NaN(), 0.0}));
                rows.back().pass = false;
            }
            return discrepancies;
        }

        double progeny_rows(const BatteryConfig& cfg, const DiscreteModel& dm, std::uint64_t seed,
                            std::vector<ReportRow>& rows)
        {
            McConfig mc{dm};
            mc.zeta = cfg.zeta;
            mc.n_samples = cfg.samples;
            mc.master_seed = seed;
            mc.jump_cap = cfg.jump_cap;
            mc.progeny_cap = cfg.progeny_horizon / cfg.lambda;
            const auto samples = run_monte_carlo(mc, cfg.threads);
            std::vector<double> progeny;
            progeny.reserve(samples.size());
            for (const auto& a : samples)
            {
                progeny.push_back(a.total_progeny);
            }
            const double lt = (1.0 + cfg.perturb) * progeny_laplace(cfg.params, cfg.zeta, cfg.lambda);
            rows.push_back(make_row(label("progeny_laplace", coord("lambda", cfg.lambda), dm.n()), lt,
                                    empirical_laplace(progeny, cfg.lambda), 0.02 * lt));
            return censored_fraction(samples);
        }

        void excursion_rows(const BatteryConfig& cfg, const DiscreteModel& dm, std::uint64_t seed,
                            std::vector<ReportRow>& rows)
        {
            const double k = 1.0 + cfg.perturb;
            const auto n = dm.n();
            const auto count = static_cast<std::size_t>(cfg.excursions);

            // First passage below 0 from x0 = 1. Censored durations are lower
            // bounds of at least the time taken by a million jumps, so their
            // exp(-lambda duration) is 0 in double precision.
            std::vector<double> durations(count);
            for (std::size_t i = 0; i < count; ++i)
            {
                RandomStream s(seed, i, 0);
                durations[i] = sample_excursion(dm, 1.0, s, 1'000'000).duration;
            }
            for (double lambda : {0.25, 0.5, 1.0})
            {
                rows.push_back(make_row(label("first_passage_laplace", coord("x0", 1.0) + ";" + coord("lambda", lambda), n),
                                        k * std::exp(-discrete_inverse(dm, lambda)),
                                        empirical_laplace(durations, lambda)));
            }

            // Local time at `level`, started at the level and below it.
            const double y = cfg.level;
            const ScaleTable table = discrete_scale(dm, 0.01, y);
            const double w_y = table.at(y);
            const double w_half = table.at(y - 0.5 * y);
            std::vector<double> from_level(count);
            std::vector<double> from_half(count);
            for (std::size_t i = 0; i < count; ++i)
            {
                RandomStream s(seed, i, 1);
                from_level[i] = static_cast<double>(local_time_at(sample_excursion(dm, y, s, cfg.jump_cap, y), y));
                RandomStream h(seed, i, 2);
                from_half[i] =
                    static_cast<double>(local_time_at(sample_excursion(dm, 0.5 * y, h, cfg.jump_cap, y), y));
            }
            for (double lambda : {std::numbers::ln2, 1.0})
            {
                rows.push_back(make_row(label("local_time_pgf", coord("x0", y) + ";" + coord("level", y) + ";" +
                                                                    coord("lambda", lambda),
                                              n),
                                        k * z_laplace_from_t(dm, w_y, lambda), empirical_laplace(from_level, lambda)));
            }
            rows.push_back(make_row(label("local_time_pgf", coord("x0", 0.5 * y) + ";" + coord("level", y) + ";" +
                                                                coord("lambda", 1.0),
                                          n),
                                    k * z_laplace_from_x(dm, w_y, w_half, 1.0), empirical_laplace(from_half, 1.0)));
        }
    }

    BatteryResult run_battery(const BatteryConfig& cfg)
    {
        if (cfg.n_list.empty() || cfg.t_grid.empty())
        {
            throw ParameterError("run_battery: n_list and t_grid must be nonempty");
        }
        if (cfg.t_grid.front() <= 0.0 ||
            (!cfg.laplace_t_grid.empty() &&
             *std::min_element(cfg.laplace_t_grid.begin(), cfg.laplace_t_grid.end()) <= 0.0))
        {
            throw ParameterError("run_battery: grid times must be > 0");
        }
        if (!(cfg.lambda > 0.0) || cfg.samples < 2 || cfg.excursions < 2 || !(cfg.level > 0.0))
        {
            throw ParameterError("run_battery: need lambda > 0, samples >= 2, excursions >= 2, level > 0");
        }
        // Fail on an infeasible n before any simulation starts.
        for (auto n : cfg.n_list)
        {
            const DiscreteModel dm = make_discrete(cfg.params, n);
            if (excursion_count(dm, cfg.zeta) < 1)
            {
                throw ParameterError("floor(c0 n^alpha zeta) = 0 for n = " + std::to_string(n) +
                                     "; increase n or zeta");
            }
        }

        BatteryResult result;
        std::vector<ReportRow>& rows = result.report.rows;
        std::vector<std::vector<Discrepancy>> discrepancies;
        for (std::size_t j = 0; j < cfg.n_list.size(); ++j)
        {
            const DiscreteModel dm = make_discrete(cfg.params, cfg.n_list[j]);
            // Distinct seeds per n and per run type keep the runs independent.
            const std::uint64_t base = cfg.seed + 0x1000 * static_cast<std::uint64_t>(j);
            discrepancies.push_back(mass_rows(cfg, dm, base, rows));
            result.censored_fraction.push_back(progeny_rows(cfg, dm, base + 1, rows));
            excursion_rows(cfg, dm, base + 2, rows);
        }

        // The mass-Laplace discrepancy should not grow with n beyond noise.
        for (std::size_t j = 1; j < discrepancies.size(); ++j)
        {
            for (std::size_t i = 0; i < cfg.laplace_t_grid.size(); ++i)
            {
                const Discrepancy& a = discrepancies[j - 1][i];
                const Discrepancy& b = discrepancies[j][i];
                const std::string name = "mass_laplace_discrepancy[" + coord("t", cfg.laplace_t_grid[i]) + ";" +
                                         coord("lambda", cfg.lambda) + ";from_n=" +
                                         std::to_string(cfg.n_list[j - 1]) + "]@n=" + std::to_string(cfg.n_list[j]);
                rows.push_back(
                    make_row(name, a.error, {b.error, std::hypot(a.se, b.se)}, 0.0, 2.0, Sidedness::upper_bound));
            }
        }
        return result;
    }
}
