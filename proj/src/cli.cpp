#include "roughcb/cli.hpp"

#include "roughcb/analytics.hpp"
#include "roughcb/battery.hpp"
#include "roughcb/csv.hpp"
#include "roughcb/errors.hpp"
#include "roughcb/prelimit.hpp"
#include "roughcb/simulate.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

namespace roughcb::cli
{
    namespace
    {
        // Invalid flag combination detected after parsing.
        struct FlagError : std::runtime_error
        {
            using std::runtime_error::runtime_error;
        };

        struct ModelFlags
        {
            double alpha = 0.6;
            double b = 0.0;
            double c = 1.0;
            double zeta = 1.0;
        };

        void add_model_flags(CLI::App* app, ModelFlags& f, bool required)
        {
            auto* a = app->add_option("--alpha", f.alpha, "stability parameter, 0 < alpha < 1");
            auto* b = app->add_option("--b", f.b, "drift coefficient b >= 0");
            auto* c = app->add_option("--c", f.c, "coefficient c > 0");
            auto* z = app->add_option("--zeta", f.zeta, "initial mass zeta > 0");
            if (required)
            {
                for (auto* o : {a, b, c, z})
                {
                    o->required();
                }
            }
            else
            {
                for (auto* o : {a, b, c, z})
                {
                    o->capture_default_str();
                }
            }
        }

        ModelParams make_params(const ModelFlags& f)
        {
            if (!(f.zeta > 0.0) || !std::isfinite(f.zeta))
            {
                throw FlagError("zeta must be finite and > 0");
            }
            try
            {
                return ModelParams(f.alpha, f.b, f.c);
            }
            catch (const ParameterError& e)
            {
                throw FlagError(e.what());
            }
        }

        nlohmann::json model_json(const ModelFlags& f)
        {
            return {{"alpha", f.alpha}, {"b", f.b}, {"c", f.c}, {"zeta", f.zeta}};
        }

        void check_grid(const std::vector<double>& grid, const char* name, bool allow_zero)
        {
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                const double x = grid[i];
                if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0))
                {
                    throw FlagError(std::string(name) + (allow_zero ? " values must be finite and >= 0"
                                                                    : " values must be finite and > 0"));
                }
                if (i > 0 && !(x > grid[i - 1]))
                {
                    throw FlagError(std::string(name) + " must be strictly increasing");
                }
            }
        }

        void emit(const std::string& path, const std::string& content, std::ostream& out)
        {
            if (path.empty())
            {
                out << content;
            }
            else
            {
                io::write_file(path, content);
            }
        }

        std::string fmt(double x)
        {
            return io::format_double(x);
        }

        // ---- analytic ----------------------------------------------------

        struct AnalyticFlags
        {
            ModelFlags model;
            std::vector<double> t_grid;
            std::vector<double> lambda_grid;
            std::string out;
        };

        void add_tail_rows(io::CsvTable& table, const std::vector<std::string>& lead, const std::string& prefix,
                           const TailAsymptote& tail)
        {
            auto row = [&](const std::string& q, double v) {
                std::vector<std::string> r{q};
                r.insert(r.end(), lead.begin(), lead.end());
                r.insert(r.end(), {"", "", fmt(v)});
                table.rows.push_back(std::move(r));
            };
            row(prefix + "_const", tail.constant);
            if (tail.kind == TailKind::power_law)
            {
                row(prefix + "_exp", tail.exponent);
            }
            else
            {
                row(prefix + "_rate", tail.rate);
            }
        }

        int cmd_analytic(const AnalyticFlags& f, std::ostream& out)
        {
            if (f.t_grid.empty() && f.lambda_grid.empty())
            {
                throw FlagError("give at least one of --t-grid and --lambda-grid");
            }
            check_grid(f.t_grid, "--t-grid", false);
            check_grid(f.lambda_grid, "--lambda-grid", true);
            const ModelParams p = make_params(f.model);
            const double zeta = f.model.zeta;

            RunMetadata meta;
            meta.command = "analytic";
            meta.parameters = model_json(f.model);
            meta.parameters["t_grid"] = f.t_grid;
            meta.parameters["lambda_grid"] = f.lambda_grid;

            io::CsvTable table;
            table.metadata = meta.to_json();
            table.header = {"quantity", "alpha", "b", "c", "zeta", "t", "lambda", "value"};
            const std::vector<std::string> lead{fmt(p.alpha()), fmt(p.b()), fmt(p.c()), fmt(zeta)};
            auto row = [&](const std::string& q, std::optional<double> t, std::optional<double> l, double v) {
                std::vector<std::string> r{q};
                r.insert(r.end(), lead.begin(), lead.end());
                r.push_back(t ? fmt(*t) : "");
                r.push_back(l ? fmt(*l) : "");
                r.push_back(fmt(v));
                table.rows.push_back(std::move(r));
            };

            for (double t : f.t_grid)
            {
                row("vbar", t, {}, vbar(p, t));
                row("survival_tau", t, {}, extinction_survival(p, zeta, t));
                row("mean_mass", t, {}, mean_mass(p, zeta, t));
                row("feller_survival_tau", t, {}, feller_extinction_survival(p.b(), p.c(), zeta, t));
                for (double l : f.lambda_grid)
                {
                    row("v", t, l, extinction_exponent(p, t, l));
                    row("mass_laplace", t, l, mass_laplace(p, zeta, t, l));
                    row("feller_mass_laplace", t, l, feller_mass_laplace(p.b(), p.c(), zeta, t, l));
                }
            }
            for (double l : f.lambda_grid)
            {
                row("V_T", {}, l, progeny_exponent(p, l));
                row("laplace_T", {}, l, progeny_laplace(p, zeta, l));
                row("feller_laplace_T", {}, l, feller_progeny_laplace(p.b(), p.c(), zeta, l));
            }
            add_tail_rows(table, lead, "tail_tau", extinction_tail_asymptote(p, zeta));
            add_tail_rows(table, lead, "tail_T", progeny_tail_asymptote(p, zeta));
            const FellerAsymptotes feller = feller_asymptotes(p.b(), p.c(), zeta);
            add_tail_rows(table, lead, "feller_tail_tau", feller.extinction);
            add_tail_rows(table, lead, "feller_tail_T", feller.progeny);

            emit(f.out, io::write_csv(table), out);
            return kOk;
        }

        // ---- simulate ----------------------------------------------------

        struct SimulateFlags
        {
            ModelFlags model;
            std::int64_t n = 0;
            std::int64_t samples = 0;
            std::uint64_t seed = 0;
            std::vector<double> t_grid;
            std::int64_t jump_cap = 10'000'000;
            double progeny_cap = 0.0;
            double window = 0.0;
            unsigned threads = 1;
            bool check_invariants = false;
            std::string out;
            std::string mass_out;
        };

        DiscreteModel make_model_at(const ModelParams& p, std::int64_t n, double zeta)
        {
            if (n < 1)
            {
                throw FlagError("--n must be >= 1");
            }
            // An n at which gamma_n <= 0 or no excursion fits is a property of
            // the discretization, not of the flags' syntax.
            const DiscreteModel dm = make_discrete(p, n);
            if (excursion_count(dm, zeta) < 1)
            {
                throw ParameterError("floor(c0 n^alpha zeta) = 0 at n = " + std::to_string(n) +
                                     "; increase n or zeta");
            }
            return dm;
        }

        int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err)
        {
            const ModelParams p = make_params(f.model);
            check_grid(f.t_grid, "--t-grid", true);
            if (f.samples < 1 || f.jump_cap < 1 || f.progeny_cap < 0.0 || f.window < 0.0)
            {
                throw FlagError("--samples and --jump-cap must be >= 1; --progeny-cap and --window must be >= 0");
            }
            if (f.window > 0.0 && !f.t_grid.empty() && f.window < f.t_grid.back())
            {
                throw FlagError("--window must be >= the last --t-grid value");
            }
            if (!f.t_grid.empty() && f.out.empty() && f.mass_out.empty())
            {
                throw FlagError("with --t-grid and output on stdout, give --mass-out");
            }
            const DiscreteModel dm = make_model_at(p, f.n, f.model.zeta);

            McConfig cfg{dm};
            cfg.zeta = f.model.zeta;
            cfg.t_grid = f.t_grid;
            cfg.n_samples = f.samples;
            cfg.master_seed = f.seed;
            cfg.jump_cap = f.jump_cap;
            if (f.progeny_cap > 0.0)
            {
                cfg.progeny_cap = f.progeny_cap;
            }
            if (f.window > 0.0)
            {
                cfg.time_window = f.window;
            }
            cfg.check_invariants = f.check_invariants;

            const auto start = std::chrono::steady_clock::now();
            const auto samples = run_monte_carlo(cfg, f.threads);
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const double censored = censored_fraction(samples);

            RunMetadata meta;
            meta.command = "simulate";
            meta.parameters = model_json(f.model);
            meta.parameters["n"] = f.n;
            meta.parameters["samples"] = f.samples;
            meta.parameters["t_grid"] = f.t_grid;
            meta.parameters["jump_cap"] = f.jump_cap;
            meta.parameters["progeny_cap"] = f.progeny_cap > 0.0 ? nlohmann::json(f.progeny_cap) : nlohmann::json();
            meta.parameters["window"] = f.window > 0.0 ? nlohmann::json(f.window) : nlohmann::json();
            meta.parameters["check_invariants"] = f.check_invariants;
            meta.parameters["excursion_count"] = excursion_count(dm, cfg.zeta);
            meta.parameters["gamma_n"] = dm.gamma_n();
            meta.master_seed = f.seed;
            meta.has_seed = true;
            nlohmann::json head = meta.to_json();
            head["censored_fraction"] = censored;

            const bool windowed = f.window > 0.0;
            io::CsvTable table;
            table.metadata = head;
            table.header = {"sample_id", "extinction_time", "total_progeny", "censored"};
            if (windowed)
            {
                table.header.push_back("clipped");
            }
            for (std::size_t i = 0; i < samples.size(); ++i)
            {
                const auto& s = samples[i];
                std::vector<std::string> r{std::to_string(i), fmt(s.extinction_time), fmt(s.total_progeny),
                                           s.censored ? "1" : "0"};
                if (windowed)
                {
                    r.push_back(s.clipped ? "1" : "0");
                }
                table.rows.push_back(std::move(r));
            }
            emit(f.out, io::write_csv(table), out);

            if (!f.t_grid.empty())
            {
                io::CsvTable mass;
                mass.metadata = head;
                mass.header = {"sample_id", "t", "mass"};
                for (std::size_t i = 0; i < samples.size(); ++i)
                {
                    for (const auto& m : samples[i].mass_profile)
                    {
                        mass.rows.push_back({std::to_string(i), fmt(m.t), fmt(m.mass)});
                    }
                }
                const std::string path = f.mass_out.empty() ? f.out + ".mass.csv" : f.mass_out;
                io::write_file(path, io::write_csv(mass));
            }

            err << "censored fraction: " << censored << "\n";
            if (!f.out.empty())
            {
                std::ostringstream log;
                log << "wall_seconds " << seconds << "\nthreads " << f.threads << "\ncensored_fraction " << censored
                    << "\n";
                io::write_file(f.out + ".log", log.str());
            }
            return kOk;
        }

        // ---- validate ----------------------------------------------------

        struct ValidateFlags
        {
            ModelFlags model;
            std::vector<std::int64_t> n_list{1024};
            std::int64_t samples = 5000;
            std::uint64_t seed = 1;
            std::vector<double> t_grid{0.5, 1.0, 2.0};
            std::vector<double> laplace_t_grid{1.0};
            double lambda = 1.0;
            std::int64_t excursions = 20000;
            double level = 10.0;
            std::int64_t jump_cap = 10'000'000;
            double perturb = 0.0;
            unsigned threads = 1;
            std::string out;
        };

        int cmd_validate(const ValidateFlags& f, std::ostream& out, std::ostream& err)
        {
            const ModelParams p = make_params(f.model);
            check_grid(f.t_grid, "--t-grid", false);
            check_grid(f.laplace_t_grid, "--laplace-t-grid", false);
            if (f.t_grid.empty() || f.laplace_t_grid.empty() || f.n_list.empty())
            {
                throw FlagError("--t-grid, --laplace-t-grid and --n-list must be nonempty");
            }
            if (f.samples < 2 || f.excursions < 2 || !(f.lambda > 0.0) || !(f.level > 0.0) || f.jump_cap < 1)
            {
                throw FlagError("need --samples >= 2, --excursions >= 2, --lambda > 0, --level > 0, --jump-cap >= 1");
            }
            for (auto n : f.n_list)
            {
                make_model_at(p, n, f.model.zeta);
            }

            BatteryConfig cfg;
            cfg.params = p;
            cfg.zeta = f.model.zeta;
            cfg.n_list = f.n_list;
            cfg.samples = f.samples;
            cfg.seed = f.seed;
            cfg.t_grid = f.t_grid;
            cfg.laplace_t_grid = f.laplace_t_grid;
            cfg.lambda = f.lambda;
            cfg.excursions = f.excursions;
            cfg.level = f.level;
            cfg.jump_cap = f.jump_cap;
            cfg.perturb = f.perturb;
            cfg.threads = f.threads;
            const BatteryResult result = run_battery(cfg);

            RunMetadata meta;
            meta.command = "validate";
            meta.parameters = model_json(f.model);
            meta.parameters["n_list"] = f.n_list;
            meta.parameters["samples"] = f.samples;
            meta.parameters["t_grid"] = f.t_grid;
            meta.parameters["laplace_t_grid"] = f.laplace_t_grid;
            meta.parameters["lambda"] = f.lambda;
            meta.parameters["excursions"] = f.excursions;
            meta.parameters["level"] = f.level;
            meta.parameters["jump_cap"] = f.jump_cap;
            meta.parameters["perturb"] = f.perturb;
            meta.master_seed = f.seed;
            meta.has_seed = true;

            io::CsvTable table;
            table.metadata = meta.to_json();
            table.metadata["progeny_censored_fraction"] = result.censored_fraction;
            table.header = {"name", "analytic", "empirical", "std_error", "z", "tolerance", "pass"};
            for (const auto& r : result.report.rows)
            {
                table.rows.push_back(
                    {r.name, fmt(r.analytic), fmt(r.empirical), fmt(r.std_error), fmt(r.z), fmt(r.tolerance),
                     r.pass ? "1" : "0"});
                if (!r.pass)
                {
                    err << "FAIL " << r.name << ": analytic " << r.analytic << ", empirical " << r.empirical
                        << ", z " << r.z << "\n";
                }
            }
            emit(f.out, io::write_csv(table), out);
            return result.report.all_pass() ? kOk : kValidationFailed;
        }
    }

    nlohmann::json RunMetadata::to_json() const
    {
        nlohmann::json j;
        j["tool"] = "roughcb";
        j["tool_version"] = kToolVersion;
        j["command"] = command;
        j["parameters"] = parameters;
        if (has_seed)
        {
            j["master_seed"] = master_seed;
            j["rng_algorithm"] = kRngAlgorithm;
        }
        return j;
    }

    int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
    {
        CLI::App app{"Rough continuous-state branching processes: analytic laws and Monte Carlo checks", "roughcb"};
        app.require_subcommand(1);
        app.set_version_flag("--version", kToolVersion);

        AnalyticFlags af;
        auto* analytic = app.add_subcommand("analytic", "closed-form exponents, transforms and tail asymptotes");
        add_model_flags(analytic, af.model, true);
        analytic->add_option("--t-grid", af.t_grid, "comma-separated times > 0")->delimiter(',');
        analytic->add_option("--lambda-grid", af.lambda_grid, "comma-separated lambda >= 0")->delimiter(',');
        analytic->add_option("--out", af.out, "output CSV (default: stdout)");

        SimulateFlags sf;
        auto* simulate = app.add_subcommand("simulate", "Monte Carlo samples of extinction time, progeny and mass");
        add_model_flags(simulate, sf.model, false);
        simulate->add_option("--n", sf.n, "discretization level")->required();
        simulate->add_option("--samples", sf.samples, "number of aggregate samples")->required();
        simulate->add_option("--seed", sf.seed, "master seed")->required();
        simulate->add_option("--t-grid", sf.t_grid, "times for the mass profile")->delimiter(',');
        simulate->add_option("--jump-cap", sf.jump_cap, "jump budget per aggregate sample")->capture_default_str();
        simulate->add_option("--progeny-cap", sf.progeny_cap, "stop a sample once its progeny exceeds this");
        simulate->add_option("--window", sf.window, "track levels only up to this time");
        simulate->add_option("--threads", sf.threads, "worker threads (0: all cores)")->capture_default_str();
        simulate->add_flag("--check-invariants", sf.check_invariants, "check per-path identities on every excursion");
        simulate->add_option("--out", sf.out, "sample CSV (default: stdout)");
        simulate->add_option("--mass-out", sf.mass_out, "mass-profile CSV (default: <out>.mass.csv)");

        ValidateFlags vf;
        auto* validate = app.add_subcommand("validate", "compare Monte Carlo estimates with the analytic laws");
        add_model_flags(validate, vf.model, false);
        validate->add_option("--n-list", vf.n_list, "discretization levels")->delimiter(',')->capture_default_str();
        validate->add_option("--samples", vf.samples, "aggregate samples per run")->capture_default_str();
        validate->add_option("--seed", vf.seed, "master seed")->capture_default_str();
        validate->add_option("--t-grid", vf.t_grid, "times > 0 for survival and mean-mass rows")
            ->delimiter(',')
            ->capture_default_str();
        validate->add_option("--laplace-t-grid", vf.laplace_t_grid, "times > 0 for mass Laplace-transform rows")
            ->delimiter(',')
            ->capture_default_str();
        validate->add_option("--lambda", vf.lambda, "Laplace variable")->capture_default_str();
        validate->add_option("--excursions", vf.excursions, "excursions per excursion-level check")
            ->capture_default_str();
        validate->add_option("--level", vf.level, "walk level for the local-time checks")->capture_default_str();
        validate->add_option("--jump-cap", vf.jump_cap, "jump budget per aggregate sample")->capture_default_str();
        validate->add_option("--perturb", vf.perturb, "scale analytic values by 1 + perturb (detector check)");
        validate->add_option("--threads", vf.threads, "worker threads (0: all cores)")->capture_default_str();
        validate->add_option("--out", vf.out, "report CSV (default: stdout)");

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::ParseError& e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kBadFlags;
        }

        try
        {
            if (analytic->parsed())
            {
                return cmd_analytic(af, out);
            }
            if (simulate->parsed())
            {
                return cmd_simulate(sf, out, err);
            }
            return cmd_validate(vf, out, err);
        }
        catch (const FlagError& e)
        {
            err << "error: " << e.what() << "\n";
            return kBadFlags;
        }
        catch (const ParameterError& e)
        {
            err << "infeasible discretization: " << e.what() << "\n";
            return kInfeasible;
        }
    }
}
