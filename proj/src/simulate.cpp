#include "roughcb/simulate.hpp"

#include "roughcb/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace roughcb
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t z)
        {
            z += 0x9e3779b97f4a7c15ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        struct KahanSum
        {
            double sum = 0.0;
            double comp = 0.0;
            void add(double x)
            {
                const double y = x - comp;
                const double t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
        };

        struct Budget
        {
            std::int64_t jumps;
            double descent;
        };

        // Runs one path and hands every segment to visit(high, low, open_top).
        // Only the segment that begins at the starting point is open at the
        // top. Fills the scalar fields of `out` (not its segment list).
        template <class Visit>
        void walk(const DiscreteModel& dm, double x0, RandomStream& stream, Budget& budget, double ceiling,
                  Excursion& out, Visit&& visit)
        {
            const double rate = dm.gamma_n();
            const double jump_power = 1.0 / (dm.alpha() + 1.0);

            out.start = x0;
            out.jumps = 0;
            out.censored = false;
            out.clipped = false;

            double v = x0;
            if (v > ceiling)
            {
                v = ceiling;
                out.clipped = true;
            }
            out.peak = v;
            bool open_top = !out.clipped;

            KahanSum added; // x0 plus all jumps
            added.add(x0);
            double descent = 0.0;
            double end = 0.0;

            for (;;)
            {
                const double e = -std::log(stream.uniform()) / rate;
                if (v <= e)
                {
                    visit(v, 0.0, open_top);
                    descent += v;
                    end = 0.0;
                    // The path is complete, but the sample has gone past its
                    // progeny budget all the same.
                    out.censored = descent > budget.descent;
                    break;
                }
                const double low = v - e;
                visit(v, low, open_top);
                open_top = false;
                descent += e;
                if (out.jumps >= budget.jumps || descent >= budget.descent)
                {
                    out.censored = true;
                    end = low;
                    break;
                }
                const double jump = std::expm1(-std::log(stream.uniform()) * jump_power);
                ++out.jumps;
                added.add(jump);
                v = low + jump;
                if (v > ceiling)
                {
                    v = ceiling;
                    out.clipped = true;
                }
                if (v > out.peak)
                {
                    out.peak = v;
                }
            }
            budget.jumps -= out.jumps;
            budget.descent -= descent;
            out.duration = out.clipped ? descent : added.sum - end;
        }

        // Local times at a sorted list of positive levels, accumulated as a
        // difference array over level indices.
        class LevelCounter
        {
        public:
            explicit LevelCounter(std::vector<double> levels)
                : levels_(std::move(levels)), diff_(levels_.size() + 1, 0)
            {
            }

            void operator()(double high, double low, bool open_top)
            {
                if (levels_.empty() || low >= levels_.back())
                {
                    return;
                }
                const auto first = std::upper_bound(levels_.begin(), levels_.end(), low);
                const auto last = open_top ? std::lower_bound(first, levels_.end(), high)
                                           : std::upper_bound(first, levels_.end(), high);
                if (first < last)
                {
                    ++diff_[static_cast<std::size_t>(first - levels_.begin())];
                    --diff_[static_cast<std::size_t>(last - levels_.begin())];
                }
            }

            std::vector<std::int64_t> counts() const
            {
                std::vector<std::int64_t> out(levels_.size());
                std::int64_t run = 0;
                for (std::size_t i = 0; i < levels_.size(); ++i)
                {
                    run += diff_[i];
                    out[i] = run;
                }
                return out;
            }

        private:
            std::vector<double> levels_;
            std::vector<std::int64_t> diff_;
        };
    }

    RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t sample_index, std::uint64_t excursion_index,
                               std::uint64_t purpose)
    {
        std::uint64_t s = splitmix64(master_seed);
        s = splitmix64(s ^ sample_index);
        s = splitmix64(s ^ excursion_index);
        s = splitmix64(s ^ purpose);
        engine_.seed(s);
    }

    double RandomStream::uniform()
    {
        const std::uint64_t k = engine_() >> 11;
        return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
    }

    Excursion sample_excursion(const DiscreteModel& dm, double x0, RandomStream& stream, std::int64_t cap,
                               double ceiling)
    {
        if (!(x0 > 0.0) || !std::isfinite(x0))
        {
            throw DomainError("sample_excursion: x0 must be finite and > 0");
        }
        if (cap < 1)
        {
            throw DomainError("sample_excursion: cap must be >= 1");
        }
        if (!(ceiling > 0.0))
        {
            throw DomainError("sample_excursion: ceiling must be > 0");
        }
        Excursion e;
        Budget budget{cap, std::numeric_limits<double>::infinity()};
        walk(dm, x0, stream, budget, ceiling, e,
             [&](double high, double low, bool) { e.segments.push_back({high, low}); });
        return e;
    }

    std::int64_t local_time_at(const Excursion& e, double level)
    {
        if (!(level > 0.0))
        {
            throw DomainError("local_time_at: level must be > 0");
        }
        std::int64_t count = 0;
        for (std::size_t i = 0; i < e.segments.size(); ++i)
        {
            const Segment& s = e.segments[i];
            const bool open_top = i == 0 && s.high == e.start;
            if (s.low < level && (open_top ? level < s.high : level <= s.high))
            {
                ++count;
            }
        }
        return count;
    }

    void check_excursion(const Excursion& e, RandomStream& stream, int probes)
    {
        if (e.segments.empty())
        {
            throw InvariantViolation("excursion has no segments");
        }
        KahanSum length;
        double top = 0.0;
        for (const Segment& s : e.segments)
        {
            if (!(s.high > s.low) || s.low < 0.0)
            {
                throw InvariantViolation("segment with high <= low or low < 0");
            }
            length.add(s.high - s.low);
            top = std::max(top, s.high);
        }
        if (top != e.peak)
        {
            throw InvariantViolation("peak differs from the highest segment top");
        }
        if (!e.clipped && std::abs(length.sum - e.duration) > 1e-9 * e.duration)
        {
            throw InvariantViolation("occupation identity: segment lengths sum to " + std::to_string(length.sum) +
                                     ", duration is " + std::to_string(e.duration));
        }
        if (e.censored)
        {
            return;
        }
        if (e.segments.back().low != 0.0)
        {
            throw InvariantViolation("uncensored excursion does not end at 0");
        }
        for (int i = 0; i < probes; ++i)
        {
            const double level = stream.uniform() * e.peak;
            if (local_time_at(e, level) < 1)
            {
                throw InvariantViolation("covering property: no visit to level " + std::to_string(level) +
                                         " below peak " + std::to_string(e.peak));
            }
        }
    }

    std::int64_t excursion_count(const DiscreteModel& dm, double zeta)
    {
        const double k = dm.c0() * std::pow(static_cast<double>(dm.n()), dm.alpha()) * zeta;
        return static_cast<std::int64_t>(std::floor(k));
    }

    void validate(const McConfig& cfg)
    {
        if (!(cfg.zeta > 0.0) || !std::isfinite(cfg.zeta))
        {
            throw ParameterError("zeta must be finite and > 0");
        }
        if (cfg.n_samples < 1)
        {
            throw ParameterError("n_samples must be >= 1");
        }
        if (cfg.jump_cap < 1)
        {
            throw ParameterError("jump_cap must be >= 1");
        }
        if (!(cfg.progeny_cap > 0.0))
        {
            throw ParameterError("progeny_cap must be > 0");
        }
        for (std::size_t i = 0; i < cfg.t_grid.size(); ++i)
        {
            const double t = cfg.t_grid[i];
            if (!(t >= 0.0) || !std::isfinite(t))
            {
                throw ParameterError("t_grid values must be finite and >= 0");
            }
            if (i > 0 && !(t > cfg.t_grid[i - 1]))
            {
                throw ParameterError("t_grid must be strictly increasing");
            }
        }
        if (!(cfg.time_window > 0.0) || (!cfg.t_grid.empty() && cfg.time_window < cfg.t_grid.back()))
        {
            throw ParameterError("time_window must be > 0 and cover the whole t_grid");
        }
        if (excursion_count(cfg.dm, cfg.zeta) < 1)
        {
            throw ParameterError("floor(c0 n^alpha zeta) = 0: no excursions to aggregate; increase n or zeta");
        }
    }

    AggregateSample sample_aggregate(const McConfig& cfg, std::int64_t sample_index)
    {
        if (sample_index < 0 || sample_index >= cfg.n_samples)
        {
            throw DomainError("sample_aggregate: sample_index out of range");
        }
        validate(cfg);
        const DiscreteModel& dm = cfg.dm;
        const double n = static_cast<double>(dm.n());
        const double na = std::pow(n, dm.alpha());
        const double n_one_plus_a = n * na;
        const std::int64_t k_count = excursion_count(dm, cfg.zeta);
        const double ceiling = std::isfinite(cfg.time_window) ? dm.level_for_time(cfg.time_window) : kNoCeiling;

        // Grid points at t = 0 are handled apart: level 0 is hit once by every
        // absorbed path, at its end.
        std::vector<double> levels;
        std::size_t zero_points = 0;
        for (double t : cfg.t_grid)
        {
            if (t == 0.0)
            {
                ++zero_points;
            }
            else
            {
                levels.push_back(dm.level_for_time(t));
            }
        }
        LevelCounter counter(levels);

        AggregateSample out;
        Budget budget{cfg.jump_cap, cfg.progeny_cap * n_one_plus_a};
        double top = 0.0;
        double total = 0.0;
        std::int64_t absorbed = 0;
        Excursion e;
        const auto seed = cfg.master_seed;
        const auto index = static_cast<std::uint64_t>(sample_index);

        for (std::int64_t k = 0; k < k_count; ++k)
        {
            RandomStream stream(seed, index, static_cast<std::uint64_t>(k));
            const double x0 = sample_initial(dm, stream.uniform());
            if (cfg.check_invariants)
            {
                e.segments.clear();
                walk(dm, x0, stream, budget, ceiling, e,
                     [&](double high, double low, bool) { e.segments.push_back({high, low}); });
                RandomStream probe(seed, index, static_cast<std::uint64_t>(k), 1);
                check_excursion(e, probe);
                for (std::size_t i = 0; i < e.segments.size(); ++i)
                {
                    const Segment& s = e.segments[i];
                    counter(s.high, s.low, i == 0 && s.high == e.start);
                }
            }
            else
            {
                walk(dm, x0, stream, budget, ceiling, e, counter);
            }
            ++out.excursion_count;
            out.jumps += e.jumps;
            top = std::max(top, e.peak);
            total += e.duration;
            out.clipped = out.clipped || e.clipped;
            if (e.censored)
            {
                out.censored = true;
                break;
            }
            ++absorbed;
        }

        out.extinction_time = dm.time_for_level(top);
        out.total_progeny = total / n_one_plus_a;
        const auto counts = counter.counts();
        const double scale = 1.0 / (dm.c0() * na);
        out.mass_profile.reserve(cfg.t_grid.size());
        for (std::size_t i = 0; i < zero_points; ++i)
        {
            out.mass_profile.push_back({0.0, static_cast<double>(absorbed) * scale});
        }
        for (std::size_t i = 0; i < levels.size(); ++i)
        {
            out.mass_profile.push_back({cfg.t_grid[zero_points + i], static_cast<double>(counts[i]) * scale});
        }
        return out;
    }

    std::vector<AggregateSample> run_monte_carlo(const McConfig& cfg, unsigned threads)
    {
        validate(cfg);
        const auto total = cfg.n_samples;
        std::vector<AggregateSample> results(static_cast<std::size_t>(total));
        if (threads == 0)
        {
            threads = std::max(1u, std::thread::hardware_concurrency());
        }
        threads = static_cast<unsigned>(std::min<std::int64_t>(threads, total));

        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;)
            {
                const auto i = next.fetch_add(1);
                if (i >= total)
                {
                    return;
                }
                try
                {
                    results[static_cast<std::size_t>(i)] = sample_aggregate(cfg, i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                    {
                        failure = std::current_exception();
                    }
                    next.store(total);
                    return;
                }
            }
        };

        if (threads <= 1)
        {
            worker();
        }
        else
        {
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (unsigned t = 0; t < threads; ++t)
            {
                pool.emplace_back(worker);
            }
        }
        if (failure)
        {
            std::rethrow_exception(failure);
        }
        return results;
    }

    double censored_fraction(const std::vector<AggregateSample>& samples)
    {
        if (samples.empty())
        {
            return 0.0;
        }
        const auto censored = std::count_if(samples.begin(), samples.end(),
                                            [](const AggregateSample& s) { return s.censored; });
        return static_cast<double>(censored) / static_cast<double>(samples.size());
    }
}
