#pragma once

#include "roughcb/prelimit.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace roughcb
{
    /// Uniform (0,1) draws from an mt19937_64 engine whose seed is derived
    /// from (master seed, sample index, excursion index, purpose), so that a
    /// stream depends only on its coordinates and never on scheduling.
    class RandomStream
    {
    public:
        RandomStream(std::uint64_t master_seed, std::uint64_t sample_index, std::uint64_t excursion_index,
                     std::uint64_t purpose = 0);

        /// (k + 1/2) 2^{-53} for a 53-bit integer k: never 0 or 1.
        double uniform();

    private:
        std::mt19937_64 engine_;
    };

    /// Levels traversed by one stretch of downward drift: (low, high].
    struct Segment
    {
        double high = 0.0;
        double low = 0.0;
    };

    struct Excursion
    {
        double start = 0.0;
        std::vector<Segment> segments;
        /// x0 + sum of jumps - final position; for an absorbed path the time
        /// to first passage below 0.
        double duration = 0.0;
        double peak = 0.0;
        std::int64_t jumps = 0;
        /// Jump budget ran out before absorption.
        bool censored = false;
        /// The path went above the ceiling and was moved back down to it;
        /// local times at levels <= ceiling stay exact, duration and peak
        /// are then lower bounds.
        bool clipped = false;
    };

    inline constexpr double kNoCeiling = std::numeric_limits<double>::infinity();

    /// One path of the level-n walk from x0, killed below 0 or after `cap`
    /// jumps. Above `ceiling` the path is fast-forwarded to its next passage
    /// through the ceiling: the walk has only downward continuous motion, so
    /// that passage happens and the part of the path above does not affect
    /// local times below.
    Excursion sample_excursion(const DiscreteModel& dm, double x0, RandomStream& stream, std::int64_t cap,
                               double ceiling = kNoCeiling);

    /// Number of visits to `level` after time 0: segments with
    /// low < level <= high, except that the starting point itself is not a
    /// visit.
    std::int64_t local_time_at(const Excursion& e, double level);

    /// Throws InvariantViolation unless the occupation identity and the
    /// covering property hold on `e`; covering is probed at `probes` levels
    /// drawn from `stream`.
    void check_excursion(const Excursion& e, RandomStream& stream, int probes = 20);

    struct MassPoint
    {
        double t = 0.0;
        double mass = 0.0;
    };

    struct AggregateSample
    {
        double extinction_time = 0.0;
        double total_progeny = 0.0;
        std::vector<MassPoint> mass_profile;
        bool censored = false;
        /// Some excursion went above the level window; extinction_time and
        /// total_progeny are then lower bounds.
        bool clipped = false;
        std::int64_t excursion_count = 0;
        std::int64_t jumps = 0;
    };

    struct McConfig
    {
        explicit McConfig(DiscreteModel model) : dm(std::move(model)) {}

        DiscreteModel dm;
        double zeta = 1.0;
        std::vector<double> t_grid;
        std::int64_t n_samples = 1;
        std::uint64_t master_seed = 0;
        std::int64_t jump_cap = 10'000'000;
        /// Stop a sample once its total progeny exceeds this value (in the
        /// rescaled units); the sample is flagged censored. For Laplace
        /// transforms at lambda the censored part contributes at most
        /// exp(-lambda * progeny_cap).
        double progeny_cap = std::numeric_limits<double>::infinity();
        /// Only levels up to this time are tracked exactly (see
        /// sample_excursion's ceiling). Must be >= the last grid point.
        double time_window = std::numeric_limits<double>::infinity();
        /// Run check_excursion on every excursion.
        bool check_invariants = false;
    };

    /// Throws ParameterError on an ill-formed configuration.
    void validate(const McConfig& cfg);

    /// floor(c0 n^alpha zeta).
    std::int64_t excursion_count(const DiscreteModel& dm, double zeta);

    AggregateSample sample_aggregate(const McConfig& cfg, std::int64_t sample_index);

    /// All samples, ordered by index; the content does not depend on the
    /// number of worker threads.
    std::vector<AggregateSample> run_monte_carlo(const McConfig& cfg, unsigned threads = 1);

    double censored_fraction(const std::vector<AggregateSample>& samples);
}
