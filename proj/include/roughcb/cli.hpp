#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace roughcb::cli
{
    inline constexpr const char* kToolVersion = "1.0.0";
    inline constexpr const char* kRngAlgorithm =
        "mt19937_64 per (seed, sample, excursion) stream, seeded by chained splitmix64; uniforms (k+0.5)*2^-53";

    enum ExitCode : int
    {
        kOk = 0,
        kValidationFailed = 1,
        kBadFlags = 2,
        kInfeasible = 3,
    };

    /// Echoed as the '#' JSON line of every CSV the tool writes. Holds no
    /// wall-clock data, so reruns are byte-identical.
    struct RunMetadata
    {
        std::string command;
        nlohmann::json parameters = nlohmann::json::object();
        std::uint64_t master_seed = 0;
        bool has_seed = false;

        nlohmann::json to_json() const;
    };

    /// Entry point of the `roughcb` executable; returns the process exit code.
    int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
}
