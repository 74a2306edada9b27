#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace roughcb::io
{
    /// Shortest decimal string that parses back to the same double.
    std::string format_double(double x);
    /// Throws DomainError unless the whole string is a number.
    double parse_double(std::string_view s);

    /// A CSV file whose first line is '#' followed by a compact JSON object.
    /// Cells are plain text without commas, quotes or line breaks.
    struct CsvTable
    {
        nlohmann::json metadata = nlohmann::json::object();
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        bool operator==(const CsvTable&) const = default;
    };

    std::string write_csv(const CsvTable& table);
    /// Throws DomainError on a missing metadata line or ragged rows.
    CsvTable parse_csv(std::string_view text);

    void write_file(const std::string& path, const std::string& content);
    std::string read_file(const std::string& path);
}
