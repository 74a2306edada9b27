#include "roughcb/csv.hpp"

#include "roughcb/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace roughcb::io
{
    namespace
    {
        void check_cell(const std::string& cell)
        {
            if (cell.find_first_of(",\"\r\n") != std::string::npos)
            {
                throw DomainError("csv: cell contains a separator, quote or line break: " + cell);
            }
        }

        std::vector<std::string> split(std::string_view line)
        {
            std::vector<std::string> cells;
            std::size_t start = 0;
            for (;;)
            {
                const auto comma = line.find(',', start);
                if (comma == std::string_view::npos)
                {
                    cells.emplace_back(line.substr(start));
                    return cells;
                }
                cells.emplace_back(line.substr(start, comma - start));
                start = comma + 1;
            }
        }

        void append_line(std::string& out, const std::vector<std::string>& cells)
        {
            for (std::size_t i = 0; i < cells.size(); ++i)
            {
                check_cell(cells[i]);
                if (i > 0)
                {
                    out += ',';
                }
                out += cells[i];
            }
            out += '\n';
        }
    }

    std::string format_double(double x)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    }

    double parse_double(std::string_view s)
    {
        double x = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        {
            throw DomainError("not a number: '" + std::string(s) + "'");
        }
        return x;
    }

    std::string write_csv(const CsvTable& table)
    {
        std::string out = "#" + table.metadata.dump() + "\n";
        append_line(out, table.header);
        for (const auto& row : table.rows)
        {
            if (row.size() != table.header.size())
            {
                throw DomainError("csv: row width differs from header width");
            }
            append_line(out, row);
        }
        return out;
    }

    CsvTable parse_csv(std::string_view text)
    {
        std::vector<std::string_view> lines;
        std::size_t start = 0;
        while (start < text.size())
        {
            const auto nl = text.find('\n', start);
            if (nl == std::string_view::npos)
            {
                throw DomainError("csv: last line is not terminated");
            }
            lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
        if (lines.size() < 2 || lines[0].empty() || lines[0][0] != '#')
        {
            throw DomainError("csv: expected a '#' metadata line followed by a header");
        }
        CsvTable table;
        try
        {
            table.metadata = nlohmann::json::parse(lines[0].substr(1));
        }
        catch (const nlohmann::json::exception& e)
        {
            throw DomainError(std::string("csv: bad metadata line: ") + e.what());
        }
        table.header = split(lines[1]);
        for (std::size_t i = 2; i < lines.size(); ++i)
        {
            auto row = split(lines[i]);
            if (row.size() != table.header.size())
            {
                throw DomainError("csv: line " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                                  " cells, header has " + std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(row));
        }
        return table;
    }

    void write_file(const std::string& path, const std::string& content)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
        {
            throw std::runtime_error("cannot open " + path + " for writing");
        }
        f << content;
        if (!f)
        {
            throw std::runtime_error("write to " + path + " failed");
        }
    }

    std::string read_file(const std::string& path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
        {
            throw std::runtime_error("cannot open " + path);
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
}
