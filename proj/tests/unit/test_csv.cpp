#include "roughcb/csv.hpp"
#include "roughcb/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace roughcb;
using namespace roughcb::io;

TEST_CASE("shortest round-trip formatting")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    for (double x : {0.1 + 0.2, std::nextafter(1.0, 2.0), 6.02214076e23, 5e-324, std::numbers::pi})
    {
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(std::isinf(parse_double(format_double(std::numeric_limits<double>::infinity()))));
    CHECK_THROWS_AS(parse_double("1.0x"), DomainError);
    CHECK_THROWS_AS(parse_double(""), DomainError);
}

TEST_CASE("CSV round trip")
{
    CsvTable t;
    t.metadata = {{"tool", "roughcb"}, {"seed", 7}, {"grid", {0.5, 1.0}}};
    t.header = {"a", "b", "c"};
    t.rows = {{"1", "", "x;y"}, {"0.25", "2", "z"}};
    const std::string text = write_csv(t);
    CHECK(text.front() == '#');
    CHECK(text.find('\r') == std::string::npos);
    const CsvTable back = parse_csv(text);
    CHECK(back == t);
    CHECK(write_csv(back) == text);
}

TEST_CASE("CSV rejects malformed input")
{
    CsvTable t;
    t.header = {"a"};
    t.rows = {{"x,y"}};
    CHECK_THROWS_AS(write_csv(t), DomainError);
    t.rows = {{"1", "2"}};
    CHECK_THROWS_AS(write_csv(t), DomainError);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2\n"), DomainError);
    CHECK_THROWS_AS(parse_csv("#{}\na,b\n1\n"), DomainError);
    CHECK_THROWS_AS(parse_csv("#{not json\na\n"), DomainError);
}
