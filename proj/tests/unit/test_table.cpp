#include <cmath>
#include <limits>

#include "doctest.h"
#include "json.hpp"
#include "ofqn/errors.hpp"
#include "ofqn/table.hpp"

using namespace ofqn;

TEST_CASE("numbers use the shortest round-trip form with a dot") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1e-5) == "1e-05");
    CHECK(format_number(2000.0) == "2000");
    CHECK(format_number(-0.25) == "-0.25");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, 9.8e-6})
        CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("labels always carry a decimal point") {
    CHECK(format_label(1.0) == "1.0");
    CHECK(format_label(0.2) == "0.2");
    CHECK(format_label(120.0) == "120.0");
}

TEST_CASE("CSV: header, CRLF rows, quoting, empty cells") {
    Table t;
    t.columns = {"x", "label"};
    t.add_row({0.5, std::string("plain")});
    t.add_row({Cell{}, std::string("with, comma")});
    t.add_row({1.0, std::string("say \"hi\"")});
    CHECK(t.to_csv() == "x,label\r\n0.5,plain\r\n,\"with, comma\"\r\n1,\"say \"\"hi\"\"\"\r\n");
    CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
}

TEST_CASE("JSON: columns and rows, non-finite values as null") {
    Table t;
    t.columns = {"a", "b"};
    t.add_row({std::numeric_limits<double>::infinity(), std::string("s")});
    t.add_row({2.5, Cell{}});
    const auto doc = nlohmann::json::parse(t.to_json());
    CHECK(doc["columns"] == nlohmann::json({"a", "b"}));
    CHECK(doc["rows"][0][0].is_null());
    CHECK(doc["rows"][0][1] == "s");
    CHECK(doc["rows"][1][0] == 2.5);
    CHECK(doc["rows"][1][1].is_null());
}

TEST_CASE("column lookup and format parsing") {
    Table t;
    t.columns = {"a", "b"};
    t.add_row({1.0, std::string("x")});
    CHECK(t.column_index("b") == 1);
    CHECK_THROWS_AS(t.column_index("c"), DomainError);
    CHECK(std::isnan(t.number(0, "b")));
    CHECK(parse_output_format("csv") == OutputFormat::Csv);
    CHECK(parse_output_format("json") == OutputFormat::Json);
    CHECK_THROWS_AS(parse_output_format("xml"), DomainError);
    CHECK(t.render(OutputFormat::Csv) == t.to_csv());
}
