#pragma once

#include <string>
#include <variant>
#include <vector>

namespace ofqn {

/// Empty cells mark values that do not exist for a row (unstable model,
/// output not requested).
using Cell = std::variant<std::monostate, double, std::string>;

enum class OutputFormat { Csv, Json };

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    std::size_t column_index(const std::string& name) const;  // throws if absent
    double number(std::size_t row, const std::string& column) const;  // NaN for empty cells

    std::string to_csv() const;
    std::string to_json() const;
    std::string render(OutputFormat format) const;
};

/// Shortest decimal that round-trips; independent of the C locale.
std::string format_number(double x);

/// Like format_number but always carries a decimal point ("1.0", "0.2").
std::string format_label(double x);

OutputFormat parse_output_format(const std::string& name);

} // namespace ofqn
