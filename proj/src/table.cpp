#include "ofqn/table.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include "json.hpp"
#include <system_error>

#include "ofqn/errors.hpp"

namespace ofqn {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_label(double x) {
    std::string s = format_number(x);
    if (s.find_first_of(".eni") == std::string::npos) s += ".0";
    return s;
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw DomainError("row width does not match table header");
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw DomainError("no column named " + name);
}

double Table::number(std::size_t row, const std::string& column) const {
    const Cell& c = rows.at(row).at(column_index(column));
    if (const double* v = std::get_if<double>(&c)) return *v;
    return std::numeric_limits<double>::quiet_NaN();
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(columns[i]);
    }
    out += "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (const double* v = std::get_if<double>(&row[i]))
                out += format_number(*v);
            else if (const std::string* s = std::get_if<std::string>(&row[i]))
                out += csv_escape(*s);
        }
        out += "\r\n";
    }
    return out;
}

std::string Table::to_json() const {
    nlohmann::ordered_json doc;
    doc["columns"] = columns;
    auto rows_json = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (const double* v = std::get_if<double>(&cell))
                r.push_back(std::isfinite(*v) ? nlohmann::ordered_json(*v) : nlohmann::ordered_json());
            else if (const std::string* s = std::get_if<std::string>(&cell))
                r.push_back(*s);
            else
                r.push_back(nullptr);
        }
        rows_json.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows_json);
    return doc.dump(2) + "\n";
}

std::string Table::render(OutputFormat format) const { return format == OutputFormat::Json ? to_json() : to_csv(); }

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw DomainError("unknown output format '" + name + "' (expected csv or json)");
}

} // namespace ofqn
