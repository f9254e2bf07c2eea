#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace onslab::cli {

namespace {

void write_number_json(double v, std::ostream& out) {
    if (!std::isfinite(v)) {
        out << "null";
        return;
    }
    out << format_number(v);
}

void write_json_value(const nlohmann::ordered_json& j, std::ostream& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out << ",\n";
            first = false;
            out << pad << nlohmann::ordered_json(key).dump() << ": ";
            write_json_value(value, out, indent, depth + 1);
        }
        out << "\n" << close_pad << "}";
        return;
    }
    case nlohmann::ordered_json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        out << "[\n";
        bool first = true;
        for (const auto& value : j) {
            if (!first) out << ",\n";
            first = false;
            out << pad;
            write_json_value(value, out, indent, depth + 1);
        }
        out << "\n" << close_pad << "]";
        return;
    }
    case nlohmann::ordered_json::value_t::number_float:
        write_number_json(j.get<double>(), out);
        return;
    default:
        out << j.dump();
        return;
    }
}

std::string csv_field(const Cell& cell) {
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    const auto& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    if (const auto* i = std::get_if<long long>(&cell)) return *i;
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    return std::get<std::string>(cell);
}

} // namespace

void Report::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match column count");
    rows.push_back(std::move(row));
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(const Report& report, std::ostream& out) {
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        if (c) out << ',';
        out << csv_field(report.columns[c]);
    }
    out << "\r\n";
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << csv_field(row[c]);
        }
        out << "\r\n";
    }
}

void write_json(const Report& report, const nlohmann::ordered_json& config, std::ostream& out) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["config"] = config;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[report.columns[c]] = cell_json(row[c]);
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    doc["summary"] = report.summary;
    write_json_value(doc, out, 2, 0);
    out << "\n";
}

void write_summary_lines(const Report& report, std::ostream& out) {
    for (const auto& [key, value] : report.summary.items()) {
        out << "summary: " << key << " = ";
        if (value.is_number_float()) {
            out << format_number(value.get<double>());
        } else {
            out << value.dump();
        }
        out << "\n";
    }
}

} // namespace onslab::cli
