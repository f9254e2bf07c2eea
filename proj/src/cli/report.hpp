#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace onslab::cli {

using Cell = std::variant<long long, double, std::string>;

/// Tabular result of one command plus a free-form summary.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    bool invariants_hold = true;

    void add_row(std::vector<Cell> row);
};

/// %.17g, which round-trips every double.
std::string format_number(double value);

/// RFC-4180 style: header row, comma separator, quoted fields only when needed.
void write_csv(const Report& report, std::ostream& out);

/// {"config": ..., "rows": [{column: value, ...}, ...], "summary": ...} with
/// every floating-point number printed through format_number.
void write_json(const Report& report, const nlohmann::ordered_json& config, std::ostream& out);

/// Summary as "key: value" lines, for the CSV mode side channel.
void write_summary_lines(const Report& report, std::ostream& out);

} // namespace onslab::cli
