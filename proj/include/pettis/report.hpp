#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pettis/config.hpp"

namespace pettis {

using Cell = std::variant<std::int64_t, double, bool, std::string>;
using Row = std::vector<Cell>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

/// Campaign output: one main table, `# key=value` summary entries and
/// optional auxiliary tables.
struct Report {
    std::string campaign;
    Table main;
    std::vector<std::pair<std::string, Cell>> summary;
    std::vector<Table> extra;
    std::uint64_t violations = 0;

    bool pass() const noexcept { return violations == 0; }
    void note(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }
};

/// Doubles are printed with 17 significant digits so values round-trip.
std::string format_cell(const Cell& cell);

void write_csv(std::ostream& os, const Table& table);
void write_csv(std::ostream& os, const Report& report);
nlohmann::json report_to_json(const Report& report);

/// Writes the report to `path` (stdout when empty). CSV output puts each
/// auxiliary table in `<stem>.<table>.csv` next to the main file.
void write_report(const Report& report, const std::string& path, ReportFormat format);

}  // namespace pettis
