#include "pettis/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "pettis/errors.hpp"

namespace pettis {

namespace {

nlohmann::json cell_to_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return format_cell(v);
            }
            return v;
        },
        cell);
}

nlohmann::json table_to_json(const Table& table) {
    auto rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        auto obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            obj[table.columns[i]] = cell_to_json(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    return nlohmann::json{{"columns", table.columns}, {"rows", std::move(rows)}};
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::config_error, "cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (std::isnan(v)) return "nan";
                if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", v);
                return buf;
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "1" : "0";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return std::to_string(v);
            }
        },
        cell);
}

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
}

void write_csv(std::ostream& os, const Report& report) {
    write_csv(os, report.main);
    os << "# campaign=" << report.campaign << '\n';
    for (const auto& [key, value] : report.summary) os << "# " << key << '=' << format_cell(value) << '\n';
    os << "# violations=" << report.violations << '\n';
    os << "# pass=" << (report.pass() ? 1 : 0) << '\n';
}

nlohmann::json report_to_json(const Report& report) {
    auto summary = nlohmann::json::object();
    for (const auto& [key, value] : report.summary) summary[key] = cell_to_json(value);
    auto tables = nlohmann::json::object();
    for (const auto& t : report.extra) tables[t.name] = table_to_json(t);
    return nlohmann::json{{"campaign", report.campaign},
                          {"table", table_to_json(report.main)},
                          {"summary", std::move(summary)},
                          {"tables", std::move(tables)},
                          {"violations", report.violations},
                          {"pass", report.pass()}};
}

void write_report(const Report& report, const std::string& path, ReportFormat format) {
    if (format == ReportFormat::json) {
        const auto text = report_to_json(report).dump(2) + "\n";
        if (path.empty()) {
            std::cout << text;
        } else {
            open_output(path) << text;
        }
        return;
    }
    if (path.empty()) {
        write_csv(std::cout, report);
        for (const auto& t : report.extra) {
            std::cout << "# table=" << t.name << '\n';
            write_csv(std::cout, t);
        }
        return;
    }
    const std::filesystem::path main(path);
    {
        auto out = open_output(main);
        write_csv(out, report);
    }
    for (const auto& t : report.extra) {
        auto sibling = main.parent_path() / (main.stem().string() + "." + t.name + ".csv");
        auto out = open_output(sibling);
        write_csv(out, t);
    }
}

}  // namespace pettis
