#include "cli/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "json.hpp"

namespace liouville::cli {

Check check_below(std::string id, double measured, double tolerance, std::string description) {
    return {std::move(id), measured <= tolerance, measured, tolerance, std::move(description)};
}

Check check_above(std::string id, double measured, double tolerance, std::string description) {
    return {std::move(id), measured >= tolerance, measured, tolerance, std::move(description)};
}

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& metadata,
               const std::vector<CsvColumn>& columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& line : metadata) out << "# " << line << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c].name;
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out << (c ? "," : "") << format_number(columns[c].values.at(r));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_summary(const std::filesystem::path& path, const std::string& command, const ScenarioConfig& cfg,
                   const std::vector<Check>& checks) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["command"] = command;
    json echo = json::object();
    for (const auto& [section, keys] : cfg.echo) {
        json s = json::object();
        for (const auto& [key, value] : keys) s[key] = value;
        echo[section] = s;
    }
    doc["config_echo"] = echo;
    json list = json::array();
    for (const auto& c : checks) {
        json item;
        item["id"] = c.id;
        item["pass"] = c.pass;
        item["measured"] = std::isfinite(c.measured) ? json(c.measured) : json(format_number(c.measured));
        item["tolerance"] = c.tolerance;
        item["description"] = c.description;
        list.push_back(item);
    }
    doc["checks"] = list;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

void print_table(std::ostream& os, const std::vector<Check>& checks) {
    std::size_t width = 2;
    for (const auto& c : checks) width = std::max(width, c.id.size());
    os << std::left << std::setw(static_cast<int>(width)) << "ID" << "  RESULT  "
       << std::setw(24) << "MEASURED" << "  " << std::setw(20) << "TOLERANCE" << "  DESCRIPTION\n";
    for (const auto& c : checks) {
        os << std::left << std::setw(static_cast<int>(width)) << c.id << "  " << (c.pass ? "PASS  " : "FAIL  ")
           << "  " << std::setw(24) << format_number(c.measured) << "  " << std::setw(20)
           << format_number(c.tolerance) << "  " << c.description << '\n';
    }
    const auto passed = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    os << passed << "/" << checks.size() << " checks passed\n";
}

}  // namespace liouville::cli
