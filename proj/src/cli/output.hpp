#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace liouville::cli {

/// One row of a pass/fail table. `measured` is compared against `tolerance` in the
/// direction stated by the check itself; both are reported as numbers.
struct Check {
    std::string id;
    bool pass = false;
    double measured = 0;
    double tolerance = 0;
    std::string description;
};

/// Check that measured <= tolerance.
Check check_below(std::string id, double measured, double tolerance, std::string description);
/// Check that measured >= tolerance.
Check check_above(std::string id, double measured, double tolerance, std::string description);

bool all_pass(const std::vector<Check>& checks);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

struct CsvColumn {
    std::string name;
    std::vector<double> values;
};

/// `# key: value` metadata lines, a header row, then one row per sample.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& metadata,
               const std::vector<CsvColumn>& columns);

void write_summary(const std::filesystem::path& path, const std::string& command, const ScenarioConfig& cfg,
                   const std::vector<Check>& checks);

void print_table(std::ostream& os, const std::vector<Check>& checks);

}  // namespace liouville::cli
