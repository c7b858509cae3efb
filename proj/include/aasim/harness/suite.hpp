// The fourteen executable vulnerability rows and the suite report.
#pragma once

#include <aasim/harness/scenario.hpp>

#include <span>

namespace aasim
{
struct ReferenceRow
{
    std::string_view row;
    /// Shipped scenario file for the row.
    std::string_view file;
    bool mitigated;
};

/// Rows in report order with their reference markings.
std::span<const ReferenceRow> table2_rows();

struct SuiteRow
{
    std::string name;
    std::string table2_row;
    Verdict verdict;
    bool reference_mitigated = false;
    bool match = false;
};

struct SuiteSummary
{
    size_t total = 0;
    size_t matched = 0;
    size_t mitigated = 0;
    size_t not_mitigated = 0;
};

struct SuiteReport
{
    uint64_t seed = 0;
    std::vector<SuiteRow> rows;
    std::vector<bool> match_vector;
    SuiteSummary summary;

    bool all_matched() const noexcept { return summary.matched == summary.total; }
};

/// Loads every *.json scenario in `dir`, runs each row and compares the
/// verdicts with the reference markings. Throws MissingScenario naming the
/// first row without a scenario.
SuiteReport run_table2_suite(const std::filesystem::path& dir, uint64_t seed);

nlohmann::json suite_to_json(const SuiteReport& r);
std::string suite_to_text(const SuiteReport& r);

}  // namespace aasim
