#include <aasim/harness/suite.hpp>
#include <aasim/programs/builtin.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

namespace aasim
{
namespace
{
constexpr ReferenceRow ROWS[] = {
    {"Transaction disorder", "transaction_disorder.json", true},
    {"Timestamp manipulation", "timestamp_manipulation.json", true},
    {"Short address", "short_address.json", true},
    {"Unbounded operations", "unbounded_operations.json", true},
    {"Reentrancy", "reentrancy.json", true},
    {"Frozen ether", "frozen_ether.json", true},
    {"Manipulated balance", "manipulated_balance.json", true},
    {"Insufficient signature", "insufficient_signature.json", true},
    {"Self-destruct contract", "selfdestruct.json", true},
    {"tx.origin", "txorigin.json", true},
    {"Wrong payment", "wrong_payment.json", true},
    {"Randomness reliance", "randomness.json", false},
    {"Integer overflow", "integer_overflow.json", false},
    {"Stack limit", "stack_limit.json", false},
};
}  // namespace

std::span<const ReferenceRow> table2_rows()
{
    return ROWS;
}

SuiteReport run_table2_suite(const std::filesystem::path& dir, uint64_t seed)
{
    // Index scenario files by the row they declare so renamed files still count.
    std::map<std::string, Scenario> by_row;
    std::error_code ec;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    if (ec)
        throw Error{Errc::MissingScenario, dir.string() + ": " + ec.message()};
    std::ranges::sort(files);
    const auto& programs = *builtin_registry();
    for (const auto& f : files)
    {
        auto s = load_scenario(f, programs);
        by_row.emplace(s.table2_row, std::move(s));
    }

    SuiteReport report;
    report.seed = seed;
    for (const auto& row : ROWS)
    {
        const auto it = by_row.find(std::string{row.row});
        if (it == by_row.end())
            throw Error{Errc::MissingScenario,
                std::string{row.row} + " (expected " + std::string{row.file} + ")"};
        const auto& s = it->second;
        const auto result = run_scenario_detailed(s, seed);

        SuiteRow out;
        out.name = s.name;
        out.table2_row = s.table2_row;
        out.verdict = result.verdict;
        out.reference_mitigated = row.mitigated;
        out.match = result.verdict.mitigated == row.mitigated && result.match;
        report.match_vector.push_back(out.match);
        report.summary.total += 1;
        report.summary.matched += out.match;
        (out.verdict.mitigated ? report.summary.mitigated : report.summary.not_mitigated) += 1;
        report.rows.push_back(std::move(out));
    }
    return report;
}

nlohmann::json suite_to_json(const SuiteReport& r)
{
    auto rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"name", row.name},
            {"table2_row", row.table2_row},
            {"verdict",
                {{"exploit_succeeded_legacy", *row.verdict.exploit_succeeded_legacy},
                    {"exploit_succeeded_aa", *row.verdict.exploit_succeeded_aa},
                    {"mitigated", row.verdict.mitigated},
                    {"mitigated_by", row.verdict.mitigated_by ? nlohmann::json(*row.verdict.mitigated_by)
                                                              : nlohmann::json(nullptr)}}},
            {"reference_mitigated", row.reference_mitigated},
            {"match", row.match}});
    return {{"seed", r.seed},
        {"rows", rows},
        {"match_vector", r.match_vector},
        {"summary",
            {{"total", r.summary.total}, {"matched", r.summary.matched},
                {"mitigated", r.summary.mitigated}, {"not_mitigated", r.summary.not_mitigated}}}};
}

std::string suite_to_text(const SuiteReport& r)
{
    const auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::ostringstream out;
    out << std::left << std::setw(26) << "row" << std::setw(8) << "legacy" << std::setw(6) << "aa"
        << std::setw(11) << "mitigated" << std::setw(11) << "reference" << std::setw(26)
        << "mitigated_by" << "match\n";
    out << std::string(93, '-') << "\n";
    for (const auto& row : r.rows)
        out << std::setw(26) << row.table2_row << std::setw(8)
            << yn(*row.verdict.exploit_succeeded_legacy) << std::setw(6)
            << yn(*row.verdict.exploit_succeeded_aa) << std::setw(11) << yn(row.verdict.mitigated)
            << std::setw(11) << (row.reference_mitigated ? "yes" : "no") << std::setw(26)
            << row.verdict.mitigated_by.value_or("-") << (row.match ? "yes" : "NO") << "\n";
    out << std::string(93, '-') << "\n";
    out << "seed " << r.seed << ": " << r.summary.matched << "/" << r.summary.total
        << " rows match, " << r.summary.mitigated << " mitigated, " << r.summary.not_mitigated
        << " not mitigated\n";
    return out.str();
}

}  // namespace aasim
