// Attack scenarios executed in legacy and AA modes.
#pragma once

#include <aasim/common.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace aasim
{
class ProgramRegistry;

enum class Mode
{
    Legacy,
    AA,
};

std::string_view to_string(Mode m) noexcept;

enum class ModeSelection
{
    Legacy,
    AA,
    Both,
};

/// Throws ParseError on anything but "legacy", "aa" or "both".
ModeSelection parse_mode_selection(std::string_view text);

struct Expected
{
    bool legacy = false;
    bool aa = false;
    std::optional<std::string> mitigated_by;

    bool mitigated() const noexcept { return legacy && !aa; }
};

/// Scenario file contents, validated against the program registry and the
/// declared actors. Step and predicate bodies stay as JSON and are
/// interpreted by the runner.
struct Scenario
{
    std::string name;
    std::string table2_row;
    std::string description;
    nlohmann::json actors;
    nlohmann::json genesis;
    nlohmann::json steps;
    nlohmann::json success_predicate;
    Expected expected;
};

/// Throws ParseError (naming the field), UnknownProgram or UnknownActor.
Scenario parse_scenario(const nlohmann::json& j, const ProgramRegistry& programs);
Scenario load_scenario(const std::filesystem::path& path, const ProgramRegistry& programs);
Scenario load_scenario(const std::filesystem::path& path);

struct ModeRun
{
    Mode mode = Mode::Legacy;
    bool exploit_succeeded = false;
    std::vector<std::string> trace;
};

struct Verdict
{
    std::optional<bool> exploit_succeeded_legacy;
    std::optional<bool> exploit_succeeded_aa;
    /// exploit_succeeded_legacy && !exploit_succeeded_aa; false unless both ran.
    bool mitigated = false;
    std::optional<std::string> mitigated_by;
};

struct ScenarioResult
{
    std::string name;
    std::string table2_row;
    uint64_t seed = 0;
    ModeSelection modes = ModeSelection::Both;
    std::vector<ModeRun> runs;
    Verdict verdict;
    Expected expected;
    /// Observed outcomes agree with the scenario's expectation for every mode run.
    bool match = false;
};

/// Runs the script on a fresh copy of the genesis for each selected mode.
/// Throws ScriptError when a step cannot apply in a mode.
ScenarioResult run_scenario_detailed(
    const Scenario& s, uint64_t seed, ModeSelection modes = ModeSelection::Both);

inline Verdict run_scenario(const Scenario& s, uint64_t seed)
{
    return run_scenario_detailed(s, seed).verdict;
}

nlohmann::json result_to_json(const ScenarioResult& r);
std::string result_to_text(const ScenarioResult& r);

}  // namespace aasim
