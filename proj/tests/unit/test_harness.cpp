#include "support.hpp"

#include <aasim/harness/demo.hpp>
#include <aasim/harness/suite.hpp>

#include <doctest.h>

#include <fstream>

using namespace aasim;
using namespace aasim::test;

namespace fs = std::filesystem;
using boost::multiprecision::cpp_int;

namespace
{
const fs::path SCENARIOS{AASIM_SCENARIO_DIR};

nlohmann::json read(const fs::path& p)
{
    std::ifstream in{p};
    return nlohmann::json::parse(in);
}

Errc parse_error_of(const nlohmann::json& j, std::string* what = nullptr)
{
    try
    {
        parse_scenario(j, *builtin_registry());
    }
    catch (const Error& e)
    {
        if (what)
            *what = e.what();
        return e.code();
    }
    return Errc::InternalInvariantViolation;
}

struct TempDir
{
    fs::path path;
    explicit TempDir(std::string_view tag)
      : path{fs::temp_directory_path() / ("aasim-" + std::string{tag} + "-" + std::to_string(::getpid()))}
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_SUITE("harness")
{
    TEST_CASE("scenario validation errors")
    {
        const auto base = read(SCENARIOS / "randomness.json");
        CHECK(parse_error_of(base) == Errc::InternalInvariantViolation);

        auto no_expected = base;
        no_expected.erase("expected");
        std::string what;
        CHECK(parse_error_of(no_expected, &what) == Errc::ParseError);
        CHECK(what.find("expected") != std::string::npos);

        auto half_expected = base;
        half_expected["expected"].erase("aa");
        CHECK(parse_error_of(half_expected) == Errc::ParseError);

        auto bad_program = base;
        bad_program["genesis"]["accounts"]["lottery"]["program"] = "no_such_program";
        CHECK(parse_error_of(bad_program) == Errc::UnknownProgram);

        auto stranger = base;
        stranger["steps"][1]["from"] = "mallory";
        CHECK(parse_error_of(stranger) == Errc::UnknownActor);

        auto stranger_ref = base;
        stranger_ref["steps"][1]["args"] = {"@mallory"};
        CHECK(parse_error_of(stranger_ref) == Errc::UnknownActor);

        CHECK_THROWS_AS(load_scenario(SCENARIOS / "does_not_exist.json"), Error);
        CHECK_THROWS_AS(parse_mode_selection("hybrid"), Error);
    }

    TEST_CASE("tx.origin: exploit only in legacy")
    {
        const auto s = load_scenario(SCENARIOS / "txorigin.json");
        const auto r = run_scenario_detailed(s, 0);
        CHECK(r.verdict.exploit_succeeded_legacy == true);
        CHECK(r.verdict.exploit_succeeded_aa == false);
        CHECK(r.verdict.mitigated);
        CHECK(r.match);
    }

    TEST_CASE("randomness reliance is not mitigated")
    {
        const auto v = run_scenario(load_scenario(SCENARIOS / "randomness.json"), 3);
        CHECK(v.exploit_succeeded_legacy == true);
        CHECK(v.exploit_succeeded_aa == true);
        CHECK_FALSE(v.mitigated);
        CHECK_FALSE(v.mitigated_by);
    }

    TEST_CASE("replayed payment is refused with BadNonce")
    {
        const auto r = run_scenario_detailed(load_scenario(SCENARIOS / "insufficient_signature.json"), 0);
        CHECK(r.verdict.mitigated);
        bool saw = false;
        for (const auto& run : r.runs)
            if (run.mode == Mode::AA)
                for (const auto& line : run.trace)
                    saw = saw || line.find("BadNonce") != std::string::npos;
        CHECK(saw);
    }

    TEST_CASE("single mode runs leave the verdict unmitigated")
    {
        const auto s = load_scenario(SCENARIOS / "txorigin.json");
        const auto legacy = run_scenario_detailed(s, 0, ModeSelection::Legacy);
        REQUIRE(legacy.runs.size() == 1);
        CHECK(legacy.verdict.exploit_succeeded_legacy == true);
        CHECK_FALSE(legacy.verdict.exploit_succeeded_aa);
        CHECK_FALSE(legacy.verdict.mitigated);
        CHECK(legacy.match);

        const auto both = run_scenario_detailed(s, 0);
        CHECK(both.runs[0].trace == legacy.runs[0].trace);
    }

    TEST_CASE("suite reproduces every row")
    {
        const auto r = run_table2_suite(SCENARIOS, 7);
        CHECK(r.rows.size() == 14);
        CHECK(r.all_matched());
        CHECK(r.summary.mitigated == 11);
        CHECK(r.summary.not_mitigated == 3);
        const auto j = suite_to_json(r);
        CHECK(j["rows"].size() == 14);
        CHECK(j["summary"]["matched"] == 14);
        CHECK(suite_to_text(r).find("14/14") != std::string::npos);
    }

    TEST_CASE("reports are byte-identical across runs")
    {
        const auto a = suite_to_json(run_table2_suite(SCENARIOS, 11)).dump();
        const auto b = suite_to_json(run_table2_suite(SCENARIOS, 11)).dump();
        CHECK(a == b);
        const auto s = load_scenario(SCENARIOS / "short_address.json");
        CHECK(result_to_text(run_scenario_detailed(s, 5)) == result_to_text(run_scenario_detailed(s, 5)));
    }

    TEST_CASE("missing row is named")
    {
        TempDir dir{"suite"};
        for (const auto& e : fs::directory_iterator{SCENARIOS})
            if (e.path().filename() != "reentrancy.json")
                fs::copy_file(e.path(), dir.path / e.path().filename());
        try
        {
            run_table2_suite(dir.path, 0);
            FAIL("suite ran without the reentrancy row");
        }
        catch (const Error& e)
        {
            CHECK(e.code() == Errc::MissingScenario);
            CHECK(std::string{e.what()}.find("Reentrancy") != std::string::npos);
        }
    }

    TEST_CASE("demo: two thousand USDC buys 1.2 ETH, gas paid in USDC")
    {
        const auto d = run_usdc_demo();
        CHECK(d.chosen_pool == 1);
        CHECK(d.quote == u256{1'200'000'000'000'000'000ull});
        CHECK(d.receipt.phase_reached == Phase::ExecutedSuccess);
        cpp_int native = 0;
        cpp_int usdc = 0;
        for (const auto& delta : d.deltas)
        {
            native += cpp_int{delta.native_delta};
            usdc += cpp_int{delta.usdc_delta};
        }
        CHECK(native == 0);
        CHECK(usdc == 0);

        const auto& user = d.deltas.front();
        CHECK(user.native_delta == "1200000000000000000");
        const auto& pm = d.deltas[1];
        CHECK(pm.name == "paymaster");
        // Gas in USDC is the wei cost converted at the paymaster rate, rounded up.
        const auto cost = Big{d.receipt.actual_gas_cost};
        CHECK(pm.usdc_delta == cost.ceil_div(Big{600'000'000}).str());
        CHECK(cpp_int{user.usdc_delta} == -(2'000'000'000 + cpp_int{pm.usdc_delta}));
    }
}
