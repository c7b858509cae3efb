// Command-line entry point: run one scenario, run the vulnerability suite, or the USDC demo.
#include <aasim/harness/demo.hpp>
#include <aasim/harness/suite.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace
{
constexpr int EXIT_MATCH = 0;
constexpr int EXIT_MISMATCH = 1;
constexpr int EXIT_USAGE = 2;

uint64_t default_seed()
{
    const char* env = std::getenv("AA_SIM_SEED");
    if (!env || !*env)
        return 0;
    try
    {
        size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used != std::string_view{env}.size())
            throw std::invalid_argument{env};
        return v;
    }
    catch (const std::exception&)
    {
        throw aasim::Error{aasim::Errc::ParseError, "AA_SIM_SEED is not an unsigned integer"};
    }
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Legacy vs account-abstraction attack simulator"};
    app.require_subcommand(1);

    std::string report = "text";
    uint64_t seed = 0;
    bool seed_given = false;

    auto* run = app.add_subcommand("run", "Run one scenario file");
    std::string scenario_path;
    std::string mode = "both";
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--mode", mode, "legacy, aa or both")
        ->check(CLI::IsMember({"legacy", "aa", "both"}));

    auto* suite = app.add_subcommand("suite", "Run every vulnerability scenario in a directory");
    std::string dir;
    suite->add_option("dir", dir, "Scenario directory")->required();

    for (auto* sub : {run, suite})
    {
        sub->add_option("--seed", seed, "Seed (default AA_SIM_SEED or 0)")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--report", report, "json or text")->check(CLI::IsMember({"json", "text"}));
    }

    auto* demo = app.add_subcommand("demo", "USDC paymaster flow with dual-ledger deltas");
    demo->add_option("--report", report, "json or text")->check(CLI::IsMember({"json", "text"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        std::cerr << app.help();
        return EXIT_USAGE;
    }

    try
    {
        if (!seed_given)
            seed = default_seed();
        const bool json = report == "json";

        if (*run)
        {
            const auto s = aasim::load_scenario(scenario_path);
            const auto r =
                aasim::run_scenario_detailed(s, seed, aasim::parse_mode_selection(mode));
            std::cout << (json ? aasim::result_to_json(r).dump(2) + "\n" : aasim::result_to_text(r));
            return r.match ? EXIT_MATCH : EXIT_MISMATCH;
        }
        if (*suite)
        {
            const auto r = aasim::run_table2_suite(dir, seed);
            std::cout << (json ? aasim::suite_to_json(r).dump(2) + "\n" : aasim::suite_to_text(r));
            return r.all_matched() ? EXIT_MATCH : EXIT_MISMATCH;
        }
        const auto r = aasim::run_usdc_demo();
        std::cout << (json ? aasim::demo_to_json(r).dump(2) + "\n" : aasim::demo_to_text(r));
        return EXIT_MATCH;
    }
    catch (const aasim::Error& e)
    {
        std::cerr << "error: " << aasim::to_string(e.code()) << ": " << e.what() << "\n";
        return EXIT_USAGE;
    }
}
