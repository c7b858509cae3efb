// Gas paid in USDC through a token paymaster while the user swaps USDC for ETH.
#pragma once

#include <aasim/entrypoint/entrypoint.hpp>

#include <string>
#include <vector>

namespace aasim
{
struct LedgerDelta
{
    std::string name;
    Address address{};
    /// Native wei (balance plus EntryPoint deposit), signed decimal.
    std::string native_delta;
    /// USDC base units, signed decimal.
    std::string usdc_delta;
};

struct DemoReport
{
    uint64_t chosen_pool = 0;
    u256 quote = 0;
    PerOpReceipt receipt;
    std::vector<LedgerDelta> deltas;
};

/// The user's account holds USDC and no ETH. It states the intent
/// "2,000 USDC for as much ETH as possible"; two pools quote 1.2 ETH and
/// 1.18 ETH; the paymaster takes gas in USDC.
DemoReport run_usdc_demo();

nlohmann::json demo_to_json(const DemoReport& r);
std::string demo_to_text(const DemoReport& r);

}  // namespace aasim
