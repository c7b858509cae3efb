// Resolution of outcome-focused intents against a constant-rate market.
#pragma once

#include <aasim/paymaster/policy.hpp>
#include <aasim/userop/user_operation.hpp>

#include <string_view>
#include <vector>

namespace aasim
{
class WorldState;

/// Asset id of the native currency.
inline constexpr std::string_view NATIVE_ASSET = "ETH";

struct Pool
{
    uint64_t id = 0;
    Address address{};
    std::string give_asset;
    std::string want_asset;
    /// Output base units per input base unit.
    Rational rate;

    /// floor(amount * rate). Throws ArithmeticOverflow above 2^256 - 1.
    u256 quote(const u256& amount) const;
    bool trades(std::string_view give, std::string_view want) const
    {
        return give_asset == give && want_asset == want;
    }
};

struct Market
{
    std::vector<Pool> pools;
};

/// Pool with the largest quote for the intent; ties go to the lowest pool id.
/// Throws NoRoute when no pool trades the pair.
const Pool& best_pool(const Intent& intent, const Market& market);

/// Swap call against best_pool. Native-asset input travels as call value.
CallData resolve_intent(const Intent& intent, const Market& market);

/// Every deployed swap_pool contract, read from storage.
Market market_from_world(const WorldState& world);

/// Storage layout of swap_pool contracts.
namespace pool_slots
{
inline constexpr unsigned ID = 0;
inline constexpr unsigned GIVE = 1;
inline constexpr unsigned WANT = 2;
inline constexpr unsigned RATE_NUM = 3;
inline constexpr unsigned RATE_DEN = 4;
}  // namespace pool_slots

}  // namespace aasim
