#include <aasim/userop/intent.hpp>
#include <aasim/world/abi.hpp>
#include <aasim/world/state.hpp>

namespace aasim
{
u256 Pool::quote(const u256& amount) const
{
    if (rate.den == 0)
        throw Error{Errc::InvalidPolicy, "pool " + std::to_string(id) + " has zero denominator"};
    const u512 out = u512{amount} * u512{rate.num} / u512{rate.den};
    if (out > u512{U256_MAX})
        throw Error{Errc::ArithmeticOverflow, "quote exceeds 256 bits"};
    return static_cast<u256>(out);
}

const Pool& best_pool(const Intent& intent, const Market& market)
{
    const Pool* best = nullptr;
    u256 best_quote = 0;
    for (const auto& pool : market.pools)
    {
        if (!pool.trades(intent.give_asset, intent.want_asset))
            continue;
        const auto q = pool.quote(intent.give_amount);
        if (!best || q > best_quote || (q == best_quote && pool.id < best->id))
        {
            best = &pool;
            best_quote = q;
        }
    }
    if (!best)
        throw Error{Errc::NoRoute, intent.give_asset + " -> " + intent.want_asset};
    return *best;
}

CallData resolve_intent(const Intent& intent, const Market& market)
{
    const auto& pool = best_pool(intent, market);
    const Wei value = intent.give_asset == NATIVE_ASSET ? intent.give_amount : Wei{0};
    return make_call(pool.address, value, abi::encode_call("swap(uint256)", {intent.give_amount}));
}

Market market_from_world(const WorldState& world)
{
    Market market;
    for (const auto& [addr, acc] : world.accounts())
    {
        if (acc.program != "swap_pool")
            continue;
        Pool p;
        p.id = static_cast<uint64_t>(world.sload(addr, pool_slots::ID));
        p.address = addr;
        p.give_asset = unpack_symbol(world.sload(addr, pool_slots::GIVE));
        p.want_asset = unpack_symbol(world.sload(addr, pool_slots::WANT));
        p.rate = {world.sload(addr, pool_slots::RATE_NUM), world.sload(addr, pool_slots::RATE_DEN)};
        market.pools.push_back(std::move(p));
    }
    return market;
}

}  // namespace aasim
