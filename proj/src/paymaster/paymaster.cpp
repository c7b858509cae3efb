#include <aasim/paymaster/paymaster.hpp>
#include <aasim/world/state.hpp>

namespace aasim
{
namespace
{
void check_cap(const std::optional<uint64_t>& cap, const UserOperation& op)
{
    if (cap && op.call_gas_limit > *cap)
        throw Error{Errc::GasLimitExceedsPolicy,
            "call_gas_limit " + std::to_string(op.call_gas_limit) + " above cap " +
                std::to_string(*cap)};
}
}  // namespace

PaymasterContext validate_paymaster_op(
    WorldState& world, const UserOperation& op, const Hash32& op_digest, const Wei& prefund)
{
    if (!op.paymaster_and_data)
        throw Error{Errc::UnknownPaymaster, "operation names no paymaster"};
    const Address pm = op.paymaster_and_data->paymaster;
    const auto* record = world.paymaster(pm);
    if (!record)
        throw Error{Errc::UnknownPaymaster, pm.hex()};

    PaymasterContext ctx{op_digest, pm, op.sender, prefund, 0, false};
    PaymasterRecord next = *record;

    if (auto* s = std::get_if<SponsoredPolicy>(&next.policy))
    {
        check_cap(s->max_call_gas, op);
        if (!s->whitelist.contains(op.sender))
            throw Error{Errc::NotWhitelisted, op.sender.hex()};
        if (s->budget < prefund)
            throw Error{Errc::BudgetExhausted,
                "budget " + to_dec(s->budget) + " < prefund " + to_dec(prefund)};
    }
    else
    {
        const auto& t = std::get<TokenGasPolicy>(next.policy);
        check_cap(t.max_call_gas, op);
        ctx.reserved_tokens = token_charge(t.rate, prefund);
        if (world.tokens().allowance(t.token, op.sender, pm) < ctx.reserved_tokens)
            throw Error{Errc::InsufficientAllowance,
                t.token + " allowance below " + to_dec(ctx.reserved_tokens)};
        if (world.tokens().balance(t.token, op.sender) < ctx.reserved_tokens)
            throw Error{Errc::InsufficientTokenBalance,
                t.token + " balance below " + to_dec(ctx.reserved_tokens)};
    }

    const Wei deposit = world.deposits().of(pm);
    if (deposit < next.reserved || deposit - next.reserved < prefund)
        throw Error{Errc::PaymasterDepositTooLow,
            "deposit " + to_dec(deposit) + " cannot cover prefund " + to_dec(prefund)};

    if (auto* s = std::get_if<SponsoredPolicy>(&next.policy))
        s->budget -= prefund;
    else
    {
        const auto& token = std::get<TokenGasPolicy>(next.policy).token;
        world.token_spend_allowance(token, op.sender, pm, ctx.reserved_tokens);
        world.token_transfer(token, op.sender, pm, ctx.reserved_tokens);
    }
    next.reserved += prefund;
    world.set_paymaster(pm, std::move(next));
    return ctx;
}

Settlement post_op(WorldState& world, PaymasterContext& ctx, const Wei& actual_gas_cost)
{
    if (ctx.settled)
        throw Error{Errc::DoubleSettle, ctx.op_digest.hex()};
    if (actual_gas_cost > ctx.reserved)
        throw Error{Errc::OverCharge,
            to_dec(actual_gas_cost) + " exceeds reservation " + to_dec(ctx.reserved)};
    const auto* record = world.paymaster(ctx.paymaster);
    if (!record || record->reserved < ctx.reserved)
        throw Error{Errc::InternalInvariantViolation, "paymaster reservation missing"};

    Settlement out;
    out.paymaster = ctx.paymaster;
    out.gas_cost = actual_gas_cost;
    out.released = ctx.reserved - actual_gas_cost;

    PaymasterRecord next = *record;
    next.reserved -= ctx.reserved;
    if (auto* s = std::get_if<SponsoredPolicy>(&next.policy))
        s->budget += out.released;
    else
    {
        const auto& t = std::get<TokenGasPolicy>(next.policy);
        out.token = t.token;
        out.tokens_charged = token_charge(t.rate, actual_gas_cost);
        out.tokens_refunded = ctx.reserved_tokens - out.tokens_charged;
        if (out.tokens_refunded > 0)
        {
            world.token_transfer(t.token, ctx.paymaster, ctx.sender, out.tokens_refunded);
            const auto allowance = world.tokens().allowance(t.token, ctx.sender, ctx.paymaster);
            const auto restored = allowance > U256_MAX - out.tokens_refunded
                ? U256_MAX
                : allowance + out.tokens_refunded;
            world.token_approve(t.token, ctx.sender, ctx.paymaster, restored);
        }
    }
    world.set_paymaster(ctx.paymaster, std::move(next));
    world.deposit_debit(ctx.paymaster, actual_gas_cost);
    ctx.settled = true;
    return out;
}

}  // namespace aasim
