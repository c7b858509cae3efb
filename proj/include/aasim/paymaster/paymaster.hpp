// Paymaster validation and post-execution settlement.
#pragma once

#include <aasim/paymaster/policy.hpp>
#include <aasim/userop/user_operation.hpp>

namespace aasim
{
class WorldState;

/// Reservation made during verification, consumed by exactly one post_op.
struct PaymasterContext
{
    Hash32 op_digest{};
    Address paymaster{};
    Address sender{};
    /// Prefund reserved against the paymaster's EntryPoint deposit.
    Wei reserved = 0;
    /// TokenGas: token units already moved from the sender to the paymaster.
    u256 reserved_tokens = 0;
    bool settled = false;
};

struct Settlement
{
    Address paymaster{};
    /// Wei taken from the paymaster deposit.
    Wei gas_cost = 0;
    /// Part of the reservation released back.
    Wei released = 0;
    /// TokenGas only.
    std::string token;
    u256 tokens_charged = 0;
    u256 tokens_refunded = 0;
};

/// Accepts the operation under the paymaster's policy and reserves `prefund`.
/// Sponsored reserves budget; TokenGas pre-charges ceil(prefund / rate) tokens
/// from the sender. Throws UnknownPaymaster, GasLimitExceedsPolicy,
/// NotWhitelisted, BudgetExhausted, InsufficientAllowance,
/// InsufficientTokenBalance or PaymasterDepositTooLow, with no state change.
PaymasterContext validate_paymaster_op(WorldState& world, const UserOperation& op,
    const Hash32& op_digest, const Wei& prefund);

/// Charges `actual_gas_cost` to the paymaster deposit and releases the rest of
/// the reservation. TokenGas keeps ceil(actual / rate) tokens and refunds the
/// remainder. Throws DoubleSettle or OverCharge.
Settlement post_op(WorldState& world, PaymasterContext& ctx, const Wei& actual_gas_cost);

}  // namespace aasim
