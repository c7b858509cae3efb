#pragma once

#include <aasim/crypto/signature.hpp>

#include <optional>
#include <set>
#include <string>
#include <variant>

#include <json.hpp>

namespace aasim
{
/// Non-negative rational num/den with den > 0.
struct Rational
{
    u256 num = 1;
    u256 den = 1;

    bool operator==(const Rational&) const = default;
};

/// Gas paid out of the paymaster deposit for whitelisted senders, bounded by a budget.
struct SponsoredPolicy
{
    std::set<Address> whitelist;
    Wei budget = 0;
    /// Upper bound on call_gas_limit the paymaster agrees to fund.
    std::optional<uint64_t> max_call_gas;
};

/// Gas paid in an ERC-20 style token, converted at a fixed rate.
struct TokenGasPolicy
{
    std::string token;
    /// Wei of gas covered per token base unit.
    Rational rate;
    std::optional<uint64_t> max_call_gas;
};

using PaymasterPolicy = std::variant<SponsoredPolicy, TokenGasPolicy>;

/// Paymaster bookkeeping stored in the world state.
struct PaymasterRecord
{
    PaymasterPolicy policy;
    /// Key allowed to withdraw the paymaster's EntryPoint deposit.
    PublicId owner{};
    /// Σ prefunds reserved against the deposit by in-flight operations.
    Wei reserved = 0;
};

/// Throws InvalidPolicy on a zero rate or zero denominator.
void check_policy(const PaymasterPolicy& policy);

/// Smallest token amount whose value at `rate` covers `cost` wei: ceil(cost * den / num).
u256 token_charge(const Rational& rate, const Wei& cost);

nlohmann::json paymaster_policy_to_json(const PaymasterPolicy& policy);
PaymasterPolicy paymaster_policy_from_json(const nlohmann::json& j);

}  // namespace aasim
