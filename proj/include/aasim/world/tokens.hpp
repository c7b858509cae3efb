#pragma once

#include <aasim/common.hpp>

#include <map>
#include <string>
#include <utility>

namespace aasim
{
/// ERC-20 style balances and allowances for every token id.
/// Plain value type; journaling is done by WorldState.
struct TokenLedger
{
    std::map<std::string, std::map<Address, u256>> balances;
    /// token -> (owner, spender) -> amount
    std::map<std::string, std::map<std::pair<Address, Address>, u256>> allowances;

    u256 balance(const std::string& token, const Address& holder) const;
    u256 allowance(const std::string& token, const Address& owner, const Address& spender) const;
    u256 supply(const std::string& token) const;

    bool operator==(const TokenLedger&) const = default;
};

}  // namespace aasim
