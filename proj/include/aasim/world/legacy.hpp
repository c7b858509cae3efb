// The two pre-AA transaction types originated by externally owned accounts.
#pragma once

#include <aasim/world/program.hpp>

#include <optional>
#include <variant>

namespace aasim
{
struct ContractCreation
{
    std::string program;
    Wei endowment = 0;
    /// Passed to the program's constructor, if it has one.
    Bytes init_input;
};

struct MessageCall
{
    Address target{};
    Wei value = 0;
    Bytes input;
};

struct LegacyTransaction
{
    Address origin{};
    std::variant<ContractCreation, MessageCall> kind;
    uint64_t gas_limit = INTRINSIC_GAS;
    Wei gas_price = 0;
    uint64_t nonce = 0;
};

struct ExecutionResult
{
    bool success = false;
    CallStatus status = CallStatus::Success;
    Bytes output;
    /// Intrinsic plus execution gas, never above the transaction's limit.
    uint64_t gas_used = 0;
    /// True when execution effects were rolled back (gas is still charged).
    bool reverted = false;
    std::string reason;
    std::vector<LogRecord> logs;
    std::optional<Address> created;
};

/// Validates and applies a legacy transaction. Rejections (BadNonce,
/// InsufficientFunds, IntrinsicGasTooLow, UnknownTarget, ...) throw and leave the
/// state untouched; execution failures are reported in the result with gas charged.
/// Fees go to the block proposer.
ExecutionResult apply_legacy_tx(WorldState& world, const LegacyTransaction& tx);

}  // namespace aasim
