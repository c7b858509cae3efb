// Singleton EntryPoint: deposits, the verification loop and the execution loop.
#pragma once

#include <aasim/paymaster/paymaster.hpp>
#include <aasim/userop/user_operation.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace aasim
{
class WorldState;

/// Gas charged to every verified operation on top of pre_verification_gas.
inline constexpr uint64_t VERIFICATION_OVERHEAD_GAS = 40'000;

enum class Phase
{
    RejectedVerification,
    ExecutedSuccess,
    ExecutedReverted,
};

std::string_view to_string(Phase p) noexcept;

struct PerOpReceipt
{
    Hash32 op_digest{};
    Address sender{};
    uint64_t nonce = 0;
    Phase phase_reached = Phase::RejectedVerification;
    Wei actual_gas_cost = 0;
    /// Reserved before execution; zero for rejected operations.
    Wei prefund = 0;
    /// 40000 + pre_verification_gas + execution steps; zero when rejected.
    uint64_t gas_used = 0;
    /// Set when a paymaster paid, otherwise the account paid.
    std::optional<Address> paymaster;
    std::optional<std::string> reason;
    std::optional<Settlement> settlement;
};

struct HandleOpsReceipt
{
    Address beneficiary{};
    std::vector<PerOpReceipt> ops;
    Wei beneficiary_credited = 0;
};

/// Combined signature for every bundled operation naming `aggregator`.
struct AggregatedGroup
{
    Address aggregator{};
    AggregateSignature signature;
};

struct Bundle
{
    std::vector<UserOperation> ops;
    std::vector<AggregatedGroup> aggregates;
};

nlohmann::json receipt_to_json(const PerOpReceipt& r);
/// One JSON object per line, in bundle order.
std::string receipts_to_jsonl(const HandleOpsReceipt& receipt);

class EntryPoint
{
public:
    explicit EntryPoint(Address address = default_address(), uint64_t chain_id = 1)
      : address_{address}, chain_id_{chain_id}
    {}

    static Address default_address();

    const Address& address() const noexcept { return address_; }
    uint64_t chain_id() const noexcept { return chain_id_; }

    Hash32 digest(const UserOperation& op) const { return digest_user_op(op, address_, chain_id_); }
    UserOperation sign(UserOperation op, const SecretKey& secret, const SignatureScheme& scheme) const
    {
        return sign_user_op(std::move(op), secret, scheme, address_, chain_id_);
    }

    /// (call_gas_limit + verification_gas_limit + pre_verification_gas) * max_fee_per_gas.
    /// Throws ArithmeticOverflow above 2^256 - 1.
    static Wei prefund(const UserOperation& op);

    /// Moves `amount` from `from`'s balance into the deposit of `account`.
    void deposit_to(WorldState& world, const Address& from, const Address& account,
        const Wei& amount) const;

    /// What a withdrawal authorisation signs.
    Hash32 withdraw_digest(const Address& account, const Wei& amount, uint64_t ledger_nonce) const;

    /// Moves `amount` of `account`'s deposit to `to`. `auth` must satisfy the
    /// account's key: its paymaster owner, its wallet policy, or the key behind
    /// an EOA address. Throws BadAuth or InsufficientDeposit.
    void withdraw_from(WorldState& world, const Address& account, const Wei& amount,
        std::span<const Signature> auth, const Address& to) const;

    uint64_t aa_nonce(const WorldState& world, const Address& sender) const;

    /// Runs the verification loop, then the execution loop, over the bundle.
    /// Per-operation failures become receipts. Throws InvalidBundle for a
    /// bundle with two operations of one sender, and InternalInvariantViolation
    /// (after restoring the pre-bundle state) if an accounting invariant breaks.
    HandleOpsReceipt handle_ops(WorldState& world, const Bundle& bundle,
        const Address& beneficiary) const;

private:
    Address address_;
    uint64_t chain_id_;
};

}  // namespace aasim
