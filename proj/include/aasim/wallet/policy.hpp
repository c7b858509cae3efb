// Account validation policies consulted by the EntryPoint verification loop.
#pragma once

#include <aasim/crypto/signature.hpp>
#include <aasim/world/block.hpp>

#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

namespace aasim
{
/// What a module may inspect about the operation being validated.
struct OpMetadata
{
    Address sender{};
    uint64_t nonce = 0;
    std::optional<Address> target;
    Wei value = 0;
};

struct ModuleInput
{
    Hash32 digest{};
    OpMetadata op{};
    BlockContext block{};
};

/// Custom predicate module. Implementations must be deterministic functions
/// of their input.
class WalletModule
{
public:
    virtual ~WalletModule() = default;
    virtual std::string kind() const = 0;
    virtual bool allows(const ModuleInput& in) const = 0;
    virtual nlohmann::json to_json() const = 0;
};

/// Rejects operations moving more than `cap` wei in their payload.
class SpendingLimitModule final : public WalletModule
{
public:
    explicit SpendingLimitModule(Wei cap) : cap_{cap} {}
    std::string kind() const override { return "spending_limit"; }
    bool allows(const ModuleInput& in) const override { return in.op.value <= cap_; }
    nlohmann::json to_json() const override;
    const Wei& cap() const noexcept { return cap_; }

private:
    Wei cap_;
};

/// Allows execution only while the block timestamp lies in [not_before, not_after].
class TimeWindowModule final : public WalletModule
{
public:
    TimeWindowModule(uint64_t not_before, uint64_t not_after)
      : not_before_{not_before}, not_after_{not_after}
    {}
    std::string kind() const override { return "time_window"; }
    bool allows(const ModuleInput& in) const override
    {
        return in.block.timestamp >= not_before_ && in.block.timestamp <= not_after_;
    }
    nlohmann::json to_json() const override;
    uint64_t not_before() const noexcept { return not_before_; }
    uint64_t not_after() const noexcept { return not_after_; }

private:
    uint64_t not_before_;
    uint64_t not_after_;
};

/// Only lets the payload call one of the listed targets.
class TargetAllowlistModule final : public WalletModule
{
public:
    explicit TargetAllowlistModule(std::vector<Address> targets) : targets_{std::move(targets)} {}
    std::string kind() const override { return "target_allowlist"; }
    bool allows(const ModuleInput& in) const override;
    nlohmann::json to_json() const override;

private:
    std::vector<Address> targets_;
};

std::shared_ptr<const WalletModule> module_from_json(const nlohmann::json& j);

struct SingleKey
{
    PublicId owner;
};

struct Multisig
{
    unsigned threshold = 1;
    std::vector<PublicId> owners;
};

struct Composite;
using ValidationPolicy = std::variant<SingleKey, Multisig, Composite>;

struct Composite
{
    std::shared_ptr<const ValidationPolicy> base;
    std::vector<std::shared_ptr<const WalletModule>> modules;
};

/// Throws InvalidPolicy unless 1 <= k <= |owners| and owners are distinct.
Multisig make_multisig(unsigned threshold, std::vector<PublicId> owners);

/// Checks structural invariants of a policy tree. Throws InvalidPolicy.
void check_policy(const ValidationPolicy& policy);

/// True iff the signatures satisfy the policy for `in.digest`.
bool validate(const ValidationPolicy& policy, const ModuleInput& in,
    std::span<const Signature> signatures, const SignatureScheme& scheme);

inline bool validate(const ValidationPolicy& policy, const Hash32& digest,
    std::span<const Signature> signatures, const SignatureScheme& scheme)
{
    return validate(policy, ModuleInput{digest, {}, {}}, signatures, scheme);
}

/// Wraps `policy` so future validations also require `module`.
ValidationPolicy register_module(
    const ValidationPolicy& policy, std::shared_ptr<const WalletModule> module);

/// The innermost SingleKey/Multisig of a policy.
const ValidationPolicy& base_policy(const ValidationPolicy& policy);

/// Single owner the policy delegates to, if it is key-based with one owner.
std::optional<PublicId> sole_owner(const ValidationPolicy& policy);

bool is_multisig(const ValidationPolicy& policy);

nlohmann::json policy_to_json(const ValidationPolicy& policy);
ValidationPolicy policy_from_json(const nlohmann::json& j);

struct RecoveryConfig
{
    std::vector<PublicId> guardians;
    unsigned threshold = 1;
    /// Simulation time units between request creation and earliest rotation.
    uint64_t delay = 0;
};

struct RecoveryRequest
{
    Address target{};
    PublicId new_owner{};
    std::vector<Signature> approvals;
    uint64_t created_at = 0;
};

/// Throws InvalidPolicy unless 1 <= threshold <= |guardians| and guardians are distinct.
void check_recovery_config(const RecoveryConfig& config);

nlohmann::json recovery_to_json(const RecoveryConfig& config);
RecoveryConfig recovery_from_json(const nlohmann::json& j);

}  // namespace aasim
