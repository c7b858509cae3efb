// Guardian-threshold social recovery with a time delay.
#pragma once

#include <aasim/wallet/policy.hpp>

namespace aasim
{
class WorldState;

enum class RecoveryStatus
{
    Pending,
    Rejected,
    Rotated,
    TooEarly,
    InsufficientApprovals,
};

std::string_view to_string(RecoveryStatus s) noexcept;

/// What guardians sign: binds the target, the new owner and the request time,
/// so an approval cannot be replayed onto a different request.
Hash32 recovery_digest(const Address& target, const PublicId& new_owner, uint64_t created_at);

Signature approve_recovery(const RecoveryRequest& request, const SecretKey& guardian,
    const SignatureScheme& scheme);

/// Distinct configured guardians with a valid approval in the request.
unsigned count_guardian_approvals(
    const RecoveryConfig& config, const RecoveryRequest& request, const SignatureScheme& scheme);

/// Pending when every approval is a valid signature from a configured guardian,
/// Rejected otherwise.
RecoveryStatus propose_recovery(
    const RecoveryConfig& config, const RecoveryRequest& request, const SignatureScheme& scheme);

/// Rotates the target's owner key when approvals reach the threshold and
/// now >= created_at + delay. Rejected if the target has no recovery config.
RecoveryStatus execute_recovery(WorldState& world, const RecoveryRequest& request, uint64_t now);

/// Policy with its key material replaced by a single new owner; modules are kept.
ValidationPolicy rotate_owner(const ValidationPolicy& policy, const PublicId& new_owner);

}  // namespace aasim
