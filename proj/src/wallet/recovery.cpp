#include <aasim/hash.hpp>
#include <aasim/wallet/recovery.hpp>
#include <aasim/world/state.hpp>

#include <algorithm>
#include <set>

namespace aasim
{
std::string_view to_string(RecoveryStatus s) noexcept
{
    switch (s)
    {
    case RecoveryStatus::Pending: return "Pending";
    case RecoveryStatus::Rejected: return "Rejected";
    case RecoveryStatus::Rotated: return "Rotated";
    case RecoveryStatus::TooEarly: return "TooEarly";
    case RecoveryStatus::InsufficientApprovals: return "InsufficientApprovals";
    }
    return "Unknown";
}

Hash32 recovery_digest(const Address& target, const PublicId& new_owner, uint64_t created_at)
{
    return Encoder{"social-recovery"}
        .address(target)
        .bytes(new_owner.view())
        .u64(created_at)
        .digest();
}

Signature approve_recovery(
    const RecoveryRequest& request, const SecretKey& guardian, const SignatureScheme& scheme)
{
    return scheme.sign(
        guardian, recovery_digest(request.target, request.new_owner, request.created_at));
}

namespace
{
bool is_guardian(const RecoveryConfig& config, const PublicId& who)
{
    return std::ranges::find(config.guardians, who) != config.guardians.end();
}
}  // namespace

unsigned count_guardian_approvals(
    const RecoveryConfig& config, const RecoveryRequest& request, const SignatureScheme& scheme)
{
    const auto digest = recovery_digest(request.target, request.new_owner, request.created_at);
    std::set<PublicId> approved;
    for (const auto& sig : request.approvals)
        if (is_guardian(config, sig.signer) && scheme.verify(sig, digest))
            approved.insert(sig.signer);
    return static_cast<unsigned>(approved.size());
}

RecoveryStatus propose_recovery(
    const RecoveryConfig& config, const RecoveryRequest& request, const SignatureScheme& scheme)
{
    const auto digest = recovery_digest(request.target, request.new_owner, request.created_at);
    for (const auto& sig : request.approvals)
        if (!is_guardian(config, sig.signer) || !scheme.verify(sig, digest))
            return RecoveryStatus::Rejected;
    return RecoveryStatus::Pending;
}

ValidationPolicy rotate_owner(const ValidationPolicy& policy, const PublicId& new_owner)
{
    if (const auto* c = std::get_if<Composite>(&policy))
        return Composite{
            std::make_shared<const ValidationPolicy>(rotate_owner(*c->base, new_owner)),
            c->modules};
    return SingleKey{new_owner};
}

RecoveryStatus execute_recovery(WorldState& world, const RecoveryRequest& request, uint64_t now)
{
    const auto* record = world.wallet(request.target);
    if (!record || !record->recovery)
        return RecoveryStatus::Rejected;
    const auto& config = *record->recovery;
    if (count_guardian_approvals(config, request, world.scheme()) < config.threshold)
        return RecoveryStatus::InsufficientApprovals;
    // created_at + delay may not fit; compare without adding.
    if (now < request.created_at || now - request.created_at < config.delay)
        return RecoveryStatus::TooEarly;

    WalletRecord next = *record;
    next.policy = rotate_owner(record->policy, request.new_owner);
    world.set_wallet(request.target, std::move(next));
    return RecoveryStatus::Rotated;
}

}  // namespace aasim
