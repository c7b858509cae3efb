#include <aasim/entrypoint/aggregator.hpp>
#include <aasim/world/state.hpp>

namespace aasim
{
AggregateSignature Aggregator::aggregate_ops(std::span<const UserOperation> ops) const
{
    std::vector<Signature> sigs;
    sigs.reserve(ops.size());
    for (const auto& op : ops)
    {
        if (op.signatures.empty())
            throw Error{Errc::MalformedInput, "operation from " + op.sender.hex() + " is unsigned"};
        sigs.push_back(op.signatures.front());
    }
    return scheme_.aggregate(sigs);
}

bool Aggregator::verify_aggregate(std::span<const UserOperation> ops,
    const AggregateSignature& agg, const SignerLookup& signer_of) const
{
    std::vector<SignedMessage> members;
    members.reserve(ops.size());
    for (const auto& op : ops)
    {
        std::optional<PublicId> signer;
        if (signer_of)
            signer = signer_of(op);
        else if (!op.signatures.empty())
            signer = op.signatures.front().signer;
        if (!signer)
            return false;
        members.push_back({*signer, entrypoint_.digest(op)});
    }
    return scheme_.verify_aggregate(members, agg);
}

std::optional<PublicId> aggregation_signer(const WorldState& world, const UserOperation& op)
{
    if (const auto* w = world.wallet(op.sender))
    {
        if (is_multisig(w->policy))
            return std::nullopt;
        return sole_owner(w->policy);
    }
    if (op.init_code && !world.exists(op.sender))
        return op.init_code->owner;
    return std::nullopt;
}

}  // namespace aasim
