// Aggregate-signature support: one verification for a group of operations.
#pragma once

#include <aasim/entrypoint/entrypoint.hpp>

#include <functional>

namespace aasim
{
class WorldState;

/// Key an operation's signature is checked against.
using SignerLookup = std::function<std::optional<PublicId>(const UserOperation&)>;

class Aggregator
{
public:
    Aggregator(const SignatureScheme& scheme, const EntryPoint& entrypoint)
      : scheme_{scheme}, entrypoint_{entrypoint}
    {}

    /// Σ tags mod p. Throws MixedSchemes.
    AggregateSignature aggregate(std::span<const Signature> sigs) const
    {
        return scheme_.aggregate(sigs);
    }

    /// Aggregates the first signature of every operation.
    AggregateSignature aggregate_ops(std::span<const UserOperation> ops) const;

    /// True iff agg covers exactly one (signer, digest) pair per operation.
    /// Without a lookup the signer is the one named by the op's first signature.
    bool verify_aggregate(std::span<const UserOperation> ops, const AggregateSignature& agg,
        const SignerLookup& signer_of = {}) const;

private:
    const SignatureScheme& scheme_;
    const EntryPoint& entrypoint_;
};

/// Key the EntryPoint expects behind an aggregated operation: the single
/// owner of the deployed wallet, or the owner in its init code.
std::optional<PublicId> aggregation_signer(const WorldState& world, const UserOperation& op);

}  // namespace aasim
