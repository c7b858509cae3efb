// Pluggable signature scheme and the default simulated additive scheme.
//
// The simulated scheme is deliberately non-cryptographic: a tag is
// H(secret || digest) reduced modulo a fixed 256-bit prime, and verification
// recomputes that tag through an in-process key registry. Tags of the same
// scheme add modulo the prime, which gives an aggregatable scheme with the
// same interface shape as a pairing-based one.
#pragma once

#include <aasim/common.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aasim
{
/// Public identifier of a signing key.
struct PublicId : FixedBytes<32>
{
    static PublicId from_hex(std::string_view hex);
    std::string hex() const;
};

struct SecretKey
{
    Hash32 bytes;
};

struct KeyPair
{
    SecretKey secret;
    PublicId pub;
};

struct Signature
{
    std::string scheme;
    PublicId signer;
    /// Field element mod FIELD_PRIME, big-endian.
    Hash32 tag;

    bool operator==(const Signature&) const = default;
};

struct AggregateSignature
{
    std::string scheme;
    /// Σ member tags mod FIELD_PRIME.
    u256 combined = 0;
    size_t count = 0;

    bool operator==(const AggregateSignature&) const = default;
};

/// One (signer, message digest) pair covered by an aggregate.
struct SignedMessage
{
    PublicId signer;
    Hash32 digest;
};

/// 2^256 - 2^32 - 977.
const u256& field_prime();

class SignatureScheme
{
public:
    virtual ~SignatureScheme() = default;

    virtual std::string_view id() const noexcept = 0;
    /// Deterministic key generation from a 32-byte seed. Registers the key.
    virtual KeyPair keygen(const Hash32& seed) = 0;
    /// Throws UnknownKey when the secret was never registered through keygen.
    virtual Signature sign(const SecretKey& secret, const Hash32& digest) const = 0;
    virtual bool verify(const PublicId& pub, const Hash32& digest, const Hash32& tag) const = 0;

    virtual bool supports_aggregation() const noexcept { return false; }
    /// Throws MixedSchemes if the signatures do not all belong to this scheme.
    virtual AggregateSignature aggregate(std::span<const Signature> sigs) const;
    virtual bool verify_aggregate(
        std::span<const SignedMessage> members, const AggregateSignature& agg) const;

    bool verify(const Signature& sig, const Hash32& digest) const
    {
        return sig.scheme == id() && verify(sig.signer, digest, sig.tag);
    }
};

class SimulatedScheme final : public SignatureScheme
{
public:
    static constexpr std::string_view ID = "sim-additive-v1";

    std::string_view id() const noexcept override { return ID; }
    KeyPair keygen(const Hash32& seed) override;
    Signature sign(const SecretKey& secret, const Hash32& digest) const override;
    bool verify(const PublicId& pub, const Hash32& digest, const Hash32& tag) const override;

    bool supports_aggregation() const noexcept override { return true; }
    AggregateSignature aggregate(std::span<const Signature> sigs) const override;
    bool verify_aggregate(
        std::span<const SignedMessage> members, const AggregateSignature& agg) const override;

    /// Tag the registered secret for `pub` would produce, or nullopt.
    std::optional<u256> expected_tag(const PublicId& pub, const Hash32& digest) const;

    using SignatureScheme::verify;

private:
    mutable std::mutex mutex_;
    std::map<PublicId, SecretKey> secrets_;
    std::map<Hash32, PublicId> pub_of_secret_;
};

/// H(secret || digest) mod p.
u256 simulated_tag(const SecretKey& secret, const Hash32& digest);

/// Σ tags mod p over the given signatures; no scheme checks.
u256 sum_tags_mod_p(std::span<const Signature> sigs);

}  // namespace aasim
