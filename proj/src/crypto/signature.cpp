#include <aasim/crypto/signature.hpp>
#include <aasim/hash.hpp>

#include <algorithm>

namespace aasim
{
PublicId PublicId::from_hex(std::string_view hex)
{
    const auto h = Hash32::from_hex(hex);
    PublicId p;
    p.bytes = h.bytes;
    return p;
}

std::string PublicId::hex() const
{
    return to_hex(view());
}

const u256& field_prime()
{
    static const u256 p = U256_MAX - (u256{1} << 32) - 976;
    return p;
}

u256 simulated_tag(const SecretKey& secret, const Hash32& digest)
{
    const auto h = Encoder{"sim-sig"}.hash(secret.bytes).hash(digest).digest();
    return h.to_word() % field_prime();
}

u256 sum_tags_mod_p(std::span<const Signature> sigs)
{
    const auto& p = field_prime();
    u256 acc = 0;
    for (const auto& s : sigs)
    {
        const u256 t = s.tag.to_word() % p;
        // acc + t may exceed 2^256; compare against the gap to stay in range.
        acc = (t >= p - acc) ? t - (p - acc) : acc + t;
    }
    return acc;
}

AggregateSignature SignatureScheme::aggregate(std::span<const Signature>) const
{
    throw Error{Errc::MixedSchemes, std::string{id()} + " does not support aggregation"};
}

bool SignatureScheme::verify_aggregate(
    std::span<const SignedMessage>, const AggregateSignature&) const
{
    return false;
}

KeyPair SimulatedScheme::keygen(const Hash32& seed)
{
    SecretKey secret{Encoder{"sim-secret"}.hash(seed).digest()};
    const auto pub_hash = Encoder{"sim-pub"}.hash(secret.bytes).digest();
    PublicId pub;
    pub.bytes = pub_hash.bytes;

    std::lock_guard lock{mutex_};
    secrets_.emplace(pub, secret);
    pub_of_secret_.emplace(secret.bytes, pub);
    return {secret, pub};
}

Signature SimulatedScheme::sign(const SecretKey& secret, const Hash32& digest) const
{
    PublicId pub;
    {
        std::lock_guard lock{mutex_};
        const auto it = pub_of_secret_.find(secret.bytes);
        if (it == pub_of_secret_.end())
            throw Error{Errc::UnknownKey, "secret key not registered with " + std::string{ID}};
        pub = it->second;
    }
    return {std::string{ID}, pub, Hash32::from_word(simulated_tag(secret, digest))};
}

std::optional<u256> SimulatedScheme::expected_tag(const PublicId& pub, const Hash32& digest) const
{
    SecretKey secret;
    {
        std::lock_guard lock{mutex_};
        const auto it = secrets_.find(pub);
        if (it == secrets_.end())
            return std::nullopt;
        secret = it->second;
    }
    return simulated_tag(secret, digest);
}

bool SimulatedScheme::verify(const PublicId& pub, const Hash32& digest, const Hash32& tag) const
{
    const auto expected = expected_tag(pub, digest);
    // Non-canonical encodings (tag >= p) are rejected outright.
    return expected && tag.to_word() == *expected;
}

AggregateSignature SimulatedScheme::aggregate(std::span<const Signature> sigs) const
{
    for (const auto& s : sigs)
        if (s.scheme != ID)
            throw Error{Errc::MixedSchemes, "cannot aggregate '" + s.scheme + "' with " +
                                                std::string{ID}};
    return {std::string{ID}, sum_tags_mod_p(sigs), sigs.size()};
}

bool SimulatedScheme::verify_aggregate(
    std::span<const SignedMessage> members, const AggregateSignature& agg) const
{
    if (agg.scheme != ID || agg.count != members.size() || agg.combined >= field_prime())
        return false;
    const auto& p = field_prime();
    u256 acc = 0;
    for (const auto& m : members)
    {
        const auto t = expected_tag(m.signer, m.digest);
        if (!t)
            return false;
        acc = (*t >= p - acc) ? *t - (p - acc) : acc + *t;
    }
    return acc == agg.combined;
}

}  // namespace aasim
