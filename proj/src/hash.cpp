#include <aasim/hash.hpp>

#include <openssl/evp.h>

namespace aasim
{
Hash32 sha256(BytesView data)
{
    Hash32 out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != 32)
        throw Error{Errc::InternalInvariantViolation, "sha256 failed"};
    return out;
}

Encoder::Encoder(std::string_view domain)
{
    str(domain);
}

Encoder& Encoder::bytes(BytesView data)
{
    u64(data.size());
    buf_.insert(buf_.end(), data.begin(), data.end());
    return *this;
}

Encoder& Encoder::str(std::string_view s)
{
    return bytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
}

Encoder& Encoder::word(const u256& v)
{
    return bytes(to_be_bytes(v));
}

Encoder& Encoder::u64(uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<uint8_t>(v >> shift));
    return *this;
}

Encoder& Encoder::flag(bool v)
{
    buf_.push_back(v ? 1 : 0);
    return *this;
}

}  // namespace aasim
