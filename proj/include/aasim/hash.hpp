#pragma once

#include "common.hpp"

namespace aasim
{
Hash32 sha256(BytesView data);

/// Canonical length-prefixed encoder used for every digest in the simulator.
/// Each field is written as an 8-byte big-endian length followed by its bytes,
/// so distinct field sequences never produce the same encoding.
class Encoder
{
public:
    explicit Encoder(std::string_view domain);

    Encoder& bytes(BytesView data);
    Encoder& str(std::string_view s);
    Encoder& word(const u256& v);
    Encoder& u64(uint64_t v);
    Encoder& flag(bool v);
    Encoder& address(const Address& a) { return bytes(a.view()); }
    Encoder& hash(const Hash32& h) { return bytes(h.view()); }

    const Bytes& encoded() const noexcept { return buf_; }
    Hash32 digest() const { return sha256(buf_); }

private:
    Bytes buf_;
};

}  // namespace aasim
