// Core value types shared by every simulator module.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace aasim
{
/// 256-bit unsigned word. Arithmetic wraps modulo 2^256.
using u256 = boost::multiprecision::uint256_t;
using u512 = boost::multiprecision::uint512_t;

/// Amount of native currency in wei.
using Wei = u256;

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

inline const u256 U256_MAX = ~u256{0};

enum class Errc
{
    DuplicateSeed,
    UnknownAccount,
    NotExternallyOwned,
    BadNonce,
    InsufficientFunds,
    IntrinsicGasTooLow,
    GasLimitExceedsBlock,
    UnknownTarget,
    UnknownProgram,
    AddressCollision,
    UnknownKey,
    ShortAddress,
    ZeroGasField,
    MalformedInput,
    NoRoute,
    Duplicate,
    ArithmeticOverflow,
    InsufficientDeposit,
    BadAuth,
    InvalidBundle,
    InternalInvariantViolation,
    NotWhitelisted,
    BudgetExhausted,
    InsufficientTokenBalance,
    InsufficientAllowance,
    GasLimitExceedsPolicy,
    PaymasterDepositTooLow,
    UnknownPaymaster,
    DoubleSettle,
    OverCharge,
    MixedSchemes,
    InvalidPolicy,
    ParseError,
    UnknownActor,
    ScriptError,
    MissingScenario,
};

std::string_view to_string(Errc code) noexcept;

/// Error raised by simulator operations. `code()` identifies the failure class.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& detail);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

template <size_t N>
struct FixedBytes
{
    std::array<uint8_t, N> bytes{};

    static constexpr size_t size = N;

    auto operator<=>(const FixedBytes&) const = default;

    BytesView view() const noexcept { return {bytes.data(), N}; }
    bool is_zero() const noexcept
    {
        for (auto b : bytes)
            if (b != 0)
                return false;
        return true;
    }
};

struct Hash32 : FixedBytes<32>
{
    /// Parses exactly 64 hex digits, with or without 0x prefix.
    static Hash32 from_hex(std::string_view hex);
    std::string hex() const;

    /// Big-endian integer value.
    u256 to_word() const;
    static Hash32 from_word(const u256& word);
};

/// 20-byte account identifier.
struct Address : FixedBytes<20>
{
    /// Parses exactly 40 hex digits. Shorter or longer input raises ShortAddress.
    static Address from_hex(std::string_view hex);
    static Address from_bytes(BytesView raw);
    std::string hex() const;

    /// Address occupying the low 20 bytes of an ABI word.
    u256 to_word() const;
    static Address from_word(const u256& word);
};

std::string to_hex(BytesView data);
Bytes from_hex(std::string_view hex);

Bytes to_be_bytes(const u256& value);
u256 from_be_bytes(BytesView data);

std::string to_dec(const u256& value);
/// Parses a non-negative decimal or 0x-prefixed hex integer that fits 256 bits.
u256 parse_u256(std::string_view text);

/// Packs a short ASCII identifier (≤ 32 chars) into a word, left-aligned.
u256 pack_symbol(std::string_view symbol);
std::string unpack_symbol(const u256& word);

}  // namespace aasim

template <>
struct std::hash<aasim::Address>
{
    size_t operator()(const aasim::Address& a) const noexcept
    {
        size_t h = 0;
        for (auto b : a.bytes)
            h = h * 131 + b;
        return h;
    }
};
