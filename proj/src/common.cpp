#include <aasim/common.hpp>

#include <algorithm>
#include <cctype>

namespace aasim
{
std::string_view to_string(Errc code) noexcept
{
    switch (code)
    {
    case Errc::DuplicateSeed: return "DuplicateSeed";
    case Errc::UnknownAccount: return "UnknownAccount";
    case Errc::NotExternallyOwned: return "NotExternallyOwned";
    case Errc::BadNonce: return "BadNonce";
    case Errc::InsufficientFunds: return "InsufficientFunds";
    case Errc::IntrinsicGasTooLow: return "IntrinsicGasTooLow";
    case Errc::GasLimitExceedsBlock: return "GasLimitExceedsBlock";
    case Errc::UnknownTarget: return "UnknownTarget";
    case Errc::UnknownProgram: return "UnknownProgram";
    case Errc::AddressCollision: return "AddressCollision";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::ShortAddress: return "ShortAddress";
    case Errc::ZeroGasField: return "ZeroGasField";
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::NoRoute: return "NoRoute";
    case Errc::Duplicate: return "Duplicate";
    case Errc::ArithmeticOverflow: return "ArithmeticOverflow";
    case Errc::InsufficientDeposit: return "InsufficientDeposit";
    case Errc::BadAuth: return "BadAuth";
    case Errc::InvalidBundle: return "InvalidBundle";
    case Errc::InternalInvariantViolation: return "InternalInvariantViolation";
    case Errc::NotWhitelisted: return "NotWhitelisted";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::InsufficientTokenBalance: return "InsufficientTokenBalance";
    case Errc::InsufficientAllowance: return "InsufficientAllowance";
    case Errc::GasLimitExceedsPolicy: return "GasLimitExceedsPolicy";
    case Errc::PaymasterDepositTooLow: return "PaymasterDepositTooLow";
    case Errc::UnknownPaymaster: return "UnknownPaymaster";
    case Errc::DoubleSettle: return "DoubleSettle";
    case Errc::OverCharge: return "OverCharge";
    case Errc::MixedSchemes: return "MixedSchemes";
    case Errc::InvalidPolicy: return "InvalidPolicy";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownActor: return "UnknownActor";
    case Errc::ScriptError: return "ScriptError";
    case Errc::MissingScenario: return "MissingScenario";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
  : std::runtime_error(std::string{to_string(code)} + (detail.empty() ? "" : ": " + detail)),
    code_{code}
{}

namespace
{
int hex_digit(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string_view strip_0x(std::string_view hex)
{
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
        hex.remove_prefix(2);
    return hex;
}
}  // namespace

std::string to_hex(BytesView data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 + data.size() * 2);
    out += "0x";
    for (auto b : data)
    {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    hex = strip_0x(hex);
    if (hex.size() % 2 != 0)
        throw Error{Errc::ParseError, "odd-length hex string"};
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
    {
        const int hi = hex_digit(hex[2 * i]);
        const int lo = hex_digit(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw Error{Errc::ParseError, "invalid hex digit"};
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

Bytes to_be_bytes(const u256& value)
{
    Bytes out(32, 0);
    u256 v = value;
    for (int i = 31; i >= 0 && v != 0; --i)
    {
        out[static_cast<size_t>(i)] = static_cast<uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

u256 from_be_bytes(BytesView data)
{
    u256 v = 0;
    for (auto b : data)
        v = (v << 8) | b;
    return v;
}

Hash32 Hash32::from_hex(std::string_view hex)
{
    const auto raw = aasim::from_hex(hex);
    if (raw.size() != 32)
        throw Error{Errc::ParseError, "expected 32-byte hex value"};
    Hash32 h;
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
}

std::string Hash32::hex() const
{
    return to_hex(view());
}

u256 Hash32::to_word() const
{
    return from_be_bytes(view());
}

Hash32 Hash32::from_word(const u256& word)
{
    Hash32 h;
    const auto raw = to_be_bytes(word);
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
}

Address Address::from_hex(std::string_view hex)
{
    const auto raw = aasim::from_hex(hex);
    if (raw.size() != 20)
        throw Error{Errc::ShortAddress,
            "address must be exactly 20 bytes, got " + std::to_string(raw.size())};
    return from_bytes(raw);
}

Address Address::from_bytes(BytesView raw)
{
    if (raw.size() != 20)
        throw Error{Errc::ShortAddress,
            "address must be exactly 20 bytes, got " + std::to_string(raw.size())};
    Address a;
    std::copy(raw.begin(), raw.end(), a.bytes.begin());
    return a;
}

std::string Address::hex() const
{
    return to_hex(view());
}

u256 Address::to_word() const
{
    return from_be_bytes(view());
}

Address Address::from_word(const u256& word)
{
    const auto raw = to_be_bytes(word);
    Address a;
    std::copy(raw.begin() + 12, raw.end(), a.bytes.begin());
    return a;
}

std::string to_dec(const u256& value)
{
    return value.str();
}

u256 parse_u256(std::string_view text)
{
    if (text.empty())
        throw Error{Errc::ParseError, "empty integer"};
    const auto hex = strip_0x(text);
    if (hex.size() != text.size())
    {
        if (hex.empty() || hex.size() > 64)
            throw Error{Errc::ParseError, "bad hex integer '" + std::string{text} + "'"};
        u256 v = 0;
        for (char c : hex)
        {
            const int d = hex_digit(c);
            if (d < 0)
                throw Error{Errc::ParseError, "bad hex integer '" + std::string{text} + "'"};
            v = (v << 4) | static_cast<unsigned>(d);
        }
        return v;
    }
    u512 v = 0;
    for (char c : text)
    {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw Error{Errc::ParseError, "bad decimal integer '" + std::string{text} + "'"};
        v = v * 10 + static_cast<unsigned>(c - '0');
        if (v > u512{U256_MAX})
            throw Error{Errc::ParseError, "integer exceeds 256 bits"};
    }
    return static_cast<u256>(v);
}

u256 pack_symbol(std::string_view symbol)
{
    if (symbol.size() > 32)
        throw Error{Errc::ParseError, "symbol longer than 32 characters"};
    Bytes raw(32, 0);
    std::copy(symbol.begin(), symbol.end(), raw.begin());
    return from_be_bytes(raw);
}

std::string unpack_symbol(const u256& word)
{
    const auto raw = to_be_bytes(word);
    std::string out;
    for (auto b : raw)
    {
        if (b == 0)
            break;
        out += static_cast<char>(b);
    }
    return out;
}

}  // namespace aasim
