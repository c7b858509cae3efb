// Call-input encoding: a 4-byte selector followed by 32-byte argument slots.
#pragma once

#include <aasim/common.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aasim::abi
{
using Selector = std::array<uint8_t, 4>;

inline constexpr size_t SELECTOR_SIZE = 4;
inline constexpr size_t SLOT_SIZE = 32;

/// First four bytes of sha256(signature), e.g. signature = "transfer(address,uint256)".
Selector selector_of(std::string_view signature);

/// Parameter type names of a signature. Throws ParseError on malformed text.
std::vector<std::string> param_types(std::string_view signature);

/// Function name part of a signature.
std::string_view function_name(std::string_view signature);

Bytes encode_call(std::string_view signature, const std::vector<u256>& args);

/// Loads argument slot `index` the way the EVM loads calldata: bytes past the
/// end of input read as zero.
u256 read_slot(BytesView input, size_t index);

std::optional<Selector> selector(BytesView input);

}  // namespace aasim::abi
