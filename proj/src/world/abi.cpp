#include <aasim/hash.hpp>
#include <aasim/world/abi.hpp>

#include <algorithm>

namespace aasim::abi
{
Selector selector_of(std::string_view signature)
{
    const auto h = sha256({reinterpret_cast<const uint8_t*>(signature.data()), signature.size()});
    Selector s;
    std::copy_n(h.bytes.begin(), SELECTOR_SIZE, s.begin());
    return s;
}

std::string_view function_name(std::string_view signature)
{
    const auto open = signature.find('(');
    if (open == std::string_view::npos || open == 0 || signature.back() != ')')
        throw Error{Errc::ParseError, "malformed signature '" + std::string{signature} + "'"};
    return signature.substr(0, open);
}

std::vector<std::string> param_types(std::string_view signature)
{
    const auto name = function_name(signature);
    auto params = signature.substr(name.size() + 1, signature.size() - name.size() - 2);
    std::vector<std::string> out;
    while (!params.empty())
    {
        const auto comma = params.find(',');
        const auto type = params.substr(0, comma);
        if (type != "address" && type != "uint256" && type != "bytes32")
            throw Error{Errc::ParseError, "unsupported parameter type '" + std::string{type} + "'"};
        out.emplace_back(type);
        if (comma == std::string_view::npos)
            break;
        params.remove_prefix(comma + 1);
        if (params.empty())
            throw Error{Errc::ParseError, "trailing comma in '" + std::string{signature} + "'"};
    }
    return out;
}

Bytes encode_call(std::string_view signature, const std::vector<u256>& args)
{
    const auto types = param_types(signature);
    if (types.size() != args.size())
        throw Error{Errc::MalformedInput, std::string{signature} + " expects " +
                                              std::to_string(types.size()) + " arguments"};
    const auto sel = selector_of(signature);
    Bytes out(sel.begin(), sel.end());
    for (const auto& a : args)
    {
        const auto slot = to_be_bytes(a);
        out.insert(out.end(), slot.begin(), slot.end());
    }
    return out;
}

u256 read_slot(BytesView input, size_t index)
{
    std::array<uint8_t, SLOT_SIZE> slot{};
    const size_t begin = SELECTOR_SIZE + index * SLOT_SIZE;
    for (size_t i = 0; i < SLOT_SIZE; ++i)
        if (begin + i < input.size())
            slot[i] = input[begin + i];
    return from_be_bytes(slot);
}

std::optional<Selector> selector(BytesView input)
{
    if (input.size() < SELECTOR_SIZE)
        return std::nullopt;
    Selector s;
    std::copy_n(input.begin(), SELECTOR_SIZE, s.begin());
    return s;
}

}  // namespace aasim::abi
