#include <aasim/hash.hpp>
#include <aasim/userop/user_operation.hpp>
#include <aasim/world/abi.hpp>
#include <aasim/world/program.hpp>

#include <algorithm>

namespace aasim
{
CallData make_call(const Address& target, const Wei& value, Bytes input)
{
    const auto len = input.size();
    return {target, value, std::move(input), len};
}

Address counterfactual_address(const InitCode& init)
{
    const auto h = Encoder{"counterfactual"}
                       .str(init.program)
                       .bytes(init.owner.view())
                       .hash(init.salt)
                       .digest();
    return Address::from_bytes(BytesView{h.bytes}.subspan(12));
}

Hash32 digest_user_op(const UserOperation& op, const Address& entrypoint, uint64_t chain_id)
{
    Encoder enc{"user-operation"};
    enc.address(op.sender).u64(op.nonce);

    enc.flag(op.init_code.has_value());
    if (op.init_code)
        enc.str(op.init_code->program).bytes(op.init_code->owner.view()).hash(op.init_code->salt);

    if (const auto* call = std::get_if<CallData>(&op.payload))
    {
        enc.u64(0).address(call->target).word(call->value).bytes(call->input);
        enc.u64(call->input_length);
    }
    else
    {
        const auto& intent = std::get<Intent>(op.payload);
        enc.u64(1).str(intent.give_asset).word(intent.give_amount).str(intent.want_asset);
        enc.u64(static_cast<uint64_t>(intent.objective));
    }

    enc.u64(op.call_gas_limit).u64(op.verification_gas_limit).u64(op.pre_verification_gas);
    enc.word(op.max_fee_per_gas);

    enc.flag(op.paymaster_and_data.has_value());
    if (op.paymaster_and_data)
        enc.address(op.paymaster_and_data->paymaster).bytes(op.paymaster_and_data->data);
    enc.flag(op.aggregator.has_value());
    if (op.aggregator)
        enc.address(*op.aggregator);

    enc.address(entrypoint).u64(chain_id);
    return enc.digest();
}

UserOperation sign_user_op(UserOperation op, const SecretKey& secret,
    const SignatureScheme& scheme, const Address& entrypoint, uint64_t chain_id)
{
    op.signatures.push_back(scheme.sign(secret, digest_user_op(op, entrypoint, chain_id)));
    return op;
}

std::string_view to_string(ValidationError e) noexcept
{
    switch (e)
    {
    case ValidationError::ShortAddress: return "ShortAddress";
    case ValidationError::ZeroGasField: return "ZeroGasField";
    case ValidationError::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

namespace
{
std::optional<ValidationError> check_input(const CallData& call, const ProgramRegistry* programs)
{
    const auto& input = call.input;
    if (call.input_length != input.size())
        return ValidationError::MalformedInput;
    if (input.empty())
        return std::nullopt;
    const auto sel = abi::selector(input);
    if (!sel)
        return ValidationError::MalformedInput;

    const std::string* signature = programs ? programs->signature_of(*sel) : nullptr;
    if (!signature)
    {
        if ((input.size() - abi::SELECTOR_SIZE) % abi::SLOT_SIZE != 0)
            return ValidationError::MalformedInput;
        return std::nullopt;
    }

    const auto types = abi::param_types(*signature);
    const size_t expected = abi::SELECTOR_SIZE + types.size() * abi::SLOT_SIZE;
    const bool has_address = std::ranges::find(types, "address") != types.end();
    if (input.size() < expected)
        return has_address ? ValidationError::ShortAddress : ValidationError::MalformedInput;
    if (input.size() > expected)
        return ValidationError::MalformedInput;

    for (size_t i = 0; i < types.size(); ++i)
    {
        if (types[i] != "address")
            continue;
        const auto begin = input.begin() + static_cast<std::ptrdiff_t>(
                                               abi::SELECTOR_SIZE + i * abi::SLOT_SIZE);
        // An address occupies exactly the low 20 bytes of its slot.
        if (!std::all_of(begin, begin + 12, [](uint8_t b) { return b == 0; }))
            return ValidationError::ShortAddress;
    }
    return std::nullopt;
}
}  // namespace

std::optional<ValidationError> static_validate(
    const UserOperation& op, const ProgramRegistry* programs)
{
    if (op.call_gas_limit == 0 || op.verification_gas_limit == 0 ||
        op.pre_verification_gas == 0 || op.max_fee_per_gas == 0)
        return ValidationError::ZeroGasField;

    if (const auto* call = std::get_if<CallData>(&op.payload))
        return check_input(*call, programs);

    const auto& intent = std::get<Intent>(op.payload);
    if (intent.give_amount == 0 || intent.give_asset.empty() || intent.want_asset.empty() ||
        intent.give_asset == intent.want_asset)
        return ValidationError::MalformedInput;
    return std::nullopt;
}

Bytes encode_short_address_call(
    std::string_view signature, const std::vector<u256>& args, size_t address_arg)
{
    auto input = abi::encode_call(signature, args);
    const size_t last = abi::SELECTOR_SIZE + address_arg * abi::SLOT_SIZE + abi::SLOT_SIZE - 1;
    if (last >= input.size())
        throw Error{Errc::MalformedInput, "address argument index out of range"};
    input.erase(input.begin() + static_cast<std::ptrdiff_t>(last));
    return input;
}

}  // namespace aasim
