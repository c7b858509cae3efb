#include <aasim/io/codec.hpp>

namespace aasim::io
{
namespace
{
std::string at_path(const std::string& where, const std::string& key)
{
    return where.empty() ? key : where + "." + key;
}
}  // namespace

const nlohmann::json& require(const nlohmann::json& j, const std::string& key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw Error{Errc::ParseError, "missing field '" + at_path(where, key) + "'"};
    return j.at(key);
}

u256 amount(const nlohmann::json& j, const std::string& key, const std::string& where)
{
    const auto& v = require(j, key, where);
    return parse_field(v, at_path(where, key), [](const nlohmann::json& x) {
        if (x.is_number_unsigned())
            return u256{x.get<uint64_t>()};
        return parse_u256(x.get<std::string>());
    });
}

nlohmann::json to_json(const Signature& s)
{
    return {{"scheme", s.scheme}, {"signer", s.signer.hex()}, {"tag", s.tag.hex()}};
}

Signature signature_from_json(const nlohmann::json& j)
{
    return parse_field(j, "signature", [](const nlohmann::json& x) {
        return Signature{x.at("scheme").get<std::string>(),
            PublicId::from_hex(x.at("signer").get<std::string>()),
            Hash32::from_hex(x.at("tag").get<std::string>())};
    });
}

nlohmann::json to_json(const AggregateSignature& a)
{
    return {{"scheme", a.scheme}, {"combined", to_dec(a.combined)}, {"count", a.count}};
}

AggregateSignature aggregate_from_json(const nlohmann::json& j)
{
    return parse_field(j, "aggregate", [](const nlohmann::json& x) {
        return AggregateSignature{x.at("scheme").get<std::string>(),
            parse_u256(x.at("combined").get<std::string>()), x.at("count").get<size_t>()};
    });
}

nlohmann::json to_json(const UserOperation& op)
{
    nlohmann::json j;
    j["sender"] = op.sender.hex();
    j["nonce"] = op.nonce;
    if (op.init_code)
        j["init_code"] = {{"program", op.init_code->program}, {"owner", op.init_code->owner.hex()},
            {"salt", op.init_code->salt.hex()}};
    else
        j["init_code"] = nullptr;

    if (const auto* call = std::get_if<CallData>(&op.payload))
        j["payload"] = {{"call", {{"target", call->target.hex()}, {"value", to_dec(call->value)},
                                     {"input", to_hex(call->input)},
                                     {"input_length", call->input_length}}}};
    else
    {
        const auto& intent = std::get<Intent>(op.payload);
        j["payload"] = {{"intent", {{"give_asset", intent.give_asset},
                                       {"give_amount", to_dec(intent.give_amount)},
                                       {"want_asset", intent.want_asset},
                                       {"objective", "MaximizeOutput"}}}};
    }

    j["call_gas_limit"] = op.call_gas_limit;
    j["verification_gas_limit"] = op.verification_gas_limit;
    j["pre_verification_gas"] = op.pre_verification_gas;
    j["max_fee_per_gas"] = to_dec(op.max_fee_per_gas);
    if (op.paymaster_and_data)
        j["paymaster_and_data"] = {{"paymaster", op.paymaster_and_data->paymaster.hex()},
            {"data", to_hex(op.paymaster_and_data->data)}};
    else
        j["paymaster_and_data"] = nullptr;
    j["aggregator"] = op.aggregator ? nlohmann::json(op.aggregator->hex()) : nlohmann::json(nullptr);
    auto sigs = nlohmann::json::array();
    for (const auto& s : op.signatures)
        sigs.push_back(to_json(s));
    j["signatures"] = sigs;
    return j;
}

namespace
{
template <class T>
T read(const nlohmann::json& j, const std::string& key, const std::string& where = {})
{
    return parse_field(require(j, key, where), at_path(where, key),
        [](const nlohmann::json& x) { return x.get<T>(); });
}

Address read_address(const nlohmann::json& j, const std::string& key, const std::string& where = {})
{
    const auto text = read<std::string>(j, key, where);
    return parse_field(j, at_path(where, key), [&](const nlohmann::json&) {
        return Address::from_hex(text);
    });
}

bool present(const nlohmann::json& j, const std::string& key)
{
    return j.contains(key) && !j.at(key).is_null();
}
}  // namespace

UserOperation user_op_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error{Errc::ParseError, "user operation must be an object"};
    UserOperation op;
    op.sender = read_address(j, "sender");
    op.nonce = read<uint64_t>(j, "nonce");

    if (present(j, "init_code"))
    {
        const auto& ic = j.at("init_code");
        InitCode init;
        init.program = read<std::string>(ic, "program", "init_code");
        init.owner = parse_field(ic, "init_code.owner", [](const nlohmann::json& x) {
            return PublicId::from_hex(x.at("owner").get<std::string>());
        });
        init.salt = parse_field(ic, "init_code.salt", [](const nlohmann::json& x) {
            return Hash32::from_hex(x.at("salt").get<std::string>());
        });
        op.init_code = init;
    }

    const auto& payload = require(j, "payload");
    if (payload.contains("call"))
    {
        const auto& c = payload.at("call");
        CallData call;
        call.target = read_address(c, "target", "payload.call");
        call.value = amount(c, "value", "payload.call");
        call.input = parse_field(c, "payload.call.input", [](const nlohmann::json& x) {
            return from_hex(x.value("input", std::string{"0x"}));
        });
        call.input_length = c.contains("input_length")
                                ? read<uint64_t>(c, "input_length", "payload.call")
                                : call.input.size();
        op.payload = std::move(call);
    }
    else if (payload.contains("intent"))
    {
        const auto& in = payload.at("intent");
        Intent intent;
        intent.give_asset = read<std::string>(in, "give_asset", "payload.intent");
        intent.give_amount = amount(in, "give_amount", "payload.intent");
        intent.want_asset = read<std::string>(in, "want_asset", "payload.intent");
        if (in.value("objective", std::string{"MaximizeOutput"}) != "MaximizeOutput")
            throw Error{Errc::ParseError, "payload.intent.objective: unsupported objective"};
        op.payload = std::move(intent);
    }
    else
        throw Error{Errc::ParseError, "payload: expected 'call' or 'intent'"};

    op.call_gas_limit = read<uint64_t>(j, "call_gas_limit");
    op.verification_gas_limit = read<uint64_t>(j, "verification_gas_limit");
    op.pre_verification_gas = read<uint64_t>(j, "pre_verification_gas");
    op.max_fee_per_gas = amount(j, "max_fee_per_gas");

    if (present(j, "paymaster_and_data"))
    {
        const auto& p = j.at("paymaster_and_data");
        PaymasterAndData pm;
        pm.paymaster = read_address(p, "paymaster", "paymaster_and_data");
        pm.data = parse_field(p, "paymaster_and_data.data", [](const nlohmann::json& x) {
            return from_hex(x.value("data", std::string{"0x"}));
        });
        op.paymaster_and_data = std::move(pm);
    }
    if (present(j, "aggregator"))
        op.aggregator = read_address(j, "aggregator");
    if (j.contains("signatures"))
        for (const auto& s : j.at("signatures"))
            op.signatures.push_back(signature_from_json(s));
    return op;
}

}  // namespace aasim::io
