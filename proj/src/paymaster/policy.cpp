#include <aasim/paymaster/policy.hpp>

namespace aasim
{
void check_policy(const PaymasterPolicy& policy)
{
    if (const auto* t = std::get_if<TokenGasPolicy>(&policy))
    {
        if (t->rate.num == 0 || t->rate.den == 0)
            throw Error{Errc::InvalidPolicy, "token rate must be positive"};
        if (t->token.empty())
            throw Error{Errc::InvalidPolicy, "token id is empty"};
    }
}

u256 token_charge(const Rational& rate, const Wei& cost)
{
    if (rate.num == 0 || rate.den == 0)
        throw Error{Errc::InvalidPolicy, "token rate must be positive"};
    const u512 scaled = u512{cost} * u512{rate.den};
    const u512 charge = (scaled + u512{rate.num} - 1) / u512{rate.num};
    if (charge > u512{U256_MAX})
        throw Error{Errc::ArithmeticOverflow, "token charge exceeds 256 bits"};
    return static_cast<u256>(charge);
}

namespace
{
void put_cap(nlohmann::json& j, const std::optional<uint64_t>& cap)
{
    if (cap)
        j["max_call_gas"] = *cap;
}

std::optional<uint64_t> get_cap(const nlohmann::json& j)
{
    if (!j.contains("max_call_gas"))
        return std::nullopt;
    return j.at("max_call_gas").get<uint64_t>();
}
}  // namespace

nlohmann::json paymaster_policy_to_json(const PaymasterPolicy& policy)
{
    nlohmann::json j;
    if (const auto* s = std::get_if<SponsoredPolicy>(&policy))
    {
        auto whitelist = nlohmann::json::array();
        for (const auto& a : s->whitelist)
            whitelist.push_back(a.hex());
        j = {{"type", "sponsored"}, {"whitelist", whitelist}, {"budget", to_dec(s->budget)}};
        put_cap(j, s->max_call_gas);
        return j;
    }
    const auto& t = std::get<TokenGasPolicy>(policy);
    j = {{"type", "token_gas"},
        {"token", t.token},
        {"rate", {{"num", to_dec(t.rate.num)}, {"den", to_dec(t.rate.den)}}}};
    put_cap(j, t.max_call_gas);
    return j;
}

PaymasterPolicy paymaster_policy_from_json(const nlohmann::json& j)
{
    const auto type = j.at("type").get<std::string>();
    PaymasterPolicy out;
    if (type == "sponsored")
    {
        SponsoredPolicy s;
        for (const auto& a : j.value("whitelist", nlohmann::json::array()))
            s.whitelist.insert(Address::from_hex(a.get<std::string>()));
        s.budget = parse_u256(j.at("budget").get<std::string>());
        s.max_call_gas = get_cap(j);
        out = std::move(s);
    }
    else if (type == "token_gas")
    {
        TokenGasPolicy t;
        t.token = j.at("token").get<std::string>();
        const auto& rate = j.at("rate");
        t.rate = {parse_u256(rate.at("num").get<std::string>()),
            parse_u256(rate.at("den").get<std::string>())};
        t.max_call_gas = get_cap(j);
        out = std::move(t);
    }
    else
        throw Error{Errc::InvalidPolicy, "unknown paymaster policy type '" + type + "'"};
    check_policy(out);
    return out;
}

}  // namespace aasim
