#include <aasim/wallet/policy.hpp>

#include <algorithm>
#include <set>

namespace aasim
{
nlohmann::json SpendingLimitModule::to_json() const
{
    return {{"kind", kind()}, {"cap", to_dec(cap_)}};
}

nlohmann::json TimeWindowModule::to_json() const
{
    return {{"kind", kind()}, {"not_before", not_before_}, {"not_after", not_after_}};
}

bool TargetAllowlistModule::allows(const ModuleInput& in) const
{
    return in.op.target && std::ranges::find(targets_, *in.op.target) != targets_.end();
}

nlohmann::json TargetAllowlistModule::to_json() const
{
    auto targets = nlohmann::json::array();
    for (const auto& t : targets_)
        targets.push_back(t.hex());
    return {{"kind", kind()}, {"targets", targets}};
}

std::shared_ptr<const WalletModule> module_from_json(const nlohmann::json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "spending_limit")
        return std::make_shared<SpendingLimitModule>(parse_u256(j.at("cap").get<std::string>()));
    if (kind == "time_window")
        return std::make_shared<TimeWindowModule>(
            j.at("not_before").get<uint64_t>(), j.at("not_after").get<uint64_t>());
    if (kind == "target_allowlist")
    {
        std::vector<Address> targets;
        for (const auto& t : j.at("targets"))
            targets.push_back(Address::from_hex(t.get<std::string>()));
        return std::make_shared<TargetAllowlistModule>(std::move(targets));
    }
    throw Error{Errc::InvalidPolicy, "unknown module kind '" + kind + "'"};
}

Multisig make_multisig(unsigned threshold, std::vector<PublicId> owners)
{
    Multisig m{threshold, std::move(owners)};
    check_policy(ValidationPolicy{m});
    return m;
}

void check_policy(const ValidationPolicy& policy)
{
    if (const auto* m = std::get_if<Multisig>(&policy))
    {
        if (m->threshold < 1 || m->threshold > m->owners.size())
            throw Error{Errc::InvalidPolicy, "multisig threshold " + std::to_string(m->threshold) +
                                                 " outside [1, " +
                                                 std::to_string(m->owners.size()) + "]"};
        const std::set<PublicId> distinct(m->owners.begin(), m->owners.end());
        if (distinct.size() != m->owners.size())
            throw Error{Errc::InvalidPolicy, "multisig owners must be distinct"};
    }
    else if (const auto* c = std::get_if<Composite>(&policy))
    {
        if (!c->base)
            throw Error{Errc::InvalidPolicy, "composite policy without base"};
        check_policy(*c->base);
        for (const auto& m : c->modules)
            if (!m)
                throw Error{Errc::InvalidPolicy, "null module"};
    }
}

bool validate(const ValidationPolicy& policy, const ModuleInput& in,
    std::span<const Signature> signatures, const SignatureScheme& scheme)
{
    if (const auto* single = std::get_if<SingleKey>(&policy))
    {
        return std::ranges::any_of(signatures, [&](const Signature& s) {
            return s.signer == single->owner && scheme.verify(s, in.digest);
        });
    }
    if (const auto* multi = std::get_if<Multisig>(&policy))
    {
        std::set<PublicId> approved;
        for (const auto& s : signatures)
        {
            if (std::ranges::find(multi->owners, s.signer) == multi->owners.end())
                continue;
            if (scheme.verify(s, in.digest))
                approved.insert(s.signer);
        }
        return approved.size() >= multi->threshold;
    }
    const auto& composite = std::get<Composite>(policy);
    if (!validate(*composite.base, in, signatures, scheme))
        return false;
    return std::ranges::all_of(
        composite.modules, [&](const auto& m) { return m->allows(in); });
}

ValidationPolicy register_module(
    const ValidationPolicy& policy, std::shared_ptr<const WalletModule> module)
{
    if (!module)
        throw Error{Errc::InvalidPolicy, "null module"};
    if (const auto* c = std::get_if<Composite>(&policy))
    {
        Composite next = *c;
        next.modules.push_back(std::move(module));
        return next;
    }
    return Composite{std::make_shared<const ValidationPolicy>(policy), {std::move(module)}};
}

const ValidationPolicy& base_policy(const ValidationPolicy& policy)
{
    if (const auto* c = std::get_if<Composite>(&policy))
        return base_policy(*c->base);
    return policy;
}

std::optional<PublicId> sole_owner(const ValidationPolicy& policy)
{
    const auto& base = base_policy(policy);
    if (const auto* s = std::get_if<SingleKey>(&base))
        return s->owner;
    const auto& m = std::get<Multisig>(base);
    if (m.owners.size() == 1)
        return m.owners.front();
    return std::nullopt;
}

bool is_multisig(const ValidationPolicy& policy)
{
    const auto* m = std::get_if<Multisig>(&base_policy(policy));
    return m && m->owners.size() > 1;
}

nlohmann::json policy_to_json(const ValidationPolicy& policy)
{
    if (const auto* s = std::get_if<SingleKey>(&policy))
        return {{"type", "single_key"}, {"owner", s->owner.hex()}};
    if (const auto* m = std::get_if<Multisig>(&policy))
    {
        auto owners = nlohmann::json::array();
        for (const auto& o : m->owners)
            owners.push_back(o.hex());
        return {{"type", "multisig"}, {"threshold", m->threshold}, {"owners", owners}};
    }
    const auto& c = std::get<Composite>(policy);
    auto modules = nlohmann::json::array();
    for (const auto& m : c.modules)
        modules.push_back(m->to_json());
    return {{"type", "composite"}, {"base", policy_to_json(*c.base)}, {"modules", modules}};
}

ValidationPolicy policy_from_json(const nlohmann::json& j)
{
    const auto type = j.at("type").get<std::string>();
    ValidationPolicy out;
    if (type == "single_key")
        out = SingleKey{PublicId::from_hex(j.at("owner").get<std::string>())};
    else if (type == "multisig")
    {
        Multisig m;
        m.threshold = j.at("threshold").get<unsigned>();
        for (const auto& o : j.at("owners"))
            m.owners.push_back(PublicId::from_hex(o.get<std::string>()));
        out = std::move(m);
    }
    else if (type == "composite")
    {
        Composite c;
        c.base = std::make_shared<const ValidationPolicy>(policy_from_json(j.at("base")));
        for (const auto& m : j.value("modules", nlohmann::json::array()))
            c.modules.push_back(module_from_json(m));
        out = std::move(c);
    }
    else
        throw Error{Errc::InvalidPolicy, "unknown policy type '" + type + "'"};
    check_policy(out);
    return out;
}

void check_recovery_config(const RecoveryConfig& config)
{
    if (config.threshold < 1 || config.threshold > config.guardians.size())
        throw Error{Errc::InvalidPolicy, "recovery threshold outside [1, guardians]"};
    const std::set<PublicId> distinct(config.guardians.begin(), config.guardians.end());
    if (distinct.size() != config.guardians.size())
        throw Error{Errc::InvalidPolicy, "guardians must be distinct"};
}

nlohmann::json recovery_to_json(const RecoveryConfig& config)
{
    auto guardians = nlohmann::json::array();
    for (const auto& g : config.guardians)
        guardians.push_back(g.hex());
    return {{"guardians", guardians}, {"threshold", config.threshold}, {"delay", config.delay}};
}

RecoveryConfig recovery_from_json(const nlohmann::json& j)
{
    RecoveryConfig c;
    for (const auto& g : j.at("guardians"))
        c.guardians.push_back(PublicId::from_hex(g.get<std::string>()));
    c.threshold = j.at("threshold").get<unsigned>();
    c.delay = j.value("delay", uint64_t{0});
    check_recovery_config(c);
    return c;
}

}  // namespace aasim
