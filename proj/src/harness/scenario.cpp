#include <aasim/bundler/bundler.hpp>
#include <aasim/entrypoint/entrypoint.hpp>
#include <aasim/harness/scenario.hpp>
#include <aasim/hash.hpp>
#include <aasim/io/codec.hpp>
#include <aasim/io/genesis.hpp>
#include <aasim/programs/builtin.hpp>
#include <aasim/world/legacy.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace aasim
{
std::string_view to_string(Mode m) noexcept
{
    return m == Mode::Legacy ? "legacy" : "aa";
}

ModeSelection parse_mode_selection(std::string_view text)
{
    if (text == "legacy")
        return ModeSelection::Legacy;
    if (text == "aa")
        return ModeSelection::AA;
    if (text == "both")
        return ModeSelection::Both;
    throw Error{Errc::ParseError, "mode must be legacy, aa or both"};
}

namespace
{
using nlohmann::json;
using SignedInt = boost::multiprecision::cpp_int;

const char* const MODE_KEYS[] = {"legacy", "aa"};

/// Keys whose string values are actor names.
const std::set<std::string> NAME_FIELDS = {"from", "to", "sender", "paymaster", "aggregator",
    "beneficiary", "account", "owner", "proposer", "holder", "spender"};
const std::set<std::string> NAME_LIST_FIELDS = {"signers", "owners", "guardians", "of"};

bool is_ref(const std::string& s)
{
    return s.size() > 1 && (s[0] == '@' || s[0] == '#');
}

/// Collects every actor name a JSON fragment refers to.
void collect_names(const json& j, std::set<std::string>& out, const std::string& key = {})
{
    if (j.is_string())
    {
        const auto s = j.get<std::string>();
        if (is_ref(s))
            out.insert(s.substr(1));
        else if (NAME_FIELDS.contains(key))
            out.insert(s);
    }
    else if (j.is_array())
    {
        for (const auto& v : j)
        {
            if (NAME_LIST_FIELDS.contains(key) && v.is_string())
                out.insert(v.get<std::string>());
            else
                collect_names(v, out);
        }
    }
    else if (j.is_object())
    {
        for (const auto& [k, v] : j.items())
        {
            if (is_ref(k))
                out.insert(k.substr(1));
            collect_names(v, out, k);
        }
    }
}

void collect_programs(const json& accounts, const std::string& where,
    const ProgramRegistry& programs)
{
    if (!accounts.is_object())
        return;
    for (const auto& [name, spec] : accounts.items())
    {
        if (!spec.is_object() || !spec.contains("program"))
            continue;
        const auto program = spec.at("program").get<std::string>();
        if (!programs.find(program))
            throw Error{Errc::UnknownProgram, where + "." + name + ".program: " + program};
    }
}

json merged_accounts(const json& genesis, Mode mode)
{
    json accounts = genesis.value("accounts", json::object());
    const auto key = MODE_KEYS[mode == Mode::Legacy ? 0 : 1];
    if (genesis.contains("modes") && genesis.at("modes").contains(key))
        accounts.merge_patch(genesis.at("modes").at(key).value("accounts", json::object()));
    return accounts;
}
}  // namespace

Scenario parse_scenario(const json& j, const ProgramRegistry& programs)
{
    if (!j.is_object())
        throw Error{Errc::ParseError, "scenario must be an object"};
    Scenario s;
    const auto str = [&](const char* key) {
        return io::parse_field(io::require(j, key), key,
            [](const json& x) { return x.get<std::string>(); });
    };
    s.name = str("name");
    s.table2_row = str("table2_row");
    s.description = j.value("description", std::string{});
    s.actors = io::require(j, "actors");
    s.genesis = io::require(j, "genesis");
    s.steps = io::require(j, "steps");
    s.success_predicate = io::require(j, "success_predicate");
    const auto& expected = io::require(j, "expected");
    s.expected.legacy = io::parse_field(io::require(expected, "legacy", "expected"),
        "expected.legacy", [](const json& x) { return x.get<bool>(); });
    s.expected.aa = io::parse_field(io::require(expected, "aa", "expected"), "expected.aa",
        [](const json& x) { return x.get<bool>(); });
    if (expected.contains("mitigated_by") && !expected.at("mitigated_by").is_null())
        s.expected.mitigated_by = expected.at("mitigated_by").get<std::string>();

    if (!s.actors.is_object())
        throw Error{Errc::ParseError, "actors: expected object"};
    if (!s.steps.is_array())
        throw Error{Errc::ParseError, "steps: expected array"};
    if (!s.genesis.is_object())
        throw Error{Errc::ParseError, "genesis: expected object"};

    collect_programs(s.genesis.value("accounts", json::object()), "genesis.accounts", programs);
    if (s.genesis.contains("modes"))
        for (const auto* key : MODE_KEYS)
            if (s.genesis.at("modes").contains(key))
                collect_programs(s.genesis.at("modes").at(key).value("accounts", json::object()),
                    std::string{"genesis.modes."} + key + ".accounts", programs);

    std::set<std::string> names;
    collect_names(s.genesis, names);
    for (const auto mode : {Mode::Legacy, Mode::AA})
    {
        const auto accounts = merged_accounts(s.genesis, mode);
        for (const auto& [name, _] : accounts.items())
            names.insert(name);
    }
    collect_names(s.steps, names);
    collect_names(s.success_predicate, names);
    for (const auto& name : names)
        if (!s.actors.contains(name))
            throw Error{Errc::UnknownActor, name};
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, const ProgramRegistry& programs)
{
    try
    {
        return parse_scenario(read_json_file(path), programs);
    }
    catch (const Error& e)
    {
        throw Error{e.code(), path.filename().string() + ": " + e.what()};
    }
}

Scenario load_scenario(const std::filesystem::path& path)
{
    return load_scenario(path, *builtin_registry());
}

namespace
{
struct Actor
{
    Hash32 key_seed;
    KeyPair keys;
    Address address;
};

bool ends_with_hex(const Address& a, const std::string& suffix)
{
    const auto hex = a.hex();
    return hex.size() >= suffix.size() && hex.compare(hex.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string fmt_amount(const u256& v)
{
    return to_dec(v);
}

class Runner
{
public:
    Runner(const Scenario& s, uint64_t seed, Mode mode)
      : s_{s},
        seed_{seed},
        mode_{mode},
        scheme_{std::make_shared<SimulatedScheme>()},
        world_{builtin_registry(), scheme_},
        initial_{builtin_registry(), scheme_},
        pool_{builtin_registry()}
    {
        accounts_ = merged_accounts(s.genesis, mode);
        make_actors();
        world_ = load_genesis(build_genesis(), builtin_registry(), scheme_);
        initial_ = world_;
    }

    ModeRun run()
    {
        ModeRun out;
        out.mode = mode_;
        for (size_t i = 0; i < s_.steps.size(); ++i)
        {
            const auto& step = s_.steps[i];
            if (step.contains("mode") && step.at("mode").get<std::string>() != to_string(mode_))
                continue;
            step_index_ = i;
            apply(step);
            world_.commit();
        }
        out.exploit_succeeded = eval(s_.success_predicate);
        out.trace = std::move(trace_);
        return out;
    }

private:
    // Actors and genesis

    void make_actors()
    {
        for (const auto& [name, spec] : s_.actors.items())
        {
            const auto suffix = spec.is_object() ? spec.value("address_suffix", std::string{}) : "";
            Actor a;
            for (uint64_t counter = 0;; ++counter)
            {
                a.key_seed =
                    Encoder{"scenario-actor"}.str(name).u64(seed_).u64(counter).digest();
                a.keys = scheme_->keygen(a.key_seed);
                if (suffix.empty() || ends_with_hex(eoa_address(a.keys.pub), suffix))
                    break;
            }
            a.address = eoa_address(a.keys.pub);
            actors_.emplace(name, a);
        }
        // Account addresses depend on other actors' keys, so assign them second.
        for (const auto& [name, spec] : accounts_.items())
        {
            if (spec.is_null())
                continue;
            const auto kind = spec.value("kind", std::string{"eoa"});
            auto& a = actors_.at(name);
            if (kind == "contract" || kind == "paymaster" || kind == "aggregator")
            {
                const auto h = Encoder{"genesis-contract"}.str(name).digest();
                a.address = Address::from_bytes(h.view().subspan(12));
            }
            else if (kind == "smart_account")
                a.address = counterfactual_address(init_code_of(name, spec));
        }
    }

    InitCode init_code_of(const std::string& name, const json& spec) const
    {
        const auto owners = spec.value("owners", json::array());
        if (owners.empty())
            throw Error{Errc::ParseError, "smart account '" + name + "' has no owners"};
        return {spec.value("program", std::string{"smart_wallet"}),
            actor(owners[0].get<std::string>()).keys.pub,
            Encoder{"smart-account-salt"}.str(name).digest()};
    }

    const Actor& actor(const std::string& name) const
    {
        const auto it = actors_.find(name);
        if (it == actors_.end())
            throw Error{Errc::UnknownActor, name};
        return it->second;
    }

    json resolve(const json& j) const
    {
        if (j.is_string())
        {
            const auto s = j.get<std::string>();
            if (s.size() > 1 && s[0] == '@')
                return actor(s.substr(1)).address.hex();
            if (s.size() > 1 && s[0] == '#')
                return actor(s.substr(1)).keys.pub.hex();
            return j;
        }
        if (j.is_array())
        {
            json out = json::array();
            for (const auto& v : j)
                out.push_back(resolve(v));
            return out;
        }
        if (j.is_object())
        {
            // Storage maps are keyed by references too.
            json out = json::object();
            for (const auto& [k, v] : j.items())
                out[resolve(json(k)).get<std::string>()] = resolve(v);
            return out;
        }
        return j;
    }

    json pubs(const json& names) const
    {
        auto out = json::array();
        for (const auto& n : names)
            out.push_back(actor(n.get<std::string>()).keys.pub.hex());
        return out;
    }

    json build_genesis() const
    {
        json g;
        auto block = resolve(s_.genesis.value("block", json::object()));
        if (block.contains("proposer"))
            block["proposer"] = actor(block.at("proposer").get<std::string>()).address.hex();
        g["block"] = block;
        if (s_.genesis.contains("clock"))
            g["clock"] = s_.genesis.at("clock");

        auto accounts = json::array();
        for (const auto& [name, raw] : accounts_.items())
        {
            if (raw.is_null())
                continue;
            const auto spec = resolve(raw);
            const auto kind = spec.value("kind", std::string{"eoa"});
            const auto& a = actor(name);
            json acc;
            acc["balance"] = spec.value("balance", std::string{"0"});
            if (kind == "eoa")
            {
                acc["seed"] = a.key_seed.hex();
                acc["kind"] = "eoa";
                accounts.push_back(acc);
                continue;
            }
            acc["address"] = a.address.hex();
            acc["kind"] = "contract";
            acc["storage"] = spec.value("storage", json::object());
            if (spec.contains("deposit"))
                acc["deposit"] = spec.at("deposit");
            if (kind == "contract")
                acc["program"] = io::require(spec, "program", "genesis.accounts." + name);
            else if (kind == "smart_account")
            {
                acc["program"] = spec.value("program", std::string{"smart_wallet"});
                const auto owners = raw.value("owners", json::array());
                const auto threshold = spec.value("threshold", 1u);
                json policy;
                if (owners.size() == 1 && threshold == 1)
                    policy = {{"type", "single_key"}, {"owner", pubs(owners)[0]}};
                else
                    policy = {{"type", "multisig"}, {"threshold", threshold}, {"owners", pubs(owners)}};
                if (spec.contains("modules"))
                    policy = {{"type", "composite"}, {"base", policy}, {"modules", spec.at("modules")}};
                acc["wallet"] = {{"policy", policy}};
                if (raw.contains("recovery"))
                {
                    auto rec = spec.at("recovery");
                    rec["guardians"] = pubs(raw.at("recovery").at("guardians"));
                    acc["wallet"]["recovery"] = rec;
                }
            }
            else if (kind == "paymaster")
            {
                acc["program"] = "paymaster";
                const auto owner = raw.value("owner", name);
                acc["paymaster"] = {{"policy", io::require(spec, "policy", "genesis.accounts." + name)},
                    {"owner", actor(owner).keys.pub.hex()}};
            }
            else if (kind == "aggregator")
            {
                acc["program"] = "aggregator";
                acc["aggregator"] = true;
            }
            else
                throw Error{Errc::ParseError, "genesis.accounts." + name + ".kind: unknown '" + kind + "'"};
            accounts.push_back(acc);
        }
        g["accounts"] = accounts;
        g["tokens"] = resolve(s_.genesis.value("tokens", json::array()));
        g["allowances"] = resolve(s_.genesis.value("allowances", json::array()));
        return g;
    }

    // Steps

    [[noreturn]] void script_error(const std::string& what) const
    {
        throw Error{Errc::ScriptError,
            "step " + std::to_string(step_index_) + " (" + std::string{to_string(mode_)} + "): " + what};
    }

    void log(const std::string& line) { trace_.push_back(line); }

    void apply(const json& step)
    {
        const auto kind = io::parse_field(io::require(step, "do", "steps"), "steps.do",
            [](const json& x) { return x.get<std::string>(); });
        const bool aa_only = kind == "user_op" || kind == "replay_user_op" || kind == "bundle";
        if (aa_only && mode_ == Mode::Legacy)
            script_error(kind + " has no legacy meaning");

        if (kind == "set_block")
            set_block(step);
        else if (kind == "advance_time")
        {
            const auto dt = step.at("by").get<uint64_t>();
            world_.advance_time(dt);
            log("advance_time +" + std::to_string(dt) + " -> clock " + std::to_string(world_.clock()));
        }
        else if (kind == "legacy_tx")
            legacy_tx(step);
        else if (kind == "mine")
            mine(step);
        else if (kind == "user_op")
            user_op(step);
        else if (kind == "replay_user_op")
            replay(step);
        else if (kind == "bundle")
            bundle(step);
        else
            script_error("unknown step '" + kind + "'");
    }

    void set_block(const json& step)
    {
        auto b = world_.block();
        if (step.contains("timestamp"))
            b.timestamp = step.at("timestamp").get<uint64_t>();
        if (step.contains("seed"))
            b.seed = parse_u256(step.at("seed").get<std::string>());
        if (step.contains("number"))
            b.number = step.at("number").get<uint64_t>();
        if (step.contains("proposer"))
            b.proposer = actor(step.at("proposer").get<std::string>()).address;
        world_.set_block(b);
        log("set_block number=" + std::to_string(b.number) + " timestamp=" +
            std::to_string(b.timestamp) + " seed=" + to_dec(b.seed));
    }

    u256 arg_value(const json& a) const
    {
        if (a.is_number_unsigned())
            return a.get<uint64_t>();
        if (a.is_object() && a.contains("payment_sig"))
        {
            const auto& p = a.at("payment_sig");
            const auto& signer = actor(p.at("signer").get<std::string>());
            const auto to = Address::from_word(arg_value(p.at("to")));
            const auto amount = arg_value(p.at("amount"));
            return scheme_->sign(signer.keys.secret, payment_digest(to, amount)).tag.to_word();
        }
        const auto s = a.get<std::string>();
        if (s.size() > 1 && s[0] == '@')
            return actor(s.substr(1)).address.to_word();
        if (s.size() > 1 && s[0] == '#')
            return Hash32{actor(s.substr(1)).keys.pub}.to_word();
        if (s.size() > 1 && s[0] == '$')
            return pack_symbol(s.substr(1));
        return parse_u256(s);
    }

    Bytes call_input(const json& step) const
    {
        if (!step.contains("function"))
            return {};
        const auto sig = step.at("function").get<std::string>();
        std::vector<u256> args;
        for (const auto& a : step.value("args", json::array()))
            args.push_back(arg_value(a));
        if (step.contains("short_address_arg"))
            return encode_short_address_call(sig, args, step.at("short_address_arg").get<size_t>());
        return abi::encode_call(sig, args);
    }

    Address target_of(const json& step) const
    {
        return actor(io::require(step, "to", "step").get<std::string>()).address;
    }

    Wei amount_or(const json& step, const char* key, uint64_t fallback) const
    {
        return step.contains(key) ? arg_value(step.at(key)) : Wei{fallback};
    }

    struct Queued
    {
        std::string tag;
        LegacyTransaction tx;
    };

    void legacy_tx(const json& step)
    {
        const auto from = step.at("from").get<std::string>();
        const auto origin = actor(from).address;
        if (!world_.exists(origin))
            script_error("legacy sender '" + from + "' has no account");

        LegacyTransaction tx;
        tx.origin = origin;
        tx.kind = MessageCall{target_of(step), amount_or(step, "value", 0), call_input(step)};
        tx.gas_limit = step.value("gas_limit", uint64_t{100'000});
        tx.gas_price = amount_or(step, "gas_price", 1);
        uint64_t queued = 0;
        for (const auto& q : queue_)
            queued += q.tx.origin == origin;
        tx.nonce = world_.account(origin).nonce + queued;
        const auto tag = step.value("tag", from);

        if (step.value("queue", false))
        {
            queue_.push_back({tag, std::move(tx)});
            log("legacy_tx[" + tag + "] queued");
        }
        else
            execute_legacy(tag, tx);
    }

    void execute_legacy(const std::string& tag, const LegacyTransaction& tx)
    {
        try
        {
            const auto r = apply_legacy_tx(world_, tx);
            log("legacy_tx[" + tag + "] " + std::string{to_string(r.status)} +
                (r.reason.empty() ? "" : " (" + r.reason + ")") + " gas=" + std::to_string(r.gas_used));
        }
        catch (const Error& e)
        {
            if (e.code() == Errc::InternalInvariantViolation)
                throw;
            log("legacy_tx[" + tag + "] rejected " + std::string{to_string(e.code())});
        }
    }

    void mine(const json& step)
    {
        std::vector<Queued> ordered;
        std::vector<bool> used(queue_.size(), false);
        for (const auto& t : step.value("order", json::array()))
        {
            const auto tag = t.get<std::string>();
            bool found = false;
            for (size_t i = 0; i < queue_.size(); ++i)
                if (!used[i] && queue_[i].tag == tag)
                {
                    ordered.push_back(queue_[i]);
                    used[i] = found = true;
                    break;
                }
            if (!found)
                script_error("mine: no queued transaction tagged '" + tag + "'");
        }
        for (size_t i = 0; i < queue_.size(); ++i)
            if (!used[i])
                ordered.push_back(queue_[i]);
        queue_.clear();
        log("mine " + std::to_string(ordered.size()) + " transaction(s)");
        for (const auto& q : ordered)
            execute_legacy(q.tag, q.tx);
    }

    void user_op(const json& step)
    {
        const auto sender_name = step.at("sender").get<std::string>();
        UserOperation op;
        op.sender = actor(sender_name).address;
        if (!world_.exists(op.sender))
            script_error("user_op sender '" + sender_name + "' has no account");

        uint64_t pending = 0;
        for (const auto& e : pool_.entries())
            pending += e.op.sender == op.sender;
        op.nonce = step.contains("nonce") ? step.at("nonce").get<uint64_t>()
                                          : world_.aa_nonce(op.sender) + pending;
        if (step.contains("intent"))
        {
            const auto& in = step.at("intent");
            op.payload = Intent{in.at("give").get<std::string>(), arg_value(in.at("amount")),
                in.at("want").get<std::string>(), IntentObjective::MaximizeOutput};
        }
        else
        {
            auto input = call_input(step);
            op.payload = make_call(target_of(step), amount_or(step, "value", 0), std::move(input));
        }
        op.call_gas_limit = step.value("call_gas_limit", uint64_t{100'000});
        op.verification_gas_limit = step.value("verification_gas_limit", uint64_t{100'000});
        op.pre_verification_gas = step.value("pre_verification_gas", uint64_t{21'000});
        op.max_fee_per_gas = amount_or(step, "fee", 1);
        if (step.contains("paymaster"))
            op.paymaster_and_data =
                PaymasterAndData{actor(step.at("paymaster").get<std::string>()).address, {}};
        if (step.contains("aggregator"))
            op.aggregator = actor(step.at("aggregator").get<std::string>()).address;
        for (const auto& signer : step.value("signers", json::array()))
            op = entrypoint_.sign(std::move(op), actor(signer.get<std::string>()).keys.secret, *scheme_);

        const auto tag = step.value("tag", sender_name);
        tags_[entrypoint_.digest(op)] = tag;
        ops_[tag] = op;
        const auto r = pool_.submit(op);
        log("user_op[" + tag + "] nonce=" + std::to_string(op.nonce) + " fee=" +
            fmt_amount(op.max_fee_per_gas) + " -> " + r.reason() +
            (r.accepted() ? " seq=" + std::to_string(r.arrival_seq) : ""));
    }

    void log_receipt(const HandleOpsReceipt& receipt)
    {
        for (const auto& r : receipt.ops)
        {
            const auto it = tags_.find(r.op_digest);
            const auto tag = it == tags_.end() ? r.op_digest.hex().substr(0, 10) : it->second;
            log("  op[" + tag + "] " + std::string{to_string(r.phase_reached)} +
                (r.reason ? " (" + *r.reason + ")" : "") + " cost=" + fmt_amount(r.actual_gas_cost));
        }
        log("  beneficiary credited " + fmt_amount(receipt.beneficiary_credited));
    }

    Address beneficiary(const json& step) const
    {
        return actor(step.value("beneficiary", std::string{"bundler"})).address;
    }

    void replay(const json& step)
    {
        const auto tag = step.at("tag").get<std::string>();
        const auto it = ops_.find(tag);
        if (it == ops_.end())
            script_error("replay_user_op: unknown tag '" + tag + "'");
        const auto via = step.value("via", std::string{"entrypoint"});
        if (via == "mempool")
        {
            const auto r = pool_.submit(it->second);
            log("replay[" + tag + "] via mempool -> " + r.reason());
            return;
        }
        log("replay[" + tag + "] via entrypoint");
        Bundle b{{it->second}, {}};
        Bundler{BundlerConfig{1, beneficiary(step), false}, entrypoint_}.attach_aggregates(b, world_);
        log_receipt(entrypoint_.handle_ops(world_, b, beneficiary(step)));
    }

    void bundle(const json& step)
    {
        BundlerConfig config;
        config.beneficiary = beneficiary(step);
        config.max_bundle_size = step.value("max_bundle_size", size_t{16});
        config.drop_flagged = step.value("drop_flagged", false);
        const Bundler bundler{config, entrypoint_};

        for (const auto& e : pool_.entries())
        {
            const auto report = bundler.simulate(e.op, world_);
            const auto it = tags_.find(entrypoint_.digest(e.op));
            const auto tag = it == tags_.end() ? std::string{"?"} : it->second;
            if (report.reason)
                log("simulate[" + tag + "] rejected " + *report.reason);
            for (const auto w : report.warnings)
                log("simulate[" + tag + "] warning " + std::string{to_string(w)});
        }
        const auto b = bundler.select_and_order(pool_, world_);
        log("bundle of " + std::to_string(b.ops.size()) + " op(s), " +
            std::to_string(pool_.size()) + " left in mempool");
        log_receipt(bundler.submit_bundle(b, world_));
    }

    // Predicates

    SignedInt holdings(const WorldState& w, const json& of, const std::string& asset) const
    {
        SignedInt total = 0;
        for (const auto& n : of)
        {
            const auto addr = actor(n.get<std::string>()).address;
            if (asset == "native")
                total += SignedInt{w.balance(addr) + w.deposits().of(addr)};
            else
                total += SignedInt{w.tokens().balance(asset, addr)};
        }
        return total;
    }

    static bool compare(const SignedInt& a, const std::string& cmp, const SignedInt& b)
    {
        if (cmp == "gt")
            return a > b;
        if (cmp == "ge")
            return a >= b;
        if (cmp == "lt")
            return a < b;
        if (cmp == "le")
            return a <= b;
        if (cmp == "eq")
            return a == b;
        if (cmp == "ne")
            return a != b;
        throw Error{Errc::ParseError, "success_predicate: unknown comparison '" + cmp + "'"};
    }

    bool eval(const json& p) const
    {
        if (p.contains("all"))
        {
            for (const auto& q : p.at("all"))
                if (!eval(q))
                    return false;
            return true;
        }
        if (p.contains("any"))
        {
            for (const auto& q : p.at("any"))
                if (eval(q))
                    return true;
            return false;
        }
        if (p.contains("not"))
            return !eval(p.at("not"));
        if (p.contains("holdings"))
        {
            const auto& h = p.at("holdings");
            const auto asset = h.value("asset", std::string{"native"});
            const SignedInt delta =
                holdings(world_, h.at("of"), asset) - holdings(initial_, h.at("of"), asset);
            return compare(delta, h.value("cmp", std::string{"gt"}),
                SignedInt{h.value("delta", std::string{"0"})});
        }
        if (p.contains("storage"))
        {
            const auto& st = p.at("storage");
            const auto addr = actor(st.at("account").get<std::string>()).address;
            const SignedInt value{world_.sload(addr, arg_value(st.at("key")))};
            return compare(value, st.value("cmp", std::string{"gt"}),
                SignedInt{arg_value(st.at("value"))});
        }
        if (p.contains("exists"))
        {
            const auto& e = p.at("exists");
            const auto addr = actor(e.at("account").get<std::string>()).address;
            return world_.exists(addr) == e.value("expect", true);
        }
        throw Error{Errc::ParseError, "success_predicate: unknown form " + p.dump()};
    }

    const Scenario& s_;
    uint64_t seed_;
    Mode mode_;
    std::shared_ptr<SimulatedScheme> scheme_;
    json accounts_;
    std::map<std::string, Actor> actors_;
    WorldState world_;
    WorldState initial_;
    AltMempool pool_;
    EntryPoint entrypoint_;
    std::vector<Queued> queue_;
    std::map<Hash32, std::string> tags_;
    std::map<std::string, UserOperation> ops_;
    std::vector<std::string> trace_;
    size_t step_index_ = 0;
};
}  // namespace

ScenarioResult run_scenario_detailed(const Scenario& s, uint64_t seed, ModeSelection modes)
{
    ScenarioResult r;
    r.name = s.name;
    r.table2_row = s.table2_row;
    r.seed = seed;
    r.modes = modes;
    r.expected = s.expected;
    r.match = true;

    if (modes != ModeSelection::AA)
    {
        auto run = Runner{s, seed, Mode::Legacy}.run();
        r.verdict.exploit_succeeded_legacy = run.exploit_succeeded;
        r.match = r.match && run.exploit_succeeded == s.expected.legacy;
        r.runs.push_back(std::move(run));
    }
    if (modes != ModeSelection::Legacy)
    {
        auto run = Runner{s, seed, Mode::AA}.run();
        r.verdict.exploit_succeeded_aa = run.exploit_succeeded;
        r.match = r.match && run.exploit_succeeded == s.expected.aa;
        r.runs.push_back(std::move(run));
    }
    if (modes == ModeSelection::Both)
    {
        r.verdict.mitigated = *r.verdict.exploit_succeeded_legacy && !*r.verdict.exploit_succeeded_aa;
        if (r.verdict.mitigated)
            r.verdict.mitigated_by = s.expected.mitigated_by;
    }
    return r;
}

namespace
{
json opt_bool(const std::optional<bool>& b)
{
    return b ? json(*b) : json(nullptr);
}

std::string yes_no(const std::optional<bool>& b)
{
    return b ? (*b ? "yes" : "no") : "-";
}
}  // namespace

nlohmann::json result_to_json(const ScenarioResult& r)
{
    json runs = json::object();
    for (const auto& run : r.runs)
        runs[std::string{to_string(run.mode)}] = {
            {"exploit_succeeded", run.exploit_succeeded}, {"trace", run.trace}};
    return {{"scenario", r.name},
        {"table2_row", r.table2_row},
        {"seed", r.seed},
        {"runs", runs},
        {"verdict",
            {{"exploit_succeeded_legacy", opt_bool(r.verdict.exploit_succeeded_legacy)},
                {"exploit_succeeded_aa", opt_bool(r.verdict.exploit_succeeded_aa)},
                {"mitigated", r.verdict.mitigated},
                {"mitigated_by", r.verdict.mitigated_by ? json(*r.verdict.mitigated_by) : json(nullptr)}}},
        {"expected",
            {{"legacy", r.expected.legacy}, {"aa", r.expected.aa},
                {"mitigated_by", r.expected.mitigated_by ? json(*r.expected.mitigated_by) : json(nullptr)}}},
        {"match", r.match}};
}

std::string result_to_text(const ScenarioResult& r)
{
    std::ostringstream out;
    out << "scenario   " << r.name << "\n";
    out << "row        " << r.table2_row << "\n";
    out << "seed       " << r.seed << "\n";
    for (const auto& run : r.runs)
    {
        out << "\n[" << to_string(run.mode) << "] exploit succeeded: "
            << (run.exploit_succeeded ? "yes" : "no") << "\n";
        for (const auto& line : run.trace)
            out << "  " << line << "\n";
    }
    out << "\n"
        << std::left << std::setw(10) << "legacy" << std::setw(10) << "aa" << std::setw(11)
        << "mitigated" << std::setw(28) << "mitigated_by" << "match\n";
    out << std::setw(10) << yes_no(r.verdict.exploit_succeeded_legacy) << std::setw(10)
        << yes_no(r.verdict.exploit_succeeded_aa) << std::setw(11)
        << (r.modes == ModeSelection::Both ? (r.verdict.mitigated ? "yes" : "no") : "-")
        << std::setw(28) << r.verdict.mitigated_by.value_or("-") << (r.match ? "yes" : "NO")
        << "\n";
    return out.str();
}

}  // namespace aasim
