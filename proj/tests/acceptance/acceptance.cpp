// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "support.hpp"

#include <aasim/harness/demo.hpp>
#include <aasim/harness/suite.hpp>
#include <aasim/world/abi.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace aasim;
using namespace aasim::test;

namespace
{
struct Outcome
{
    bool pass = true;
    std::string detail;
};

/// Collects the first few failure messages of a criterion.
class Check
{
public:
    void expect(bool ok, const std::string& what)
    {
        ++total_;
        if (ok)
            return;
        ++failed_;
        if (failed_ <= 3)
            notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    Outcome done(const std::string& summary) const
    {
        if (failed_ == 0)
            return {true, summary};
        return {false, std::to_string(failed_) + "/" + std::to_string(total_) + " failed: " + notes_};
    }

private:
    size_t total_ = 0;
    size_t failed_ = 0;
    std::string notes_;
};

Bytes increment()
{
    return abi::encode_call("increment()", {});
}

// 1 ------------------------------------------------------------------------

Outcome table2()
{
    Check c;
    const auto start = std::chrono::steady_clock::now();
    std::optional<nlohmann::json> reference;
    for (uint64_t seed : {0, 1, 7, 42, 1234})
    {
        const auto r = run_table2_suite(AASIM_SCENARIO_DIR, seed);
        c.expect(r.rows.size() == 14, "row count");
        c.expect(r.all_matched(), "seed " + std::to_string(seed) + " mismatch");
        c.expect(r.summary.mitigated == 11 && r.summary.not_mitigated == 3,
            "seed " + std::to_string(seed) + " split");
        auto j = suite_to_json(r);
        j.erase("seed");
        if (!reference)
            reference = j;
        c.expect(j == *reference, "seed " + std::to_string(seed) + " differs");
        const auto again = suite_to_json(run_table2_suite(AASIM_SCENARIO_DIR, seed));
        c.expect(again.dump() == suite_to_json(r).dump(), "rerun not byte-identical");
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 10.0, "took " + std::to_string(secs) + " s");
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << "14/14 rows, 11 mitigated, 3 not, 5 seeds identical, " << secs << " s";
    return c.done(s.str());
}

// 2 ------------------------------------------------------------------------

struct Population
{
    Sim sim;
    std::vector<KeyPair> keys;
    std::vector<Address> wallets;
    std::vector<Address> sponsors;
    std::vector<Address> token_pms;
    std::vector<Address> sinks;
    Address counter;
    Address bounty;
    Address spinner;

    Population(std::mt19937_64& g, size_t n)
    {
        counter = sim.contract("counter");
        bounty = sim.contract("bounty", ETH, {{0, 1}});
        spinner = sim.contract("loop");
        for (int i = 0; i < 4; ++i)
            sinks.push_back(sim.eoa(uniform(g, 0, 1) * ETH));
        for (size_t i = 0; i < n; ++i)
        {
            keys.push_back(sim.key());
            // A few wallets start broke so PrefundShortfall shows up.
            const Wei bal = uniform(g, 0, 9) == 0 ? Wei{0} : Wei{uniform(g, 1, 50)} * ETH / 10;
            wallets.push_back(sim.wallet(keys.back(), bal));
            sim.world.token_mint("USDC", wallets.back(), u256{uniform(g, 0, 1'000'000)} * 1'000'000);
        }
        const std::set<Address> all{wallets.begin(), wallets.end()};
        sponsors.push_back(sim.sponsor(all, 5 * ETH, 5 * ETH));
        sponsors.push_back(sim.sponsor(all, ETH / 1000, ETH));
        sponsors.push_back(sim.sponsor(all, 5 * ETH, 5 * ETH, 30'000));
        sponsors.push_back(sim.sponsor({wallets[0]}, 5 * ETH, 5 * ETH));
        token_pms.push_back(sim.token_paymaster("USDC", {600'000'000, 1}, 5 * ETH));
        token_pms.push_back(sim.token_paymaster("USDC", {7, 3}, ETH / 100));
        for (const auto& w : wallets)
            for (const auto& pm : token_pms)
                if (uniform(g, 0, 3) != 0)
                    sim.world.token_approve("USDC", w, pm, U256_MAX);
        sim.world.commit();
    }

    UserOperation random_op(std::mt19937_64& g, size_t who)
    {
        const auto& w = wallets[who];
        UserOperation op;
        switch (uniform(g, 0, 4))
        {
        case 0: op = sim.op(w, counter, 0, increment()); break;
        case 1: op = sim.op(w, sinks[uniform(g, 0, sinks.size() - 1)], Wei{uniform(g, 0, 3)} * ETH / 100); break;
        case 2: op = sim.op(w, bounty, 0, abi::encode_call("claim(uint256)", {uniform(g, 0, 2)})); break;
        case 3: op = sim.op(w, spinner, 0, abi::encode_call("spin(uint256)", {uniform(g, 0, 120'000)})); break;
        default: op = sim.op(w, w); break;
        }
        op.max_fee_per_gas = uniform(g, 1, 3'000'000'000);
        op.call_gas_limit = uniform(g, 1, 150'000);
        op.verification_gas_limit = uniform(g, 39'000, 120'000);
        op.pre_verification_gas = uniform(g, 1, 50'000);
        switch (uniform(g, 0, 3))
        {
        case 0: op.paymaster_and_data = PaymasterAndData{sponsors[uniform(g, 0, sponsors.size() - 1)], {}}; break;
        case 1: op.paymaster_and_data = PaymasterAndData{token_pms[uniform(g, 0, token_pms.size() - 1)], {}}; break;
        default: break;
        }
        if (uniform(g, 0, 19) == 0)
            op.nonce += uniform(g, 1, 2);
        const auto& signer = uniform(g, 0, 24) == 0 ? keys[(who + 1) % keys.size()] : keys[who];
        return sim.sign(op, signer);
    }

    std::vector<size_t> pick_senders(std::mt19937_64& g, size_t max)
    {
        std::vector<size_t> idx(wallets.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), g);
        idx.resize(uniform(g, 1, std::min(max, idx.size())));
        return idx;
    }
};

Big usdc_supply(const WorldState& w)
{
    Big total;
    if (const auto it = w.tokens().balances.find("USDC"); it != w.tokens().balances.end())
        for (const auto& [_, amount] : it->second)
            total += Big{amount};
    return total;
}

Outcome conservation()
{
    Check c;
    auto g = rng(2024);
    Population pop{g, 40};
    std::map<std::string, size_t> phases;
    for (int i = 0; i < 1000; ++i)
    {
        std::vector<UserOperation> ops;
        for (const auto who : pop.pick_senders(g, 16))
            ops.push_back(pop.random_op(g, who));
        const auto before = ledger_total(pop.sim.world);
        const auto tokens_before = usdc_supply(pop.sim.world);
        const auto r = pop.sim.run(std::move(ops));
        const auto after = ledger_total(pop.sim.world);
        c.expect(before == after, "bundle " + std::to_string(i) + ": " + before.str() + " -> " + after.str());
        c.expect(tokens_before == usdc_supply(pop.sim.world), "token supply moved");
        Big paid;
        for (const auto& op : r.ops)
        {
            ++phases[std::string{to_string(op.phase_reached)}];
            paid += Big{op.actual_gas_cost};
        }
        c.expect(paid == Big{r.beneficiary_credited}, "beneficiary credit");
        c.expect(pop.sim.world.deposits().escrow == 0, "escrow left over");
        pop.sim.world.commit();
    }
    std::string mix;
    for (const auto& [p, n] : phases)
        mix += (mix.empty() ? "" : ", ") + p + " " + std::to_string(n);
    return c.done("1000 bundles exact; " + mix);
}

// 3 ------------------------------------------------------------------------

Outcome replay()
{
    Check c;
    auto g = rng(99);
    Population pop{g, 24};
    for (auto& w : pop.wallets)
        pop.sim.world.credit(w, 5 * ETH);
    size_t attempts = 0;
    while (attempts < 500)
    {
        const auto senders = pop.pick_senders(g, 8);
        std::vector<UserOperation> executed;
        for (const auto who : senders)
        {
            auto op = pop.sim.op(pop.wallets[who], pop.counter, 0, increment());
            executed.push_back(pop.sim.sign(op, pop.keys[who]));
        }
        const auto first = pop.sim.run(executed);
        std::vector<UserOperation> landed;
        for (size_t i = 0; i < executed.size(); ++i)
            if (first.ops[i].phase_reached != Phase::RejectedVerification)
                landed.push_back(executed[i]);

        std::vector<UserOperation> again;
        std::set<Address> replayed;
        for (auto op : landed)
        {
            const auto mode = uniform(g, 0, 3);
            if (mode == 1)
                op.max_fee_per_gas += uniform(g, 1, 1000);
            if (mode == 2)
                op.payload = make_call(pop.sinks[0], 1, {});
            if (mode == 3)
                op.call_gas_limit += 1;
            if (mode != 0)
            {
                const auto who = std::find(pop.wallets.begin(), pop.wallets.end(), op.sender) - pop.wallets.begin();
                op = pop.sim.sign(std::move(op), pop.keys[who]);
            }
            replayed.insert(op.sender);
            again.push_back(std::move(op));
        }
        // Fresh ops from other senders ride along in some bundles.
        for (const auto who : pop.pick_senders(g, 4))
            if (!replayed.contains(pop.wallets[who]) && uniform(g, 0, 1))
                again.push_back(pop.sim.sign(pop.sim.op(pop.wallets[who], pop.counter, 0, increment()), pop.keys[who]));
        std::shuffle(again.begin(), again.end(), g);

        const auto second = pop.sim.run(again);
        for (const auto& r : second.ops)
        {
            if (!replayed.contains(r.sender))
                continue;
            ++attempts;
            c.expect(r.phase_reached == Phase::RejectedVerification && r.reason == "BadNonce",
                "replay of " + r.sender.hex() + " got " + r.reason.value_or(std::string{to_string(r.phase_reached)}));
        }
        pop.sim.world.commit();
    }
    return c.done(std::to_string(attempts) + " resubmissions, all BadNonce");
}

// 4 ------------------------------------------------------------------------

Outcome aggregate()
{
    Check c;
    auto g = rng(4);
    SimulatedScheme scheme;
    std::vector<KeyPair> keys;
    for (int i = 0; i < 64; ++i)
        keys.push_back(scheme.keygen(Encoder{"agg-key"}.u64(i).digest()));
    const auto digest = [&](uint64_t n) { return Encoder{"agg-msg"}.u64(n).u64(g()).digest(); };

    size_t invalid_bundles = 0;
    for (int t = 0; t < 200; ++t)
    {
        const auto n = uniform(g, 1, 64);
        std::vector<SignedMessage> members;
        std::vector<Signature> sigs;
        bool all_ok = true;
        for (uint64_t i = 0; i < n; ++i)
        {
            const auto& k = keys[uniform(g, 0, keys.size() - 1)];
            const auto d = digest(i);
            Signature s = scheme.sign(k.secret, d);
            switch (uniform(g, 0, 29))
            {
            case 0: s = scheme.sign(keys[(uniform(g, 1, 63))].secret, d); s.signer = k.pub; break;
            case 1: s = scheme.sign(k.secret, digest(i + 1000)); break;
            default: break;
            }
            members.push_back({k.pub, d});
            all_ok = all_ok && scheme.verify(k.pub, d, s.tag);
            sigs.push_back(s);
        }
        invalid_bundles += all_ok ? 0 : 1;
        c.expect(scheme.verify_aggregate(members, scheme.aggregate(sigs)) == all_ok,
            "bundle " + std::to_string(t) + " of " + std::to_string(n));
    }

    for (int t = 0; t < 200; ++t)
    {
        const auto n = uniform(g, 1, 64);
        std::vector<SignedMessage> members;
        std::vector<Signature> sigs;
        for (uint64_t i = 0; i < n; ++i)
        {
            const auto& k = keys[uniform(g, 0, keys.size() - 1)];
            const auto d = digest(i);
            members.push_back({k.pub, d});
            sigs.push_back(scheme.sign(k.secret, d));
        }
        c.expect(scheme.verify_aggregate(members, scheme.aggregate(sigs)), "clean bundle rejected");
        const auto victim = uniform(g, 0, n - 1);
        const auto byte = uniform(g, 0, 31);
        const auto flip = static_cast<uint8_t>(uniform(g, 1, 255));
        if (t % 2 == 0)
            members[victim].digest.bytes[byte] ^= flip;
        else
            sigs[victim].tag.bytes[byte] ^= flip;
        bool accepted = false;
        try
        {
            accepted = scheme.verify_aggregate(members, scheme.aggregate(sigs));
        }
        catch (const Error&)
        {
            accepted = false;
        }
        c.expect(!accepted, std::string{t % 2 ? "tag" : "digest"} + " tamper accepted");
    }
    return c.done("200 bundles match AND (" + std::to_string(invalid_bundles) +
                  " with a bad member), 200/200 tampers rejected");
}

// 5 ------------------------------------------------------------------------

struct Instr
{
    enum Kind
    {
        Steps,
        Store,
        Emit,
        Send,
        CallMissing,
        Call,
        Revert,
    } kind;
    uint64_t n = 0;
    size_t child = 0;
};

struct GasProgram
{
    std::vector<Instr> body;
    Address address;
};

/// Unbounded gas of a frame: charges until the first revert.
uint64_t oracle_cost(const std::vector<GasProgram>& progs, size_t i)
{
    uint64_t total = 0;
    for (const auto& in : progs[i].body)
    {
        switch (in.kind)
        {
        case Instr::Steps: total += in.n; break;
        case Instr::Store: total += 100; break;
        case Instr::Emit:
        case Instr::Send:
        case Instr::CallMissing: total += 1; break;
        case Instr::Call: total += 1 + oracle_cost(progs, in.child); break;
        case Instr::Revert: return total;
        }
    }
    return total;
}

Outcome gas_oracle()
{
    Check c;
    auto g = rng(5);
    std::vector<GasProgram> progs;
    std::vector<size_t> roots;

    const std::function<size_t(int)> build = [&](int depth) {
        const size_t me = progs.size();
        progs.push_back({});
        progs[me].address = Address::from_word(Encoder{"gas-prog"}.u64(me).digest().to_word());
        const auto len = uniform(g, 0, 8);
        std::vector<Instr> body;
        for (uint64_t i = 0; i < len; ++i)
        {
            Instr in{static_cast<Instr::Kind>(uniform(g, 0, depth < 3 ? 6 : 4)), 0, 0};
            if (in.kind == Instr::Steps)
                in.n = uniform(g, 0, 5'000);
            if (in.kind == Instr::Call)
                in.child = build(depth + 1);
            if (in.kind == Instr::Revert && uniform(g, 0, 1))
                in.kind = Instr::Emit;
            body.push_back(in);
        }
        progs[me].body = std::move(body);
        return me;
    };
    for (int i = 0; i < 200; ++i)
        roots.push_back(build(0));

    auto registry = builtin_programs();
    const auto sink = Address::from_word(Encoder{"gas-sink"}.digest().to_word());
    for (size_t i = 0; i < progs.size(); ++i)
    {
        Program p{"gas_program_" + std::to_string(i)};
        p.on("run()", [&progs, i, sink](CallContext& ctx) {
            for (const auto& in : progs[i].body)
            {
                switch (in.kind)
                {
                case Instr::Steps: ctx.step(in.n); break;
                case Instr::Store: ctx.sstore(in.n, 1); break;
                case Instr::Emit: ctx.emit("tick"); break;
                case Instr::Send: ctx.send(sink, 1); break;
                case Instr::CallMissing: ctx.call(progs[i].address, 0, abi::encode_call("absent()", {})); break;
                case Instr::Call: ctx.call(progs[in.child].address, 0, abi::encode_call("run()", {})); break;
                case Instr::Revert: ctx.revert("scripted");
                }
            }
            return Bytes{};
        });
        registry.add(std::move(p));
    }
    Sim sim{std::make_shared<const ProgramRegistry>(std::move(registry))};
    for (size_t i = 0; i < progs.size(); ++i)
    {
        Account acc;
        acc.kind = AccountKind::Contract;
        acc.program = "gas_program_" + std::to_string(i);
        acc.balance = 1'000;
        sim.world.put_account(progs[i].address, std::move(acc));
    }

    size_t oog = 0;
    size_t reverted = 0;
    for (const auto root : roots)
    {
        const auto k = sim.key();
        const auto w = sim.wallet(k, ETH);
        auto op = sim.op(w, progs[root].address, 0, abi::encode_call("run()", {}));
        const auto unbounded = oracle_cost(progs, root);
        op.call_gas_limit = uniform(g, 0, 3) == 0 ? std::max<uint64_t>(1, unbounded / 2) : unbounded + uniform(g, 1, 1000);
        op.pre_verification_gas = uniform(g, 1, 30'000);
        op.max_fee_per_gas = uniform(g, 1, 5'000'000'000);
        const auto r = sim.run_one(sim.sign(op, k));
        const auto used = std::min(unbounded, op.call_gas_limit);
        oog += unbounded > op.call_gas_limit ? 1 : 0;
        reverted += r.phase_reached == Phase::ExecutedReverted ? 1 : 0;
        const auto expected =
            (Big{VERIFICATION_OVERHEAD_GAS} + Big{op.pre_verification_gas} + Big{used}) * Big{op.max_fee_per_gas};
        c.expect(Big{r.actual_gas_cost} == expected,
            "program " + std::to_string(root) + ": " + to_dec(r.actual_gas_cost) + " vs " + expected.str());
    }
    return c.done("200 programs (" + std::to_string(progs.size()) + " frames, " + std::to_string(oog) +
                  " out of gas, " + std::to_string(reverted) + " reverted) exact");
}

// 6 ------------------------------------------------------------------------

Outcome bundler_determinism()
{
    Check c;
    auto g = rng(6);
    size_t ties = 0;
    for (int t = 0; t < 100; ++t)
    {
        Sim sim;
        const auto n = uniform(g, 1, 16);
        const Bundler bundler{BundlerConfig{64, sim.bundler, false}, sim.ep};
        std::vector<MempoolEntry> entries;
        for (uint64_t i = 0; i < n; ++i)
        {
            const auto k = sim.key();
            const auto w = sim.wallet(k, ETH);
            entries.push_back({sim.sign(sim.op(w, w, 0, {}, uniform(g, 1, 4)), k), i});
        }
        std::set<uint64_t> fees;
        for (const auto& e : entries)
            fees.insert(static_cast<uint64_t>(e.op.max_fee_per_gas));
        ties += fees.size() < n ? 1 : 0;

        auto oracle = entries;
        std::stable_sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
            if (a.op.max_fee_per_gas != b.op.max_fee_per_gas)
                return a.op.max_fee_per_gas > b.op.max_fee_per_gas;
            return a.arrival_seq < b.arrival_seq;
        });

        std::optional<std::vector<UserOperation>> reference;
        for (int perm = 0; perm < 10; ++perm)
        {
            auto order = entries;
            std::shuffle(order.begin(), order.end(), g);
            AltMempool pool;
            for (const auto& e : order)
                pool.insert(e.op, e.arrival_seq);
            const auto bundle = bundler.select_and_order(pool, sim.world);
            if (!reference)
                reference = bundle.ops;
            c.expect(bundle.ops == *reference, "multiset " + std::to_string(t) + " permutation differs");
            c.expect(bundle.ops.size() == oracle.size(), "size");
            for (size_t i = 0; i < std::min(bundle.ops.size(), oracle.size()); ++i)
                c.expect(bundle.ops[i] == oracle[i].op, "oracle order");
        }
    }
    return c.done("100 multisets x 10 permutations identical (" + std::to_string(ties) + " with fee ties)");
}

// 7 ------------------------------------------------------------------------

Outcome gas_abstraction()
{
    Check c;
    auto g = rng(7);
    Sim sim;
    const auto counter = sim.contract("counter");
    const auto sink = sim.eoa(0);
    for (int t = 0; t < 100; ++t)
    {
        const Rational rate{uniform(g, 1, 2'000'000'000'000), uniform(g, 1, 1'000)};
        const auto pm = sim.token_paymaster("USDC", rate, 10 * ETH);
        const auto k = sim.key();
        const Wei start = Wei{uniform(g, 0, 3)} * ETH;
        const auto w = sim.wallet(k, start);
        sim.world.token_mint("USDC", w, U256_MAX / 4);
        sim.world.token_approve("USDC", w, pm, U256_MAX);
        const Wei value = start == 0 ? Wei{0} : Wei{uniform(g, 0, 1'000'000'000'000'000)};
        auto op = uniform(g, 0, 1) ? sim.op(w, sink, value) : sim.op(w, counter, 0, increment());
        const Wei sent = std::get<CallData>(op.payload).value;
        op.max_fee_per_gas = uniform(g, 1, 20'000'000'000);
        op.paymaster_and_data = PaymasterAndData{pm, {}};
        const auto tokens_before = Big{sim.world.tokens().balance("USDC", w)};
        const auto r = sim.run_one(sim.sign(op, k));
        c.expect(r.phase_reached == Phase::ExecutedSuccess, "op " + std::to_string(t) + " " + r.reason.value_or(""));
        if (!r.settlement)
        {
            c.expect(false, "no settlement");
            continue;
        }
        c.expect(Big{start} - Big{sim.world.balance(w)} == Big{sent}, "native delta != value");
        const auto charge = Big{r.settlement->tokens_charged};
        const auto cost_den = Big{r.actual_gas_cost} * Big{rate.den};
        c.expect(charge * Big{rate.num} >= cost_den, "charge undershoots");
        c.expect(charge == Big{0} || (charge - Big{1}) * Big{rate.num} < cost_den, "charge not tight");
        c.expect(tokens_before - Big{sim.world.tokens().balance("USDC", w)} == charge, "token delta");
    }
    return c.done("100 ops: native delta = value, ceil charge tight");
}

// 8 ------------------------------------------------------------------------

Outcome intents()
{
    Check c;
    auto g = rng(8);
    const std::vector<std::string> assets{"ETH", "USDC", "DAI", "WBTC"};
    size_t no_route = 0;
    for (int t = 0; t < 100; ++t)
    {
        Market m;
        const auto n = uniform(g, 1, 10);
        std::vector<uint64_t> ids(n);
        std::iota(ids.begin(), ids.end(), 1);
        std::shuffle(ids.begin(), ids.end(), g);
        for (uint64_t i = 0; i < n; ++i)
        {
            Pool p;
            p.id = ids[i];
            p.address = Address::from_word(Encoder{"pool"}.u64(t).u64(i).digest().to_word());
            p.give_asset = assets[uniform(g, 0, 1)];
            p.want_asset = assets[uniform(g, 1, 3)];
            // Small rates on purpose so equal quotes happen.
            p.rate = {uniform(g, 1, 6), uniform(g, 1, 4)};
            m.pools.push_back(p);
        }
        Intent in{assets[uniform(g, 0, 1)], u256{uniform(g, 0, 1'000'000)}, assets[uniform(g, 1, 3)], {}};

        const Pool* best = nullptr;
        Big best_q;
        for (const auto& p : m.pools)
        {
            if (p.give_asset != in.give_asset || p.want_asset != in.want_asset)
                continue;
            const auto q = (Big{in.give_amount} * Big{p.rate.num}).floor_div(Big{p.rate.den});
            if (!best || q > best_q || (q == best_q && p.id < best->id))
            {
                best = &p;
                best_q = q;
            }
        }
        try
        {
            const auto call = resolve_intent(in, m);
            c.expect(best && call.target == best->address, "market " + std::to_string(t) + " wrong pool");
            const Wei v = in.give_asset == "ETH" ? in.give_amount : Wei{0};
            c.expect(call.value == v, "value");
        }
        catch (const Error& e)
        {
            ++no_route;
            c.expect(!best && e.code() == Errc::NoRoute, "unexpected " + std::string{e.what()});
        }
    }

    const auto d = run_usdc_demo();
    c.expect(d.chosen_pool == 1, "demo pool");
    c.expect(d.quote == u256{1'200'000'000'000'000'000ull}, "demo quote");
    c.expect(d.receipt.phase_reached == Phase::ExecutedSuccess, "demo receipt");
    c.expect(d.deltas.front().native_delta == "1200000000000000000", "demo ETH received");
    return c.done("100 markets optimal (" + std::to_string(no_route) +
                  " without a route); 2000 USDC -> 1.2 ETH via pool 1");
}

// 9 ------------------------------------------------------------------------

Outcome multisig()
{
    Check c;
    SimulatedScheme scheme;
    std::vector<KeyPair> keys;
    for (int i = 0; i < 5; ++i)
        keys.push_back(scheme.keygen(Encoder{"ms-key"}.u64(i).digest()));
    const auto outsider = scheme.keygen(Encoder{"ms-outsider"}.digest());
    const auto d = Encoder{"ms-digest"}.digest();
    size_t cases = 0;
    for (size_t n = 1; n <= 5; ++n)
    {
        std::vector<PublicId> owners;
        for (size_t i = 0; i < n; ++i)
            owners.push_back(keys[i].pub);
        for (unsigned k = 1; k <= n; ++k)
        {
            const auto policy = make_multisig(k, owners);
            for (unsigned mask = 0; mask < (1u << n); ++mask)
            {
                std::vector<Signature> sigs;
                for (size_t i = 0; i < n; ++i)
                    if (mask & (1u << i))
                        sigs.push_back(scheme.sign(keys[i].secret, d));
                const bool oracle = static_cast<unsigned>(std::popcount(mask)) >= k;
                c.expect(validate(policy, d, sigs, scheme) == oracle, "plain");

                // Noise must not count: outsiders, repeats, forgeries.
                auto noisy = sigs;
                noisy.push_back(scheme.sign(outsider.secret, d));
                if (!sigs.empty())
                {
                    noisy.push_back(sigs.front());
                    auto forged = scheme.sign(keys[n - 1].secret, Encoder{"other"}.digest());
                    noisy.push_back(forged);
                }
                std::reverse(noisy.begin(), noisy.end());
                c.expect(validate(policy, d, noisy, scheme) == oracle,
                    std::to_string(k) + "-of-" + std::to_string(n) + " mask " + std::to_string(mask));
                cases += 2;
            }
        }
    }
    return c.done(std::to_string(cases) + " threshold cases agree");
}

// 10 -----------------------------------------------------------------------

Outcome intrinsic()
{
    Check c;
    auto g = rng(10);
    Sim sim;
    std::vector<Address> eoas;
    for (int i = 0; i < 8; ++i)
        eoas.push_back(sim.eoa(100 * ETH));
    const auto counter = sim.contract("counter");
    const auto spinner = sim.contract("loop");
    const auto bounty = sim.contract("bounty", ETH, {{0, 1}});
    size_t accepted = 0;
    size_t refused = 0;
    Big min_gas{1'000'000'000};
    for (int t = 0; t < 500; ++t)
    {
        const auto from = eoas[uniform(g, 0, eoas.size() - 1)];
        LegacyTransaction tx;
        tx.origin = from;
        tx.nonce = sim.world.account(from).nonce;
        tx.gas_price = uniform(g, 0, 100);
        switch (uniform(g, 0, 4))
        {
        case 0: tx.kind = MessageCall{eoas[uniform(g, 0, eoas.size() - 1)], uniform(g, 0, 1000), {}}; break;
        case 1: tx.kind = MessageCall{counter, 0, increment()}; break;
        case 2: tx.kind = MessageCall{spinner, 0, abi::encode_call("spin(uint256)", {uniform(g, 0, 5000)})}; break;
        case 3: tx.kind = MessageCall{bounty, 0, abi::encode_call("claim(uint256)", {uniform(g, 0, 2)})}; break;
        default: tx.kind = ContractCreation{"counter", 0, {}}; break;
        }

        auto starved = tx;
        starved.gas_limit = INTRINSIC_GAS - 1;
        const auto fp = sim.world.fingerprint();
        try
        {
            apply_legacy_tx(sim.world, starved);
            c.expect(false, "20999 accepted");
        }
        catch (const Error& e)
        {
            ++refused;
            c.expect(e.code() == Errc::IntrinsicGasTooLow, "wrong rejection " + std::string{e.what()});
        }
        c.expect(sim.world.fingerprint() == fp, "rejection touched state");

        tx.gas_limit = uniform(g, 0, 3) == 0 ? INTRINSIC_GAS : uniform(g, INTRINSIC_GAS, 60'000);
        const auto r = apply_legacy_tx(sim.world, tx);
        ++accepted;
        c.expect(r.gas_used >= INTRINSIC_GAS && r.gas_used <= tx.gas_limit, "gas_used " + std::to_string(r.gas_used));
        if (Big{r.gas_used} < min_gas)
            min_gas = Big{r.gas_used};
        sim.world.commit();
    }
    return c.done(std::to_string(accepted) + " accepted (min gas " + min_gas.str() + "), " +
                  std::to_string(refused) + "/500 at 20999 rejected");
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"table2-verdicts", table2},
        {"conservation", conservation},
        {"replay-protection", replay},
        {"aggregate-equivalence", aggregate},
        {"gas-oracle", gas_oracle},
        {"bundler-determinism", bundler_determinism},
        {"gas-abstraction", gas_abstraction},
        {"intent-resolution", intents},
        {"multisig-oracle", multisig},
        {"legacy-intrinsic-gas", intrinsic},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria)
    {
        ++index;
        Outcome o;
        try
        {
            o = fn();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string{"threw: "} + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %-22s %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
