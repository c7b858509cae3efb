#include "support.hpp"

#include <aasim/world/abi.hpp>

#include <doctest.h>

#include <algorithm>

using namespace aasim;
using namespace aasim::test;

namespace
{
Bytes increment()
{
    return abi::encode_call("increment()", {});
}

Big field()
{
    return Big{field_prime()};
}

Big tag_sum(std::span<const Signature> sigs)
{
    Big s;
    for (const auto& sig : sigs)
        s += Big{sig.tag.to_word()};
    return s.mod(field());
}

Bundler make_bundler(const Sim& sim, size_t max = 16, bool drop_flagged = false)
{
    return Bundler{BundlerConfig{max, sim.bundler, drop_flagged}, sim.ep};
}

/// Signed ops from distinct single-key wallets, each tied to an aggregator.
struct AggFixture
{
    Sim sim;
    Address agg;
    std::vector<UserOperation> ops;

    explicit AggFixture(size_t n)
    {
        agg = sim.contract("aggregator");
        sim.world.register_aggregator(agg);
        const auto counter = sim.contract("counter");
        for (size_t i = 0; i < n; ++i)
        {
            const auto k = sim.key();
            const auto w = sim.wallet(k, ETH);
            auto op = sim.op(w, counter, 0, increment());
            op.aggregator = agg;
            ops.push_back(sim.sign(op, k));
        }
    }

    std::vector<Signature> sigs() const
    {
        std::vector<Signature> out;
        for (const auto& op : ops)
            out.push_back(op.signatures.front());
        return out;
    }
};
}  // namespace

TEST_SUITE("aggregator")
{
    TEST_CASE("empty aggregate is the identity")
    {
        Sim sim;
        const Aggregator agg{*sim.scheme, sim.ep};
        const auto a = agg.aggregate({});
        CHECK(a.combined == 0);
        CHECK(a.count == 0);
        CHECK(agg.verify_aggregate({}, a));
    }

    TEST_CASE("single signature aggregates to its own tag")
    {
        AggFixture f{1};
        const Aggregator agg{*f.sim.scheme, f.sim.ep};
        const auto a = agg.aggregate_ops(f.ops);
        CHECK(a.combined == f.ops[0].signatures[0].tag.to_word());
        CHECK(agg.verify_aggregate(f.ops, a));
    }

    TEST_CASE("sum mod p matches an independent oracle")
    {
        AggFixture f{64};
        const Aggregator agg{*f.sim.scheme, f.sim.ep};
        const auto sigs = f.sigs();
        const auto a = agg.aggregate(sigs);
        CHECK(Big{a.combined} == tag_sum(sigs));
        CHECK(a.count == 64);

        auto shuffled = sigs;
        auto g = rng(3);
        std::shuffle(shuffled.begin(), shuffled.end(), g);
        CHECK(agg.aggregate(shuffled) == a);
    }

    TEST_CASE("tampering breaks the aggregate")
    {
        AggFixture f{8};
        const Aggregator agg{*f.sim.scheme, f.sim.ep};
        const auto a = agg.aggregate_ops(f.ops);
        CHECK(agg.verify_aggregate(f.ops, a));

        auto mutated = f.ops;
        std::get<CallData>(mutated[3].payload).input.push_back(0);
        CHECK_FALSE(agg.verify_aggregate(mutated, a));

        auto fewer = f.ops;
        fewer.pop_back();
        CHECK_FALSE(agg.verify_aggregate(fewer, a));

        auto bumped = a;
        bumped.combined = (bumped.combined + 1) % field_prime();
        CHECK_FALSE(agg.verify_aggregate(f.ops, bumped));
    }

    TEST_CASE("aggregated bundle executes and a bad aggregate rejects the group")
    {
        AggFixture f{5};
        auto bundle = Bundle{f.ops, {}};
        make_bundler(f.sim).attach_aggregates(bundle, f.sim.world);
        REQUIRE(bundle.aggregates.size() == 1);

        auto broken = bundle;
        broken.aggregates[0].signature.combined += 1;
        auto copy = f.sim.world;
        const auto bad = f.sim.ep.handle_ops(copy, broken, f.sim.bundler);
        for (const auto& r : bad.ops)
            CHECK(r.reason == "BadAggregateSignature");

        const auto good = f.sim.ep.handle_ops(f.sim.world, bundle, f.sim.bundler);
        for (const auto& r : good.ops)
            CHECK(r.phase_reached == Phase::ExecutedSuccess);
    }

    TEST_CASE("multisig wallets cannot aggregate")
    {
        Sim sim;
        const auto agg = sim.contract("aggregator");
        sim.world.register_aggregator(agg);
        const auto a = sim.key();
        const auto b = sim.key();
        const auto w = sim.wallet(make_multisig(2, {a.pub, b.pub}), ETH);
        auto op = sim.op(w, w);
        op.aggregator = agg;
        op = sim.sign(sim.sign(op, a), b);
        auto bundle = Bundle{{op}, {}};
        make_bundler(sim).attach_aggregates(bundle, sim.world);
        CHECK(sim.ep.handle_ops(sim.world, bundle, sim.bundler).ops[0].reason == "AggregatorNeedsSingleKey");
    }
}

TEST_SUITE("mempool")
{
    TEST_CASE("duplicates and invalid ops")
    {
        Sim sim;
        AltMempool pool{sim.world.programs_ptr()};
        const auto k = sim.key();
        const auto w = sim.wallet(k, ETH);
        const auto op = sim.sign(sim.op(w, w), k);
        const auto first = pool.submit(op);
        CHECK(first.accepted());
        CHECK(first.arrival_seq == 0);
        CHECK(pool.submit(op).status == SubmitStatus::Duplicate);

        auto zero = sim.op(w, w);
        zero.nonce = 1;
        zero.max_fee_per_gas = 0;
        const auto bad = pool.submit(zero);
        CHECK(bad.status == SubmitStatus::Invalid);
        CHECK(bad.error == ValidationError::ZeroGasField);

        auto next = sim.op(w, w);
        next.nonce = 1;
        CHECK(pool.submit(next).arrival_seq == 1);
        CHECK(pool.size() == 2);
        CHECK(pool.remove(w, 0));
        CHECK_FALSE(pool.remove(w, 0));
        CHECK(pool.contains(w, 1));
    }

    TEST_CASE("dump and restore round trip")
    {
        Sim sim;
        AltMempool pool;
        for (int i = 0; i < 6; ++i)
        {
            const auto k = sim.key();
            const auto w = sim.wallet(k, ETH);
            pool.submit(sim.sign(sim.op(w, w, 0, {}, 1 + i % 3), k));
        }
        const auto restored = AltMempool::restore(pool.dump());
        CHECK(restored.dump() == pool.dump());
        CHECK(restored.next_arrival_seq() == pool.next_arrival_seq());

        AltMempool clash;
        const auto e = pool.entries().front();
        clash.insert(e.op, 7);
        CHECK_THROWS_AS(clash.insert(e.op, 8), Error);
    }
}

TEST_SUITE("bundler")
{
    TEST_CASE("fee then arrival ordering")
    {
        Sim sim;
        AltMempool pool;
        const std::vector<uint64_t> fees{5, 9, 9};
        std::vector<Address> senders;
        for (const auto fee : fees)
        {
            const auto k = sim.key();
            const auto w = sim.wallet(k, ETH);
            senders.push_back(w);
            pool.submit(sim.sign(sim.op(w, w, 0, {}, fee), k));
        }
        const auto bundle = make_bundler(sim).select_and_order(pool, sim.world);
        REQUIRE(bundle.ops.size() == 3);
        CHECK(bundle.ops[0].sender == senders[1]);
        CHECK(bundle.ops[1].sender == senders[2]);
        CHECK(bundle.ops[2].sender == senders[0]);
        CHECK(pool.size() == 0);
    }

    TEST_CASE("empty pool gives an empty bundle")
    {
        Sim sim;
        AltMempool pool;
        const auto bundle = make_bundler(sim).select_and_order(pool, sim.world);
        CHECK(bundle.ops.empty());
        CHECK(bundle.aggregates.empty());
        CHECK_THROWS_AS(Bundler(BundlerConfig{0, sim.bundler, false}, sim.ep), Error);
    }

    TEST_CASE("random pools follow the sort oracle")
    {
        for (uint64_t seed = 0; seed < 20; ++seed)
        {
            auto g = rng(seed);
            Sim sim;
            AltMempool pool;
            std::vector<std::tuple<uint64_t, uint64_t, Address>> expected;
            const auto n = uniform(g, 1, 50);
            for (uint64_t i = 0; i < n; ++i)
            {
                const auto k = sim.key();
                const auto w = sim.wallet(k, ETH);
                const auto fee = uniform(g, 1, 6);
                const auto seq = pool.submit(sim.sign(sim.op(w, w, 0, {}, fee), k)).arrival_seq;
                expected.emplace_back(fee, seq, w);
            }
            std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
                return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) > std::get<0>(b)
                                                        : std::get<1>(a) < std::get<1>(b);
            });
            const size_t cap = uniform(g, 1, 64);
            const auto bundle = make_bundler(sim, cap).select_and_order(pool, sim.world);
            REQUIRE(bundle.ops.size() == std::min<size_t>(cap, n));
            for (size_t i = 0; i < bundle.ops.size(); ++i)
                CHECK(bundle.ops[i].sender == std::get<2>(expected[i]));
            CHECK(pool.size() == n - bundle.ops.size());
        }
    }

    TEST_CASE("selection ignores submission order for distinct fees")
    {
        auto g = rng(41);
        for (int trial = 0; trial < 10; ++trial)
        {
            Sim sim;
            std::vector<UserOperation> ops;
            for (int i = 0; i < 12; ++i)
            {
                const auto k = sim.key();
                const auto w = sim.wallet(k, ETH);
                ops.push_back(sim.sign(sim.op(w, w, 0, {}, 1 + static_cast<uint64_t>(i)), k));
            }
            const auto pick = [&](std::vector<UserOperation> order) {
                AltMempool pool;
                for (auto& op : order)
                    pool.submit(op);
                return make_bundler(sim, 16).select_and_order(pool, sim.world).ops;
            };
            auto shuffled = ops;
            std::shuffle(shuffled.begin(), shuffled.end(), g);
            CHECK(pick(ops) == pick(shuffled));
        }
    }

    TEST_CASE("simulation agrees with execution")
    {
        Sim sim;
        const auto k = sim.key();
        const auto rich = sim.wallet(k, ETH);
        const auto poor = sim.wallet(k, 5);
        const auto counter = sim.contract("counter");
        const auto bundler = make_bundler(sim);

        const auto good = sim.sign(sim.op(rich, counter, 0, increment()), k);
        const auto rep = bundler.simulate(good, sim.world);
        CHECK(rep.would_pass);
        CHECK(rep.phase == Phase::ExecutedSuccess);
        CHECK(sim.world.sload(counter, 0) == 0);

        const auto broke = sim.sign(sim.op(poor, counter, 0, increment()), k);
        const auto rep2 = bundler.simulate(broke, sim.world);
        CHECK_FALSE(rep2.would_pass);
        CHECK(rep2.reason == "PrefundShortfall");

        CHECK(sim.run_one(good).phase_reached == rep.phase);
        CHECK(sim.run_one(broke).reason == rep2.reason);
    }

    TEST_CASE("value into a contract that cannot spend is flagged")
    {
        Sim sim;
        const auto k = sim.key();
        const auto w = sim.wallet(k, ETH);
        const auto piggy = sim.contract("piggy_vault");
        const auto op = sim.sign(sim.op(w, piggy, 100, abi::encode_call("deposit()", {})), k);
        const auto rep = make_bundler(sim).simulate(op, sim.world);
        REQUIRE(rep.warnings.size() == 1);
        CHECK(rep.warnings[0] == SimWarning::FrozenFundsRisk);

        AltMempool pool;
        pool.submit(op);
        CHECK(make_bundler(sim, 16, true).select_and_order(pool, sim.world).ops.empty());
        CHECK(pool.size() == 0);
        pool.submit(op);
        CHECK(make_bundler(sim, 16, false).select_and_order(pool, sim.world).ops.size() == 1);
    }

    TEST_CASE("one op per sender, later nonces wait")
    {
        Sim sim;
        const auto k = sim.key();
        const auto w = sim.wallet(k, ETH);
        AltMempool pool;
        auto second = sim.op(w, w, 0, {}, 50);
        second.nonce = 1;
        pool.submit(sim.sign(second, k));
        pool.submit(sim.sign(sim.op(w, w), k));
        const auto bundler = make_bundler(sim);
        auto b1 = bundler.select_and_order(pool, sim.world);
        REQUIRE(b1.ops.size() == 1);
        CHECK(b1.ops[0].nonce == 0);
        CHECK(pool.size() == 1);
        bundler.submit_bundle(b1, sim.world);
        auto b2 = bundler.select_and_order(pool, sim.world);
        REQUIRE(b2.ops.size() == 1);
        CHECK(b2.ops[0].nonce == 1);
    }

    TEST_CASE("stale nonces are evicted, failing ops stay pooled")
    {
        Sim sim;
        const auto k = sim.key();
        const auto w = sim.wallet(k, ETH);
        const auto poor = sim.wallet(k, 0);
        const auto op = sim.sign(sim.op(w, w), k);
        sim.run_one(op);
        AltMempool pool;
        pool.submit(op);
        pool.submit(sim.sign(sim.op(poor, poor), k));
        const auto bundle = make_bundler(sim).select_and_order(pool, sim.world);
        CHECK(bundle.ops.empty());
        CHECK_FALSE(pool.contains(w, 0));
        CHECK(pool.contains(poor, 0));
    }

    TEST_CASE("reverted op still reimburses the bundler")
    {
        Sim sim;
        const auto k = sim.key();
        const auto w = sim.wallet(k, ETH);
        const auto bounty = sim.contract("bounty", 10, {{0, 1}});
        AltMempool pool;
        pool.submit(sim.sign(sim.op(w, bounty, 0, abi::encode_call("claim(uint256)", {0})), k));
        const auto bundler = make_bundler(sim);
        const auto bundle = bundler.select_and_order(pool, sim.world);
        REQUIRE(bundle.ops.size() == 1);
        const auto r = bundler.submit_bundle(bundle, sim.world);
        CHECK(r.ops[0].phase_reached == Phase::ExecutedReverted);
        CHECK(sim.world.balance(sim.bundler) == r.ops[0].actual_gas_cost);
        CHECK(r.ops[0].actual_gas_cost > 0);
    }
}
