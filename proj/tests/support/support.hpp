// Fixtures shared by the unit, property and acceptance tests.
#pragma once

#include <aasim/bundler/bundler.hpp>
#include <aasim/entrypoint/aggregator.hpp>
#include <aasim/entrypoint/entrypoint.hpp>
#include <aasim/hash.hpp>
#include <aasim/paymaster/paymaster.hpp>
#include <aasim/programs/builtin.hpp>
#include <aasim/userop/intent.hpp>
#include <aasim/wallet/recovery.hpp>
#include <aasim/world/legacy.hpp>
#include <aasim/world/state.hpp>

#include <gmp.h>

#include <concepts>
#include <random>
#include <string>

namespace aasim::test
{
inline const Wei ETH = Wei{1'000'000'000'000'000'000ull};

/// Independent big-integer value for oracles; never touches Boost arithmetic.
class Big
{
public:
    Big() { mpz_init(v_); }
    explicit Big(const u256& x) { mpz_init_set_str(v_, to_dec(x).c_str(), 10); }
    template <std::integral T>
    explicit Big(T x)
    {
        if constexpr (std::is_signed_v<T>)
            mpz_init_set_si(v_, x);
        else
            mpz_init_set_ui(v_, x);
    }
    Big(const Big& o) { mpz_init_set(v_, o.v_); }
    Big& operator=(const Big& o)
    {
        mpz_set(v_, o.v_);
        return *this;
    }
    ~Big() { mpz_clear(v_); }

    Big& operator+=(const Big& o)
    {
        mpz_add(v_, v_, o.v_);
        return *this;
    }
    Big& operator-=(const Big& o)
    {
        mpz_sub(v_, v_, o.v_);
        return *this;
    }
    friend Big operator+(Big a, const Big& b) { return a += b; }
    friend Big operator-(Big a, const Big& b) { return a -= b; }
    friend Big operator*(const Big& a, const Big& b)
    {
        Big r;
        mpz_mul(r.v_, a.v_, b.v_);
        return r;
    }
    Big mod(const Big& m) const
    {
        Big r;
        mpz_mod(r.v_, v_, m.v_);
        return r;
    }
    Big ceil_div(const Big& d) const
    {
        Big r;
        mpz_cdiv_q(r.v_, v_, d.v_);
        return r;
    }
    Big floor_div(const Big& d) const
    {
        Big r;
        mpz_fdiv_q(r.v_, v_, d.v_);
        return r;
    }
    friend bool operator==(const Big& a, const Big& b) { return mpz_cmp(a.v_, b.v_) == 0; }
    friend auto operator<=>(const Big& a, const Big& b) { return mpz_cmp(a.v_, b.v_) <=> 0; }
    std::string str() const
    {
        char* s = mpz_get_str(nullptr, 10, v_);
        std::string out{s};
        void (*freefunc)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefunc);
        freefunc(s, out.size() + 1);
        return out;
    }

private:
    mpz_t v_;
};

/// Σ balances + Σ deposits + escrow, summed with GMP.
inline Big ledger_total(const WorldState& w)
{
    Big total;
    for (const auto& [_, acc] : w.accounts())
        total += Big{acc.balance};
    for (const auto& [_, d] : w.deposits().deposits)
        total += Big{d};
    total += Big{w.deposits().escrow};
    return total;
}

inline Big native_of(const WorldState& w, const Address& a)
{
    return Big{w.balance(a)} + Big{w.deposits().of(a)};
}

struct Sim
{
    std::shared_ptr<SimulatedScheme> scheme = std::make_shared<SimulatedScheme>();
    WorldState world;
    EntryPoint ep;
    Address bundler;
    uint64_t counter = 0;

    explicit Sim(std::shared_ptr<const ProgramRegistry> programs = builtin_registry())
      : world{std::move(programs), scheme}
    {
        bundler = fresh_address("bundler");
    }

    KeyPair key() { return scheme->keygen(Encoder{"test-key"}.u64(counter++).digest()); }

    Address fresh_address(std::string_view tag)
    {
        return Address::from_bytes(Encoder{"test-address"}.str(tag).u64(counter++).digest().view().subspan(12));
    }

    Address eoa(const Wei& balance)
    {
        return world.create_eoa(Encoder{"test-eoa"}.u64(counter++).digest(), balance);
    }

    /// EOA together with its key.
    std::pair<Address, KeyPair> keyed_eoa(const Wei& balance)
    {
        const auto seed = Encoder{"test-eoa"}.u64(counter++).digest();
        const auto addr = world.create_eoa(seed, balance);
        return {addr, scheme->keygen(seed)};
    }

    Address contract(const std::string& program, const Wei& balance = 0,
        std::map<u256, u256> storage = {})
    {
        const auto addr = fresh_address(program);
        Account acc;
        acc.kind = AccountKind::Contract;
        acc.program = program;
        acc.balance = balance;
        acc.storage = std::move(storage);
        world.put_account(addr, std::move(acc));
        return addr;
    }

    Address wallet(ValidationPolicy policy, const Wei& balance,
        const std::string& program = "smart_wallet")
    {
        const auto addr = contract(program, balance);
        world.set_wallet(addr, WalletRecord{std::move(policy), std::nullopt});
        return addr;
    }

    Address wallet(const KeyPair& owner, const Wei& balance)
    {
        return wallet(SingleKey{owner.pub}, balance);
    }

    Address paymaster(PaymasterPolicy policy, const Wei& deposit)
    {
        const auto addr = contract("paymaster");
        world.set_paymaster(addr, PaymasterRecord{std::move(policy), key().pub, 0});
        if (deposit > 0)
            world.deposit_credit(addr, deposit);
        return addr;
    }

    Address sponsor(std::set<Address> whitelist, const Wei& budget, const Wei& deposit,
        std::optional<uint64_t> cap = std::nullopt)
    {
        return paymaster(SponsoredPolicy{std::move(whitelist), budget, cap}, deposit);
    }

    Address token_paymaster(const std::string& token, Rational rate, const Wei& deposit)
    {
        return paymaster(TokenGasPolicy{token, rate, std::nullopt}, deposit);
    }

    UserOperation op(const Address& sender, const Address& target, const Wei& value = 0,
        Bytes input = {}, const Wei& fee = 1)
    {
        UserOperation o;
        o.sender = sender;
        o.nonce = world.aa_nonce(sender);
        o.payload = make_call(target, value, std::move(input));
        o.call_gas_limit = 100'000;
        o.verification_gas_limit = 100'000;
        o.pre_verification_gas = 21'000;
        o.max_fee_per_gas = fee;
        return o;
    }

    UserOperation sign(UserOperation o, const KeyPair& k) const { return ep.sign(std::move(o), k.secret, *scheme); }

    HandleOpsReceipt run(std::vector<UserOperation> ops)
    {
        return ep.handle_ops(world, Bundle{std::move(ops), {}}, bundler);
    }

    PerOpReceipt run_one(UserOperation o) { return run({std::move(o)}).ops.at(0); }
};

/// Seeded generator for property tests.
inline std::mt19937_64 rng(uint64_t seed)
{
    return std::mt19937_64{seed};
}

inline uint64_t uniform(std::mt19937_64& g, uint64_t lo, uint64_t hi)
{
    return std::uniform_int_distribution<uint64_t>{lo, hi}(g);
}

inline u256 random_word(std::mt19937_64& g)
{
    u256 v = 0;
    for (int i = 0; i < 4; ++i)
        v = (v << 64) | g();
    return v;
}

}  // namespace aasim::test
