#include <aasim/hash.hpp>
#include <aasim/programs/builtin.hpp>
#include <aasim/userop/intent.hpp>

namespace aasim
{
namespace
{
u256 word(const Address& a)
{
    return a.to_word();
}

void only_self(CallContext& c)
{
    c.require(c.caller() == c.self(), "caller is not the account itself");
}

Bytes ret(const u256& v)
{
    return to_be_bytes(v);
}

Program counter()
{
    Program p{"counter"};
    p.on("increment()", [](CallContext& c) {
        c.sstore(0, c.sload(0) + 1);
        return Bytes{};
    });
    p.on("get()", [](CallContext& c) { return ret(c.sload(0)); });
    return p;
}

/// spin(n) performs n metered steps.
Program loop()
{
    Program p{"loop"};
    p.on("spin(uint256)", [](CallContext& c) {
        const u256 n = c.arg(0);
        for (u256 i = 0; i < n; ++i)
            c.step();
        return Bytes{};
    });
    return p;
}

/// dive(n) calls itself n more times. Slot 0 holds the deepest frame reached,
/// slot 1 the depth of the frame that first saw an inner call fail.
Program recursive()
{
    Program p{"recursive"};
    p.on("dive(uint256)", [](CallContext& c) {
        const u256 n = c.arg(0);
        if (n == 0)
        {
            c.sstore(0, c.depth());
            return Bytes{};
        }
        const auto r = c.call(c.self(), 0, abi::encode_call("dive(uint256)", {n - 1}));
        if (!r.ok() && c.sload(1) == 0)
            c.sstore(1, c.depth());
        return Bytes{};
    });
    return p;
}

void wallet_functions(Program& p)
{
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "pay(address,uint256)",
        [](CallContext& c) {
            only_self(c);
            const auto r = c.call(c.arg_address(0), c.arg(1));
            c.require(r.ok(), "payment failed");
            return Bytes{};
        },
        true);
    p.on(
        "send_token(bytes32,address,uint256)",
        [](CallContext& c) {
            only_self(c);
            c.token_send(unpack_symbol(c.arg(0)), c.arg_address(1), c.arg(2));
            return Bytes{};
        },
        true);
}

/// Default smart account. Only the account itself (that is, an operation that
/// passed its validation policy) may move funds.
Program smart_wallet()
{
    Program p{"smart_wallet"};
    wallet_functions(p);
    return p;
}

/// Wallet with a terminate entry point. Slot 0 optionally names an owner
/// allowed to terminate directly; otherwise only the account itself may.
Program selfdestruct_wallet()
{
    Program p{"selfdestruct_wallet"};
    wallet_functions(p);
    p.on(
        "terminate(address)",
        [](CallContext& c) {
            const u256 owner = c.sload(0);
            const bool allowed =
                c.caller() == c.self() || (owner != 0 && word(c.caller()) == owner);
            c.require(allowed, "not authorised to terminate");
            c.self_destruct(c.arg_address(0));
            return Bytes{};
        },
        true);
    return p;
}

Program plain(std::string name)
{
    Program p{std::move(name)};
    p.on_receive([](CallContext&) { return Bytes{}; });
    return p;
}

/// Constant-rate pool. Holds reserves of the wanted asset and pays out
/// floor(amount * num / den) per swap.
Program swap_pool()
{
    Program p{"swap_pool"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "swap(uint256)",
        [](CallContext& c) {
            const u256 amount = c.arg(0);
            const auto give = unpack_symbol(c.sload(pool_slots::GIVE));
            const auto want = unpack_symbol(c.sload(pool_slots::WANT));
            Pool pool;
            pool.rate = {c.sload(pool_slots::RATE_NUM), c.sload(pool_slots::RATE_DEN)};
            const u256 out = pool.quote(amount);

            if (give == NATIVE_ASSET)
                c.require(c.value() == amount, "native input must equal amount");
            else
            {
                c.require(c.value() == 0, "unexpected value");
                c.token_pull(give, amount);
            }
            if (want == NATIVE_ASSET)
                c.require(c.send(c.caller(), out), "native payout failed");
            else
                c.token_send(want, c.caller(), out);
            c.emit("Swap", {amount, out});
            return ret(out);
        },
        true);
    return p;
}

/// Pays its whole balance to the first caller presenting the answer in slot 0.
Program bounty()
{
    Program p{"bounty"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "claim(uint256)",
        [](CallContext& c) {
            c.require(c.sload(1) == 0, "already claimed");
            c.require(c.arg(0) == c.sload(0), "wrong answer");
            c.sstore(1, word(c.caller()));
            c.require(c.send(c.caller(), c.self_balance()), "payout failed");
            return Bytes{};
        },
        true);
    return p;
}

/// Pays the pot when the visible timestamp is a multiple of 15. Slot 0: stake.
Program time_lottery()
{
    Program p{"time_lottery"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "play()",
        [](CallContext& c) {
            c.require(c.value() == c.sload(0), "wrong stake");
            if (c.timestamp() % 15 == 0)
                c.require(c.send(c.caller(), c.self_balance()), "payout failed");
            return Bytes{};
        },
        true);
    return p;
}

/// Token whose balances live in storage keyed by holder address. Arguments
/// are read with zero padding past the end of input.
Program simple_token()
{
    Program p{"simple_token"};
    p.on("transfer(address,uint256)", [](CallContext& c) {
        const u256 from = word(c.caller());
        const u256 to = word(c.arg_address(0));
        const u256 amount = c.arg(1);
        c.require(c.sload(from) >= amount, "insufficient token balance");
        c.sstore(from, c.sload(from) - amount);
        c.sstore(to, c.sload(to) + amount);
        return Bytes{};
    });
    p.on("balance_of(address)", [](CallContext& c) { return ret(c.sload(word(c.arg_address(0)))); });
    return p;
}

/// Loops over slot 0 entries before marking slot 1 done.
Program distributor()
{
    Program p{"distributor"};
    p.on("payout()", [](CallContext& c) {
        const u256 n = c.sload(0);
        for (u256 i = 0; i < n; ++i)
            c.step();
        c.sstore(1, 1);
        return Bytes{};
    });
    return p;
}

/// Sends before zeroing the caller's balance.
Program vault()
{
    Program p{"vault"};
    p.on("deposit()", [](CallContext& c) {
        const u256 who = word(c.caller());
        c.sstore(who, c.sload(who) + c.value());
        return Bytes{};
    });
    p.on(
        "withdraw()",
        [](CallContext& c) {
            const u256 who = word(c.caller());
            const u256 amount = c.sload(who);
            c.require(amount > 0, "nothing to withdraw");
            c.require(c.send(c.caller(), amount), "send failed");
            c.sstore(who, 0);
            return Bytes{};
        },
        true);
    return p;
}

/// Slot 0: vault. attack() deposits the value and withdraws; the receive hook
/// re-enters withdraw while the vault still holds at least the stake.
Program reentrant_attacker()
{
    Program p{"reentrant_attacker"};
    p.on(
        "attack()",
        [](CallContext& c) {
            const Address vault = Address::from_word(c.sload(0));
            c.sstore(2, c.value());
            c.require(c.call(vault, c.value(), abi::encode_call("deposit()", {})).ok(),
                "deposit failed");
            c.require(c.call(vault, 0, abi::encode_call("withdraw()", {})).ok(), "withdraw failed");
            return Bytes{};
        },
        true);
    p.on_receive([](CallContext& c) {
        const Address vault = Address::from_word(c.sload(0));
        const u256 stake = c.sload(2);
        if (stake > 0 && c.balance(vault) >= stake)
            c.call(vault, 0, abi::encode_call("withdraw()", {}));
        return Bytes{};
    });
    return p;
}

/// Accepts value and has no way to spend it.
Program piggy_vault()
{
    Program p{"piggy_vault"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on("deposit()", [](CallContext& c) {
        c.emit("Deposit", {word(c.caller()), c.value()});
        return Bytes{};
    });
    return p;
}

/// Meta-transaction wallet. relay checks the fee is covered, runs the
/// payload, then tries to pay the relayer without checking the result.
Program meta_wallet()
{
    Program p{"meta_wallet"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "relay(address,uint256,uint256)",
        [](CallContext& c) {
            const u256 fee = c.arg(2);
            c.require(c.self_balance() >= fee, "cannot cover relayer fee");
            c.call(c.arg_address(0), c.arg(1));
            c.send(c.caller(), fee);
            return Bytes{};
        },
        true);
    return p;
}

/// Pays out on a valid signature from the key in slot 0 over (to, amount).
/// The signed message carries no nonce.
Program payment_proxy()
{
    Program p{"payment_proxy"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "pay(address,uint256,bytes32)",
        [](CallContext& c) {
            const Address to = c.arg_address(0);
            const u256 amount = c.arg(1);
            PublicId signer;
            signer.bytes = Hash32::from_word(c.sload(0)).bytes;
            const auto ok =
                c.verify_signature(signer, payment_digest(to, amount), Hash32::from_word(c.arg(2)));
            c.require(ok, "bad signature");
            c.require(c.send(to, amount), "payment failed");
            return Bytes{};
        },
        true);
    return p;
}

/// Authorises by transaction origin. Slot 0: owner.
Program origin_wallet()
{
    Program p{"origin_wallet"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "transfer(address,uint256)",
        [](CallContext& c) {
            c.require(word(c.origin()) == c.sload(0), "origin is not the owner");
            c.require(c.send(c.arg_address(0), c.arg(1)), "transfer failed");
            return Bytes{};
        },
        true);
    return p;
}

/// Slot 0: target origin_wallet, slot 1: where the loot goes.
Program phishing()
{
    Program p{"phishing"};
    p.on("claim_prize()", [](CallContext& c) {
        const Address wallet = Address::from_word(c.sload(0));
        const u256 loot = c.balance(wallet);
        c.call(wallet, 0, abi::encode_call("transfer(address,uint256)", {c.sload(1), loot}));
        return Bytes{};
    });
    return p;
}

/// Anyone may pay out of this contract.
Program payout()
{
    Program p{"payout"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "pay(address,uint256)",
        [](CallContext& c) {
            c.require(c.send(c.arg_address(0), c.arg(1)), "payment failed");
            return Bytes{};
        },
        true);
    return p;
}

/// Pays the pot when guess == block seed mod 10. Slot 0: stake.
Program seed_lottery()
{
    Program p{"seed_lottery"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "play(uint256)",
        [](CallContext& c) {
            c.require(c.value() == c.sload(0), "wrong stake");
            if (c.arg(0) == c.block_seed() % 10)
                c.require(c.send(c.caller(), c.self_balance()), "payout failed");
            return Bytes{};
        },
        true);
    return p;
}

/// total = 2 * value wraps modulo 2^256 before the balance check.
Program batch_token()
{
    Program p{"batch_token"};
    p.on("batch_transfer(address,address,uint256)", [](CallContext& c) {
        const u256 from = word(c.caller());
        const u256 value = c.arg(2);
        const u256 total = value * 2;
        c.require(c.sload(from) >= total, "insufficient token balance");
        c.sstore(from, c.sload(from) - total);
        for (size_t i = 0; i < 2; ++i)
        {
            const u256 to = word(c.arg_address(i));
            c.sstore(to, c.sload(to) + value);
        }
        return Bytes{};
    });
    p.on("balance_of(address)", [](CallContext& c) { return ret(c.sload(word(c.arg_address(0)))); });
    return p;
}

/// Slot 0: highest bidder, slot 1: highest bid. The refund result is ignored.
Program auction()
{
    Program p{"auction"};
    p.on(
        "bid()",
        [](CallContext& c) {
            c.require(c.value() > c.sload(1), "bid too low");
            const u256 previous = c.sload(0);
            if (previous != 0)
                c.send(Address::from_word(previous), c.sload(1));
            c.sstore(0, word(c.caller()));
            c.sstore(1, c.value());
            return Bytes{};
        },
        true);
    return p;
}

/// dive(n, target, amount) nests n frames, then bids `amount` on target.
Program deep_caller()
{
    Program p{"deep_caller"};
    p.on_receive([](CallContext&) { return Bytes{}; });
    p.on(
        "dive(uint256,address,uint256)",
        [](CallContext& c) {
            const u256 n = c.arg(0);
            if (n > 0)
                c.call(c.self(), 0,
                    abi::encode_call("dive(uint256,address,uint256)", {n - 1, c.arg(1), c.arg(2)}));
            else
                c.call(c.arg_address(1), c.arg(2), abi::encode_call("bid()", {}));
            return Bytes{};
        },
        true);
    return p;
}
}  // namespace

Hash32 payment_digest(const Address& to, const u256& amount)
{
    return Encoder{"payment"}.address(to).word(amount).digest();
}

ProgramRegistry builtin_programs()
{
    ProgramRegistry r;
    r.add(counter());
    r.add(loop());
    r.add(recursive());
    r.add(smart_wallet());
    r.add(selfdestruct_wallet());
    r.add(plain("paymaster"));
    r.add(plain("aggregator"));
    r.add(swap_pool());
    r.add(bounty());
    r.add(time_lottery());
    r.add(simple_token());
    r.add(distributor());
    r.add(vault());
    r.add(reentrant_attacker());
    r.add(piggy_vault());
    r.add(meta_wallet());
    r.add(payment_proxy());
    r.add(origin_wallet());
    r.add(phishing());
    r.add(payout());
    r.add(seed_lottery());
    r.add(batch_token());
    r.add(auction());
    r.add(deep_caller());
    return r;
}

std::shared_ptr<const ProgramRegistry> builtin_registry()
{
    static const auto registry = std::make_shared<const ProgramRegistry>(builtin_programs());
    return registry;
}

}  // namespace aasim
