#include <aasim/bundler/bundler.hpp>
#include <aasim/harness/demo.hpp>
#include <aasim/hash.hpp>
#include <aasim/io/genesis.hpp>
#include <aasim/programs/builtin.hpp>
#include <aasim/userop/intent.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <iomanip>
#include <sstream>

namespace aasim
{
namespace
{
using nlohmann::json;
using SignedInt = boost::multiprecision::cpp_int;

constexpr const char* USDC = "USDC";
const u256 ETH = u256{1'000'000'000'000'000'000ull};
// Wei per USDC base unit (6 decimals): 1 USDC = 6e14 wei, so 2,000 USDC = 1.2 ETH.
constexpr uint64_t POOL_A_RATE = 600'000'000;
constexpr uint64_t POOL_B_RATE = 590'000'000;

KeyPair key(SignatureScheme& scheme, std::string_view name)
{
    return scheme.keygen(Encoder{"demo-key"}.str(name).digest());
}

Address fixed(std::string_view name)
{
    return Address::from_bytes(Encoder{"genesis-contract"}.str(name).digest().view().subspan(12));
}

json pool(const Address& at, uint64_t id, uint64_t rate)
{
    return {{"address", at.hex()},
        {"kind", "contract"},
        {"program", "swap_pool"},
        {"balance", to_dec(10 * ETH)},
        {"storage",
            {{std::to_string(pool_slots::ID), std::to_string(id)},
                {std::to_string(pool_slots::GIVE), to_dec(pack_symbol(USDC))},
                {std::to_string(pool_slots::WANT), to_dec(pack_symbol(NATIVE_ASSET))},
                {std::to_string(pool_slots::RATE_NUM), std::to_string(rate)},
                {std::to_string(pool_slots::RATE_DEN), "1"}}}};
}

SignedInt native(const WorldState& w, const Address& a)
{
    return SignedInt{w.balance(a)} + SignedInt{w.deposits().of(a)};
}

SignedInt usdc(const WorldState& w, const Address& a)
{
    return SignedInt{w.tokens().balance(USDC, a)};
}
}  // namespace

DemoReport run_usdc_demo()
{
    auto scheme = std::make_shared<SimulatedScheme>();
    const auto alice = key(*scheme, "alice");
    const auto visa = key(*scheme, "visa");
    const InitCode init{"smart_wallet", alice.pub, Encoder{"smart-account-salt"}.str("alice").digest()};
    const auto account = counterfactual_address(init);
    const auto paymaster = fixed("visa-paymaster");
    const auto pool_a = fixed("pool-a");
    const auto pool_b = fixed("pool-b");
    const auto bundler_addr = fixed("bundler");

    const json genesis = {
        {"block", {{"number", 1}, {"timestamp", 1000}, {"seed", "0"}, {"gas_limit", 30'000'000}}},
        {"clock", 1000},
        {"accounts",
            {{{"address", account.hex()},
                 {"kind", "contract"},
                 {"program", "smart_wallet"},
                 {"balance", "0"},
                 {"wallet", {{"policy", {{"type", "single_key"}, {"owner", alice.pub.hex()}}}}}},
                {{"address", paymaster.hex()},
                    {"kind", "contract"},
                    {"program", "paymaster"},
                    {"balance", "0"},
                    {"deposit", to_dec(ETH)},
                    {"paymaster",
                        {{"owner", visa.pub.hex()},
                            {"policy",
                                {{"type", "token_gas"},
                                    {"token", USDC},
                                    {"rate", {{"num", std::to_string(POOL_A_RATE)}, {"den", "1"}}}}}}}},
                pool(pool_a, 1, POOL_A_RATE), pool(pool_b, 2, POOL_B_RATE)}},
        {"tokens", {{{"token", USDC}, {"holder", account.hex()}, {"amount", "2010000000"}}}},
        {"allowances",
            {{{"token", USDC}, {"owner", account.hex()}, {"spender", paymaster.hex()},
                {"amount", "10000000"}}}}};
    auto world = load_genesis(genesis, builtin_registry(), scheme);
    const auto before = world;

    const EntryPoint ep;
    UserOperation op;
    op.sender = account;
    op.nonce = world.aa_nonce(account);
    const Intent intent{USDC, u256{2'000'000'000}, std::string{NATIVE_ASSET},
        IntentObjective::MaximizeOutput};
    op.payload = intent;
    op.call_gas_limit = 100'000;
    op.verification_gas_limit = 100'000;
    op.pre_verification_gas = 21'000;
    op.max_fee_per_gas = 1'000'000'000;
    op.paymaster_and_data = PaymasterAndData{paymaster, {}};
    op = ep.sign(std::move(op), alice.secret, *scheme);

    DemoReport report;
    const auto market = market_from_world(world);
    const auto& best = best_pool(intent, market);
    report.chosen_pool = best.id;
    report.quote = best.quote(intent.give_amount);

    AltMempool pool{builtin_registry()};
    const auto submitted = pool.submit(op);
    if (!submitted.accepted())
        throw Error{Errc::InternalInvariantViolation, "demo op refused: " + submitted.reason()};
    const Bundler bundler{BundlerConfig{16, bundler_addr, false}, ep};
    const auto bundle = bundler.select_and_order(pool, world);
    const auto receipt = bundler.submit_bundle(bundle, world);
    if (receipt.ops.size() != 1)
        throw Error{Errc::InternalInvariantViolation, "demo op not bundled"};
    report.receipt = receipt.ops.front();

    const std::pair<const char*, Address> rows[] = {{"user account", account},
        {"paymaster", paymaster}, {"pool 1", pool_a}, {"pool 2", pool_b}, {"bundler", bundler_addr}};
    for (const auto& [name, addr] : rows)
        report.deltas.push_back({name, addr, (native(world, addr) - native(before, addr)).str(),
            (usdc(world, addr) - usdc(before, addr)).str()});
    return report;
}

nlohmann::json demo_to_json(const DemoReport& r)
{
    auto deltas = json::array();
    for (const auto& d : r.deltas)
        deltas.push_back({{"name", d.name}, {"address", d.address.hex()},
            {"native_delta", d.native_delta}, {"usdc_delta", d.usdc_delta}});
    return {{"chosen_pool", r.chosen_pool},
        {"quote_wei", to_dec(r.quote)},
        {"receipt", receipt_to_json(r.receipt)},
        {"deltas", deltas}};
}

std::string demo_to_text(const DemoReport& r)
{
    std::ostringstream out;
    out << "intent: give 2000 USDC, want max ETH\n";
    out << "chosen pool " << r.chosen_pool << ", quote " << to_dec(r.quote) << " wei\n";
    out << "op " << to_string(r.receipt.phase_reached) << ", gas cost "
        << to_dec(r.receipt.actual_gas_cost) << " wei";
    if (r.receipt.settlement)
        out << ", paid as " << to_dec(r.receipt.settlement->tokens_charged) << " USDC units";
    out << "\n\n";
    out << std::left << std::setw(14) << "account" << std::right << std::setw(24) << "ETH (wei)"
        << std::setw(16) << "USDC (units)" << "\n";
    for (const auto& d : r.deltas)
        out << std::left << std::setw(14) << d.name << std::right << std::setw(24) << d.native_delta
            << std::setw(16) << d.usdc_delta << "\n";
    return out.str();
}

}  // namespace aasim
