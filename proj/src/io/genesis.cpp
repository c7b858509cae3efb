#include <aasim/io/codec.hpp>
#include <aasim/io/genesis.hpp>
#include <aasim/world/program.hpp>

#include <fstream>
#include <map>

namespace aasim
{
nlohmann::json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in)
        throw Error{Errc::ParseError, "cannot open " + path.string()};
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw Error{Errc::ParseError, path.string() + ": " + e.what()};
    }
}

namespace
{
struct Pending
{
    const nlohmann::json* spec = nullptr;
    std::optional<Hash32> seed;
    std::string where;
};

Address read_addr(const nlohmann::json& j, const std::string& key, const std::string& where)
{
    const auto& v = io::require(j, key, where);
    return io::parse_field(v, where + "." + key,
        [](const nlohmann::json& x) { return Address::from_hex(x.get<std::string>()); });
}

BlockContext read_block(const nlohmann::json& j)
{
    BlockContext b;
    io::parse_field(j, "block", [&](const nlohmann::json& x) {
        b.number = x.value("number", b.number);
        b.timestamp = x.value("timestamp", b.timestamp);
        b.gas_limit = x.value("gas_limit", b.gas_limit);
        if (x.contains("seed"))
            b.seed = parse_u256(x.at("seed").get<std::string>());
        if (x.contains("proposer"))
            b.proposer = Address::from_hex(x.at("proposer").get<std::string>());
        return 0;
    });
    return b;
}

void load_account(WorldState& world, const Address& addr, const Pending& p)
{
    const auto& a = *p.spec;
    const auto& where = p.where;
    const Wei balance = a.contains("balance") ? io::amount(a, "balance", where) : Wei{0};
    const auto kind = a.value("kind", std::string{"eoa"});

    if (p.seed)
        world.create_eoa(*p.seed, balance);
    else
    {
        Account acc;
        acc.balance = balance;
        acc.nonce = a.value("nonce", uint64_t{0});
        if (kind == "contract")
        {
            acc.kind = AccountKind::Contract;
            acc.program = io::require(a, "program", where).get<std::string>();
            if (!world.programs().find(acc.program))
                throw Error{Errc::UnknownProgram, where + ".program: " + acc.program};
            if (a.contains("storage"))
                for (const auto& [k, v] : a.at("storage").items())
                {
                    const auto key = io::parse_field(nlohmann::json(k), where + ".storage",
                        [](const nlohmann::json& x) { return parse_u256(x.get<std::string>()); });
                    const auto value = io::parse_field(v, where + ".storage." + k,
                        [](const nlohmann::json& x) { return parse_u256(x.get<std::string>()); });
                    if (value != 0)
                        acc.storage[key] = value;
                }
        }
        else if (kind != "eoa")
            throw Error{Errc::ParseError, where + ".kind: expected 'eoa' or 'contract'"};
        world.put_account(addr, std::move(acc));
    }

    if (a.contains("wallet"))
    {
        const auto& w = a.at("wallet");
        WalletRecord rec{io::parse_field(io::require(w, "policy", where + ".wallet"),
                             where + ".wallet.policy", [](const nlohmann::json& x) {
                                 return policy_from_json(x);
                             }),
            std::nullopt};
        if (w.contains("recovery") && !w.at("recovery").is_null())
            rec.recovery = io::parse_field(w.at("recovery"), where + ".wallet.recovery",
                [](const nlohmann::json& x) { return recovery_from_json(x); });
        world.set_wallet(addr, std::move(rec));
    }
    if (a.contains("aa_nonce"))
        for (uint64_t i = a.at("aa_nonce").get<uint64_t>(); i > 0; --i)
            world.bump_aa_nonce(addr);
    if (a.contains("paymaster"))
    {
        const auto& pm = a.at("paymaster");
        PaymasterRecord rec;
        rec.policy = io::parse_field(io::require(pm, "policy", where + ".paymaster"),
            where + ".paymaster.policy",
            [](const nlohmann::json& x) { return paymaster_policy_from_json(x); });
        rec.owner = io::parse_field(io::require(pm, "owner", where + ".paymaster"),
            where + ".paymaster.owner",
            [](const nlohmann::json& x) { return PublicId::from_hex(x.get<std::string>()); });
        world.set_paymaster(addr, std::move(rec));
    }
    if (a.contains("deposit"))
    {
        const auto d = io::amount(a, "deposit", where);
        if (d > 0)
            world.deposit_credit(addr, d);
    }
    if (a.value("aggregator", false))
        world.register_aggregator(addr);
}
}  // namespace

WorldState load_genesis(const nlohmann::json& genesis,
    std::shared_ptr<const ProgramRegistry> programs, std::shared_ptr<SignatureScheme> scheme)
{
    if (!genesis.is_object())
        throw Error{Errc::ParseError, "genesis must be an object"};
    WorldState world{std::move(programs), scheme};
    if (genesis.contains("block"))
        world.set_block(read_block(genesis.at("block")));
    if (genesis.contains("clock"))
        world.set_clock(genesis.at("clock").get<uint64_t>());

    std::map<Address, Pending> ordered;
    if (genesis.contains("accounts"))
    {
        const auto& accounts = genesis.at("accounts");
        if (!accounts.is_array())
            throw Error{Errc::ParseError, "accounts: expected array"};
        for (size_t i = 0; i < accounts.size(); ++i)
        {
            const auto& a = accounts[i];
            Pending p{&a, std::nullopt, "accounts[" + std::to_string(i) + "]"};
            Address addr;
            if (a.contains("seed"))
            {
                p.seed = io::parse_field(a.at("seed"), p.where + ".seed",
                    [](const nlohmann::json& x) { return Hash32::from_hex(x.get<std::string>()); });
                addr = eoa_address(scheme->keygen(*p.seed).pub);
            }
            else
                addr = read_addr(a, "address", p.where);
            if (!ordered.emplace(addr, p).second)
                throw Error{Errc::AddressCollision, p.where + ": " + addr.hex()};
        }
    }
    for (const auto& [addr, p] : ordered)
        load_account(world, addr, p);

    if (genesis.contains("tokens"))
        for (const auto& t : genesis.at("tokens"))
            world.token_mint(io::require(t, "token", "tokens").get<std::string>(),
                read_addr(t, "holder", "tokens"), io::amount(t, "amount", "tokens"));
    if (genesis.contains("allowances"))
        for (const auto& t : genesis.at("allowances"))
            world.token_approve(io::require(t, "token", "allowances").get<std::string>(),
                read_addr(t, "owner", "allowances"), read_addr(t, "spender", "allowances"),
                io::amount(t, "amount", "allowances"));
    world.commit();
    return world;
}

WorldState load_genesis_file(const std::filesystem::path& path,
    std::shared_ptr<const ProgramRegistry> programs, std::shared_ptr<SignatureScheme> scheme)
{
    return load_genesis(read_json_file(path), std::move(programs), std::move(scheme));
}

}  // namespace aasim
