#include <aasim/hash.hpp>
#include <aasim/world/program.hpp>
#include <aasim/world/state.hpp>

namespace aasim
{
Wei DepositLedger::of(const Address& a) const
{
    const auto it = deposits.find(a);
    return it == deposits.end() ? Wei{0} : it->second;
}

Wei DepositLedger::total() const
{
    Wei sum = escrow;
    for (const auto& [_, v] : deposits)
        sum += v;
    return sum;
}

u256 TokenLedger::balance(const std::string& token, const Address& holder) const
{
    const auto t = balances.find(token);
    if (t == balances.end())
        return 0;
    const auto it = t->second.find(holder);
    return it == t->second.end() ? u256{0} : it->second;
}

u256 TokenLedger::allowance(
    const std::string& token, const Address& owner, const Address& spender) const
{
    const auto t = allowances.find(token);
    if (t == allowances.end())
        return 0;
    const auto it = t->second.find({owner, spender});
    return it == t->second.end() ? u256{0} : it->second;
}

u256 TokenLedger::supply(const std::string& token) const
{
    u256 sum = 0;
    if (const auto t = balances.find(token); t != balances.end())
        for (const auto& [_, v] : t->second)
            sum += v;
    return sum;
}

Address eoa_address(const PublicId& pub)
{
    const auto h = Encoder{"eoa-address"}.bytes(pub.view()).digest();
    return Address::from_bytes(BytesView{h.bytes}.subspan(12));
}

Address contract_address(const Address& deployer, uint64_t deployer_nonce)
{
    const auto h = Encoder{"create"}.address(deployer).u64(deployer_nonce).digest();
    return Address::from_bytes(BytesView{h.bytes}.subspan(12));
}

WorldState::WorldState(
    std::shared_ptr<const ProgramRegistry> programs, std::shared_ptr<SignatureScheme> scheme)
  : programs_{std::move(programs)}, scheme_{std::move(scheme)}
{
    if (!programs_ || !scheme_)
        throw Error{Errc::InternalInvariantViolation, "world state needs programs and a scheme"};
}

Address WorldState::create_eoa(const Hash32& seed, const Wei& initial_balance)
{
    if (used_seeds_.contains(seed))
        throw Error{Errc::DuplicateSeed, seed.hex()};
    const auto keys = scheme_->keygen(seed);
    const auto addr = eoa_address(keys.pub);
    if (accounts_.contains(addr))
        throw Error{Errc::AddressCollision, addr.hex()};
    used_seeds_.insert(seed);
    record([seed](WorldState& w) { w.used_seeds_.erase(seed); });
    Account acc;
    acc.balance = initial_balance;
    put_account(addr, std::move(acc));
    return addr;
}

void WorldState::put_account(const Address& addr, Account account)
{
    if (accounts_.contains(addr))
        throw Error{Errc::AddressCollision, addr.hex()};
    if (account.is_contract() && !programs_->find(account.program))
        throw Error{Errc::UnknownProgram, account.program};
    if (!account.is_contract() && (!account.program.empty() || !account.storage.empty()))
        throw Error{Errc::InternalInvariantViolation, "EOA with program or storage"};
    accounts_.emplace(addr, std::move(account));
    record([addr](WorldState& w) { w.accounts_.erase(addr); });
}

const Account* WorldState::find(const Address& addr) const
{
    const auto it = accounts_.find(addr);
    return it == accounts_.end() ? nullptr : &it->second;
}

const Account& WorldState::account(const Address& addr) const
{
    if (const auto* a = find(addr))
        return *a;
    throw Error{Errc::UnknownAccount, addr.hex()};
}

Account& WorldState::mutable_account(const Address& addr)
{
    const auto it = accounts_.find(addr);
    if (it == accounts_.end())
        throw Error{Errc::UnknownAccount, addr.hex()};
    return it->second;
}

Wei WorldState::balance(const Address& addr) const
{
    const auto* a = find(addr);
    return a ? a->balance : Wei{0};
}

void WorldState::credit(const Address& addr, const Wei& amount)
{
    if (!exists(addr))
        put_account(addr, Account{});
    auto& acc = mutable_account(addr);
    if (amount > U256_MAX - acc.balance)
        throw Error{Errc::ArithmeticOverflow, "balance overflow at " + addr.hex()};
    acc.balance += amount;
    record([addr, amount](WorldState& w) { w.accounts_.at(addr).balance -= amount; });
}

void WorldState::debit(const Address& addr, const Wei& amount)
{
    auto& acc = mutable_account(addr);
    if (acc.balance < amount)
        throw Error{Errc::InsufficientFunds,
            addr.hex() + " has " + to_dec(acc.balance) + ", needs " + to_dec(amount)};
    acc.balance -= amount;
    record([addr, amount](WorldState& w) { w.accounts_.at(addr).balance += amount; });
}

void WorldState::transfer(const Address& from, const Address& to, const Wei& amount)
{
    debit(from, amount);
    credit(to, amount);
}

void WorldState::increment_nonce(const Address& addr)
{
    auto& acc = mutable_account(addr);
    ++acc.nonce;
    record([addr](WorldState& w) { --w.accounts_.at(addr).nonce; });
}

u256 WorldState::sload(const Address& addr, const u256& key) const
{
    const auto* acc = find(addr);
    if (!acc)
        return 0;
    const auto it = acc->storage.find(key);
    return it == acc->storage.end() ? u256{0} : it->second;
}

void WorldState::sstore(const Address& addr, const u256& key, const u256& value)
{
    auto& storage = mutable_account(addr).storage;
    std::optional<u256> previous;
    if (const auto it = storage.find(key); it != storage.end())
        previous = it->second;
    if (value == 0)
        storage.erase(key);
    else
        storage[key] = value;
    record([addr, key, previous](WorldState& w) {
        auto& s = w.accounts_.at(addr).storage;
        if (previous)
            s[key] = *previous;
        else
            s.erase(key);
    });
}

void WorldState::destroy(const Address& addr)
{
    const auto it = accounts_.find(addr);
    if (it == accounts_.end())
        throw Error{Errc::UnknownAccount, addr.hex()};
    if (it->second.balance != 0)
        throw Error{Errc::InternalInvariantViolation, "destroying an account that holds value"};
    Account saved = std::move(it->second);
    accounts_.erase(it);
    std::optional<WalletRecord> wallet;
    if (const auto w = wallets_.find(addr); w != wallets_.end())
    {
        wallet = std::move(w->second);
        wallets_.erase(w);
    }
    record([addr, saved = std::move(saved), wallet = std::move(wallet)](WorldState& w) {
        w.accounts_.emplace(addr, saved);
        if (wallet)
            w.wallets_.emplace(addr, *wallet);
    });
}

void WorldState::token_mint(const std::string& token, const Address& to, const u256& amount)
{
    auto& bal = tokens_.balances[token][to];
    if (amount > U256_MAX - bal)
        throw Error{Errc::ArithmeticOverflow, "token supply overflow"};
    bal += amount;
    record([token, to, amount](WorldState& w) { w.tokens_.balances[token][to] -= amount; });
}

void WorldState::token_transfer(
    const std::string& token, const Address& from, const Address& to, const u256& amount)
{
    auto& src = tokens_.balances[token][from];
    if (src < amount)
        throw Error{Errc::InsufficientTokenBalance,
            from.hex() + " holds " + to_dec(src) + " " + token + ", needs " + to_dec(amount)};
    src -= amount;
    tokens_.balances[token][to] += amount;
    record([token, from, to, amount](WorldState& w) {
        w.tokens_.balances[token][to] -= amount;
        w.tokens_.balances[token][from] += amount;
    });
}

void WorldState::token_approve(
    const std::string& token, const Address& owner, const Address& spender, const u256& amount)
{
    auto& slot = tokens_.allowances[token][{owner, spender}];
    const u256 previous = slot;
    slot = amount;
    record([token, owner, spender, previous](WorldState& w) {
        w.tokens_.allowances[token][{owner, spender}] = previous;
    });
}

void WorldState::token_spend_allowance(
    const std::string& token, const Address& owner, const Address& spender, const u256& amount)
{
    const u256 current = tokens_.allowance(token, owner, spender);
    if (current < amount)
        throw Error{Errc::InsufficientAllowance,
            "allowance " + to_dec(current) + " < " + to_dec(amount) + " " + token};
    token_approve(token, owner, spender, current - amount);
}

void WorldState::deposit_credit(const Address& addr, const Wei& amount)
{
    deposits_.deposits[addr] += amount;
    record([addr, amount](WorldState& w) { w.deposits_.deposits[addr] -= amount; });
}

void WorldState::deposit_debit(const Address& addr, const Wei& amount)
{
    auto& d = deposits_.deposits[addr];
    if (d < amount)
        throw Error{Errc::InsufficientDeposit,
            addr.hex() + " deposit " + to_dec(d) + " < " + to_dec(amount)};
    d -= amount;
    record([addr, amount](WorldState& w) { w.deposits_.deposits[addr] += amount; });
}

void WorldState::escrow_add(const Wei& amount)
{
    deposits_.escrow += amount;
    record([amount](WorldState& w) { w.deposits_.escrow -= amount; });
}

void WorldState::escrow_remove(const Wei& amount)
{
    if (deposits_.escrow < amount)
        throw Error{Errc::InternalInvariantViolation, "escrow underflow"};
    deposits_.escrow -= amount;
    record([amount](WorldState& w) { w.deposits_.escrow += amount; });
}

void WorldState::bump_withdraw_nonce(const Address& addr)
{
    ++deposits_.withdraw_nonces[addr];
    record([addr](WorldState& w) { --w.deposits_.withdraw_nonces[addr]; });
}

uint64_t WorldState::aa_nonce(const Address& sender) const
{
    const auto it = aa_nonces_.find(sender);
    return it == aa_nonces_.end() ? 0 : it->second;
}

void WorldState::bump_aa_nonce(const Address& sender)
{
    ++aa_nonces_[sender];
    record([sender](WorldState& w) { --w.aa_nonces_[sender]; });
}

const WalletRecord* WorldState::wallet(const Address& addr) const
{
    const auto it = wallets_.find(addr);
    return it == wallets_.end() ? nullptr : &it->second;
}

void WorldState::set_wallet(const Address& addr, WalletRecord record_value)
{
    check_policy(record_value.policy);
    if (record_value.recovery)
        check_recovery_config(*record_value.recovery);
    std::optional<WalletRecord> previous;
    if (const auto it = wallets_.find(addr); it != wallets_.end())
        previous = it->second;
    wallets_.insert_or_assign(addr, std::move(record_value));
    record([addr, previous](WorldState& w) {
        if (previous)
            w.wallets_.insert_or_assign(addr, *previous);
        else
            w.wallets_.erase(addr);
    });
}

const PaymasterRecord* WorldState::paymaster(const Address& addr) const
{
    const auto it = paymasters_.find(addr);
    return it == paymasters_.end() ? nullptr : &it->second;
}

void WorldState::set_paymaster(const Address& addr, PaymasterRecord record_value)
{
    check_policy(record_value.policy);
    std::optional<PaymasterRecord> previous;
    if (const auto it = paymasters_.find(addr); it != paymasters_.end())
        previous = it->second;
    paymasters_.insert_or_assign(addr, std::move(record_value));
    record([addr, previous](WorldState& w) {
        if (previous)
            w.paymasters_.insert_or_assign(addr, *previous);
        else
            w.paymasters_.erase(addr);
    });
}

void WorldState::register_aggregator(const Address& addr)
{
    if (aggregators_.insert(addr).second)
        record([addr](WorldState& w) { w.aggregators_.erase(addr); });
}

void WorldState::advance_time(uint64_t dt)
{
    clock_ += dt;
    block_.timestamp += dt;
}

void WorldState::emit(LogRecord log)
{
    logs_.push_back(std::move(log));
    record([](WorldState& w) { w.logs_.pop_back(); });
}

void WorldState::revert_to(Snapshot s)
{
    if (s > journal_.size())
        throw Error{Errc::InternalInvariantViolation, "revert past a commit point"};
    while (journal_.size() > s)
    {
        auto undo = std::move(journal_.back());
        journal_.pop_back();
        undo(*this);
    }
}

Wei WorldState::native_total() const
{
    Wei sum = deposits_.total();
    for (const auto& [_, acc] : accounts_)
        sum += acc.balance;
    return sum;
}

Hash32 WorldState::fingerprint() const
{
    Encoder enc{"world-state"};
    enc.u64(accounts_.size());
    for (const auto& [addr, acc] : accounts_)
    {
        enc.address(addr).u64(static_cast<uint64_t>(acc.kind)).word(acc.balance).u64(acc.nonce);
        enc.str(acc.program).u64(acc.storage.size());
        for (const auto& [k, v] : acc.storage)
            enc.word(k).word(v);
    }
    for (const auto& [token, holders] : tokens_.balances)
    {
        for (const auto& [holder, amount] : holders)
            if (amount != 0)
                enc.str(token).address(holder).word(amount);
    }
    for (const auto& [token, entries] : tokens_.allowances)
    {
        for (const auto& [pair, amount] : entries)
            if (amount != 0)
                enc.str(token).address(pair.first).address(pair.second).word(amount);
    }
    enc.word(deposits_.escrow);
    for (const auto& [addr, amount] : deposits_.deposits)
        if (amount != 0)
            enc.address(addr).word(amount);
    for (const auto& [addr, n] : deposits_.withdraw_nonces)
        if (n != 0)
            enc.address(addr).u64(n);
    for (const auto& [addr, n] : aa_nonces_)
        if (n != 0)
            enc.address(addr).u64(n);
    for (const auto& [addr, rec] : wallets_)
    {
        enc.address(addr).str(policy_to_json(rec.policy).dump());
        if (rec.recovery)
            enc.str(recovery_to_json(*rec.recovery).dump());
    }
    for (const auto& [addr, rec] : paymasters_)
        enc.address(addr).str(paymaster_policy_to_json(rec.policy).dump()).word(rec.reserved);
    for (const auto& addr : aggregators_)
        enc.address(addr);
    enc.u64(block_.number).u64(block_.timestamp).word(block_.seed).address(block_.proposer);
    enc.u64(block_.gas_limit).u64(clock_);
    enc.u64(logs_.size());
    for (const auto& log : logs_)
    {
        enc.address(log.emitter).str(log.topic);
        for (const auto& d : log.data)
            enc.word(d);
    }
    return enc.digest();
}

}  // namespace aasim
