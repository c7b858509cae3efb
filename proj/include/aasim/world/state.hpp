// Deterministic ledger: accounts, contract storage, token balances and the
// EntryPoint-held deposits, with a journal for nested reverts.
#pragma once

#include <aasim/common.hpp>
#include <aasim/crypto/signature.hpp>
#include <aasim/paymaster/policy.hpp>
#include <aasim/wallet/policy.hpp>
#include <aasim/world/block.hpp>
#include <aasim/world/tokens.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace aasim
{
class ProgramRegistry;

enum class AccountKind
{
    ExternallyOwned,
    Contract
};

struct Account
{
    AccountKind kind = AccountKind::ExternallyOwned;
    Wei balance = 0;
    uint64_t nonce = 0;
    /// Registry key of the handler program. Empty for EOAs.
    std::string program;
    std::map<u256, u256> storage;

    bool is_contract() const noexcept { return kind == AccountKind::Contract; }
    bool operator==(const Account&) const = default;
};

struct LogRecord
{
    Address emitter{};
    std::string topic;
    std::vector<u256> data;

    bool operator==(const LogRecord&) const = default;
};

/// Wei held by the EntryPoint on behalf of accounts and paymasters.
struct DepositLedger
{
    std::map<Address, Wei> deposits;
    /// Replay counter for authorised withdrawals.
    std::map<Address, uint64_t> withdraw_nonces;
    /// Prefunds reserved from sender balances while a bundle is in flight.
    Wei escrow = 0;

    Wei of(const Address& a) const;
    Wei total() const;
};

/// Smart-account validation state.
struct WalletRecord
{
    ValidationPolicy policy;
    std::optional<RecoveryConfig> recovery;
};

Address eoa_address(const PublicId& pub);
Address contract_address(const Address& deployer, uint64_t deployer_nonce);

class WorldState
{
public:
    using Snapshot = size_t;

    WorldState(std::shared_ptr<const ProgramRegistry> programs,
        std::shared_ptr<SignatureScheme> scheme);

    const ProgramRegistry& programs() const noexcept { return *programs_; }
    std::shared_ptr<const ProgramRegistry> programs_ptr() const noexcept { return programs_; }
    SignatureScheme& scheme() const noexcept { return *scheme_; }
    std::shared_ptr<SignatureScheme> scheme_ptr() const noexcept { return scheme_; }

    // Accounts

    /// New EOA whose key and address derive from `seed`. Throws DuplicateSeed.
    Address create_eoa(const Hash32& seed, const Wei& initial_balance);
    /// Inserts an account at `addr`. Throws AddressCollision.
    void put_account(const Address& addr, Account account);
    const Account* find(const Address& addr) const;
    const Account& account(const Address& addr) const;
    bool exists(const Address& addr) const { return find(addr) != nullptr; }
    Wei balance(const Address& addr) const;
    const std::map<Address, Account>& accounts() const noexcept { return accounts_; }

    /// Creates a keyless EOA when `addr` does not exist yet.
    void credit(const Address& addr, const Wei& amount);
    /// Throws InsufficientFunds.
    void debit(const Address& addr, const Wei& amount);
    void transfer(const Address& from, const Address& to, const Wei& amount);
    void increment_nonce(const Address& addr);
    u256 sload(const Address& addr, const u256& key) const;
    void sstore(const Address& addr, const u256& key, const u256& value);
    /// Removes the account; remaining balance must have been moved out first.
    void destroy(const Address& addr);

    // Tokens

    const TokenLedger& tokens() const noexcept { return tokens_; }
    void token_mint(const std::string& token, const Address& to, const u256& amount);
    /// Throws InsufficientTokenBalance.
    void token_transfer(
        const std::string& token, const Address& from, const Address& to, const u256& amount);
    void token_approve(
        const std::string& token, const Address& owner, const Address& spender, const u256& amount);
    /// Throws InsufficientAllowance.
    void token_spend_allowance(
        const std::string& token, const Address& owner, const Address& spender, const u256& amount);

    // EntryPoint ledgers

    const DepositLedger& deposits() const noexcept { return deposits_; }
    void deposit_credit(const Address& addr, const Wei& amount);
    /// Throws InsufficientDeposit.
    void deposit_debit(const Address& addr, const Wei& amount);
    void escrow_add(const Wei& amount);
    void escrow_remove(const Wei& amount);
    void bump_withdraw_nonce(const Address& addr);

    uint64_t aa_nonce(const Address& sender) const;
    void bump_aa_nonce(const Address& sender);

    const WalletRecord* wallet(const Address& addr) const;
    void set_wallet(const Address& addr, WalletRecord record);

    const PaymasterRecord* paymaster(const Address& addr) const;
    void set_paymaster(const Address& addr, PaymasterRecord record);

    bool is_aggregator(const Address& addr) const { return aggregators_.contains(addr); }
    void register_aggregator(const Address& addr);

    // Context

    const BlockContext& block() const noexcept { return block_; }
    void set_block(const BlockContext& block) { block_ = block; }
    /// Honest simulation clock. Unlike block.timestamp it is not proposer-settable.
    uint64_t clock() const noexcept { return clock_; }
    void set_clock(uint64_t t) { clock_ = t; }
    /// Advances both the clock and the block timestamp.
    void advance_time(uint64_t dt);

    void emit(LogRecord log);
    const std::vector<LogRecord>& logs() const noexcept { return logs_; }

    // Journal

    Snapshot snapshot() const noexcept { return journal_.size(); }
    void revert_to(Snapshot s);
    /// Drops undo history; subsequent reverts cannot cross this point.
    void commit() { journal_.clear(); }

    /// Σ account balances + Σ deposits + escrow. Constant under every operation.
    Wei native_total() const;

    /// Digest over all ledger contents; equal states have equal fingerprints.
    Hash32 fingerprint() const;

private:
    using Undo = std::function<void(WorldState&)>;
    void record(Undo undo) { journal_.push_back(std::move(undo)); }
    Account& mutable_account(const Address& addr);

    std::shared_ptr<const ProgramRegistry> programs_;
    std::shared_ptr<SignatureScheme> scheme_;

    std::map<Address, Account> accounts_;
    std::set<Hash32> used_seeds_;
    TokenLedger tokens_;
    DepositLedger deposits_;
    std::map<Address, uint64_t> aa_nonces_;
    std::map<Address, WalletRecord> wallets_;
    std::map<Address, PaymasterRecord> paymasters_;
    std::set<Address> aggregators_;
    BlockContext block_;
    uint64_t clock_ = 1'000;
    std::vector<LogRecord> logs_;
    std::vector<Undo> journal_;
};

}  // namespace aasim
