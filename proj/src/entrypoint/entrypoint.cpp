#include <aasim/entrypoint/aggregator.hpp>
#include <aasim/entrypoint/entrypoint.hpp>
#include <aasim/hash.hpp>
#include <aasim/userop/intent.hpp>
#include <aasim/world/program.hpp>
#include <aasim/world/state.hpp>

#include <map>
#include <set>

namespace aasim
{
std::string_view to_string(Phase p) noexcept
{
    switch (p)
    {
    case Phase::RejectedVerification: return "RejectedVerification";
    case Phase::ExecutedSuccess: return "ExecutedSuccess";
    case Phase::ExecutedReverted: return "ExecutedReverted";
    }
    return "Unknown";
}

nlohmann::json receipt_to_json(const PerOpReceipt& r)
{
    nlohmann::json j;
    j["op_digest"] = r.op_digest.hex();
    j["phase_reached"] = std::string{to_string(r.phase_reached)};
    j["actual_gas_cost"] = to_dec(r.actual_gas_cost);
    if (r.paymaster)
        j["payer"] = {{"kind", "Paymaster"}, {"address", r.paymaster->hex()}};
    else
        j["payer"] = {{"kind", "Account"}};
    j["reason"] = r.reason ? nlohmann::json(*r.reason) : nlohmann::json(nullptr);
    return j;
}

std::string receipts_to_jsonl(const HandleOpsReceipt& receipt)
{
    std::string out;
    for (const auto& r : receipt.ops)
        out += receipt_to_json(r).dump() + "\n";
    return out;
}

Address EntryPoint::default_address()
{
    const auto h = sha256(BytesView{reinterpret_cast<const uint8_t*>("aasim-entrypoint"), 16});
    return Address::from_bytes(h.view().subspan(12));
}

Wei EntryPoint::prefund(const UserOperation& op)
{
    const u512 gas = u512{op.call_gas_limit} + op.verification_gas_limit + op.pre_verification_gas;
    const u512 total = gas * u512{op.max_fee_per_gas};
    if (total > u512{U256_MAX})
        throw Error{Errc::ArithmeticOverflow, "prefund exceeds 2^256 - 1"};
    return static_cast<Wei>(total);
}

void EntryPoint::deposit_to(
    WorldState& world, const Address& from, const Address& account, const Wei& amount) const
{
    if (amount == 0)
        throw Error{Errc::MalformedInput, "deposit amount must be positive"};
    world.debit(from, amount);
    world.deposit_credit(account, amount);
}

Hash32 EntryPoint::withdraw_digest(
    const Address& account, const Wei& amount, uint64_t ledger_nonce) const
{
    return Encoder{"entrypoint-withdraw"}
        .address(account)
        .word(amount)
        .u64(ledger_nonce)
        .address(address_)
        .u64(chain_id_)
        .digest();
}

void EntryPoint::withdraw_from(WorldState& world, const Address& account, const Wei& amount,
    std::span<const Signature> auth, const Address& to) const
{
    if (amount == 0)
        throw Error{Errc::MalformedInput, "withdraw amount must be positive"};
    const auto nonce_it = world.deposits().withdraw_nonces.find(account);
    const uint64_t nonce =
        nonce_it == world.deposits().withdraw_nonces.end() ? 0 : nonce_it->second;
    const auto digest = withdraw_digest(account, amount, nonce);
    const auto& scheme = world.scheme();

    bool ok = false;
    if (const auto* pm = world.paymaster(account))
        ok = validate(ValidationPolicy{SingleKey{pm->owner}}, digest, auth, scheme);
    else if (const auto* w = world.wallet(account))
        ok = validate(base_policy(w->policy), digest, auth, scheme);
    else
        for (const auto& s : auth)
            ok = ok || (eoa_address(s.signer) == account && scheme.verify(s, digest));
    if (!ok)
        throw Error{Errc::BadAuth, "withdrawal from " + account.hex() + " not authorised"};

    Wei free = world.deposits().of(account);
    if (const auto* pm = world.paymaster(account))
        free = free > pm->reserved ? free - pm->reserved : Wei{0};
    if (free < amount)
        throw Error{Errc::InsufficientDeposit,
            "deposit " + to_dec(free) + " < " + to_dec(amount)};

    world.deposit_debit(account, amount);
    world.bump_withdraw_nonce(account);
    world.credit(to, amount);
}

uint64_t EntryPoint::aa_nonce(const WorldState& world, const Address& sender) const
{
    return world.aa_nonce(sender);
}

namespace
{
/// Raised inside the verification loop to reject one operation.
struct Reject
{
    std::string reason;
};

bool modules_allow(const ValidationPolicy& policy, const ModuleInput& in)
{
    const auto* c = std::get_if<Composite>(&policy);
    if (!c)
        return true;
    for (const auto& m : c->modules)
        if (!m->allows(in))
            return false;
    return modules_allow(*c->base, in);
}

OpMetadata metadata_of(const UserOperation& op)
{
    OpMetadata meta{op.sender, op.nonce, std::nullopt, 0};
    if (const auto* call = std::get_if<CallData>(&op.payload))
    {
        meta.target = call->target;
        meta.value = call->value;
    }
    else
    {
        const auto& intent = std::get<Intent>(op.payload);
        if (intent.give_asset == NATIVE_ASSET)
            meta.value = intent.give_amount;
    }
    return meta;
}

void deploy_wallet(WorldState& world, const InitCode& init)
{
    if (!world.programs().find(init.program))
        throw Reject{"UnknownProgram"};
    Account acc;
    acc.kind = AccountKind::Contract;
    acc.program = init.program;
    world.put_account(counterfactual_address(init), std::move(acc));
    world.set_wallet(counterfactual_address(init), {SingleKey{init.owner}, std::nullopt});
}

struct Verified
{
    size_t index = 0;
    Wei prefund = 0;
    std::optional<PaymasterContext> paymaster;
};
}  // namespace

HandleOpsReceipt EntryPoint::handle_ops(
    WorldState& world, const Bundle& bundle, const Address& beneficiary) const
{
    {
        std::set<Address> senders;
        for (const auto& op : bundle.ops)
            if (!senders.insert(op.sender).second)
                throw Error{Errc::InvalidBundle, "two operations from " + op.sender.hex()};
    }

    const Wei total_before = world.native_total();
    const auto bundle_snap = world.snapshot();
    const auto& scheme = world.scheme();

    HandleOpsReceipt receipt;
    receipt.beneficiary = beneficiary;
    receipt.ops.resize(bundle.ops.size());

    // Aggregate groups are checked once, against the pre-bundle state.
    std::map<Address, bool> group_ok;
    {
        std::map<Address, std::vector<UserOperation>> groups;
        for (const auto& op : bundle.ops)
            if (op.aggregator)
                groups[*op.aggregator].push_back(op);
        const Aggregator agg{scheme, *this};
        for (const auto& [addr, ops] : groups)
        {
            const AggregatedGroup* group = nullptr;
            for (const auto& g : bundle.aggregates)
                if (g.aggregator == addr)
                    group = &g;
            group_ok[addr] = group && world.is_aggregator(addr) &&
                             agg.verify_aggregate(ops, group->signature,
                                 [&](const UserOperation& op) { return aggregation_signer(world, op); });
        }
    }

    BlockContext aa_block = world.block();
    aa_block.timestamp = world.clock();

    try
    {
        std::vector<Verified> verified;

        // Verification loop.
        for (size_t i = 0; i < bundle.ops.size(); ++i)
        {
            const auto& op = bundle.ops[i];
            auto& r = receipt.ops[i];
            r.op_digest = digest(op);
            r.sender = op.sender;
            r.nonce = op.nonce;

            const auto snap = world.snapshot();
            try
            {
                if (const auto err = static_validate(op, &world.programs()))
                    throw Reject{std::string{to_string(*err)}};
                if (op.verification_gas_limit < VERIFICATION_OVERHEAD_GAS)
                    throw Reject{"VerificationGasTooLow"};
                Wei need;
                try
                {
                    need = prefund(op);
                }
                catch (const Error&)
                {
                    throw Reject{"ArithmeticOverflow"};
                }

                if (op.init_code)
                {
                    if (world.exists(op.sender))
                        throw Reject{"SenderAlreadyDeployed"};
                    if (counterfactual_address(*op.init_code) != op.sender)
                        throw Reject{"InitCodeMismatch"};
                    deploy_wallet(world, *op.init_code);
                }
                else if (!world.exists(op.sender))
                    throw Reject{"UnknownSender"};

                if (op.nonce != world.aa_nonce(op.sender))
                    throw Reject{"BadNonce"};

                const auto* wallet = world.wallet(op.sender);
                if (!wallet)
                    throw Reject{"NotSmartAccount"};
                const ModuleInput in{r.op_digest, metadata_of(op), aa_block};
                if (op.aggregator)
                {
                    if (!world.is_aggregator(*op.aggregator))
                        throw Reject{"UnknownAggregator"};
                    if (!aggregation_signer(world, op))
                        throw Reject{"AggregatorNeedsSingleKey"};
                    if (!group_ok.at(*op.aggregator))
                        throw Reject{"BadAggregateSignature"};
                }
                else if (!validate(base_policy(wallet->policy), in, op.signatures, scheme))
                    throw Reject{"BadSignature"};
                if (!modules_allow(wallet->policy, in))
                    throw Reject{"ModuleRejected"};

                Verified v{i, need, std::nullopt};
                if (op.paymaster_and_data)
                    v.paymaster = validate_paymaster_op(world, op, r.op_digest, need);
                else
                {
                    if (world.balance(op.sender) < need)
                        throw Reject{"PrefundShortfall"};
                    world.debit(op.sender, need);
                    world.escrow_add(need);
                }
                world.bump_aa_nonce(op.sender);
                r.prefund = need;
                if (v.paymaster)
                    r.paymaster = v.paymaster->paymaster;
                verified.push_back(std::move(v));
            }
            catch (const Reject& rej)
            {
                world.revert_to(snap);
                r.phase_reached = Phase::RejectedVerification;
                r.reason = rej.reason;
            }
            catch (const Error& e)
            {
                if (e.code() == Errc::InternalInvariantViolation)
                    throw;
                world.revert_to(snap);
                r.phase_reached = Phase::RejectedVerification;
                r.reason = std::string{to_string(e.code())};
            }
        }

        // Execution loop.
        for (auto& v : verified)
        {
            const auto& op = bundle.ops[v.index];
            auto& r = receipt.ops[v.index];
            GasMeter gas{op.call_gas_limit, op.max_fee_per_gas};
            const ExecEnv env{beneficiary, world.clock(), world.block().seed, world.block().number};

            CallResult result;
            try
            {
                const CallData call = std::holds_alternative<CallData>(op.payload)
                                          ? std::get<CallData>(op.payload)
                                          : resolve_intent(std::get<Intent>(op.payload),
                                                market_from_world(world));
                result = execute_call(
                    world, env, gas, op.sender, call.target, call.value, call.input, 1);
            }
            catch (const Error& e)
            {
                if (e.code() == Errc::InternalInvariantViolation)
                    throw;
                result = {CallStatus::Revert, {}, std::string{to_string(e.code())}};
            }

            r.phase_reached = result.ok() ? Phase::ExecutedSuccess : Phase::ExecutedReverted;
            if (!result.ok())
                r.reason = std::string{to_string(result.status)} +
                           (result.reason.empty() ? "" : ": " + result.reason);

            r.gas_used = VERIFICATION_OVERHEAD_GAS + op.pre_verification_gas + gas.used();
            r.actual_gas_cost = Wei{r.gas_used} * op.max_fee_per_gas;
            if (r.actual_gas_cost > v.prefund)
                throw Error{Errc::InternalInvariantViolation, "actual gas cost above prefund"};

            if (v.paymaster)
                r.settlement = post_op(world, *v.paymaster, r.actual_gas_cost);
            else
            {
                world.escrow_remove(v.prefund);
                world.credit(op.sender, v.prefund - r.actual_gas_cost);
            }
            world.credit(beneficiary, r.actual_gas_cost);
            receipt.beneficiary_credited += r.actual_gas_cost;
        }

        if (world.native_total() != total_before)
            throw Error{Errc::InternalInvariantViolation, "native supply changed"};
        if (world.deposits().escrow != 0)
            throw Error{Errc::InternalInvariantViolation, "escrow not drained"};
    }
    catch (...)
    {
        world.revert_to(bundle_snap);
        throw;
    }
    return receipt;
}

}  // namespace aasim
