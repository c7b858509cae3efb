#include <aasim/world/legacy.hpp>

namespace aasim
{
namespace
{
CallResult deploy(WorldState& world, const ExecEnv& env, GasMeter& gas, const Address& deployer,
    const Address& addr, const ContractCreation& creation)
{
    if (world.exists(addr))
        return {CallStatus::Revert, {}, "address collision at " + addr.hex()};

    const auto snap = world.snapshot();
    try
    {
        Account acc;
        acc.kind = AccountKind::Contract;
        acc.program = creation.program;
        world.put_account(addr, std::move(acc));
        if (creation.endowment > 0)
            world.transfer(deployer, addr, creation.endowment);
        gas.charge(STEP_GAS);
        if (const auto* ctor = world.programs().at(creation.program).constructor())
        {
            CallContext ctx{world, env, gas, addr, deployer, creation.endowment,
                creation.init_input, 1};
            (*ctor)(ctx);
        }
        return {};
    }
    catch (const RevertHalt& r)
    {
        world.revert_to(snap);
        return {CallStatus::Revert, {}, r.reason};
    }
    catch (const OutOfGasHalt&)
    {
        world.revert_to(snap);
        return {CallStatus::OutOfGas, {}, "out of gas"};
    }
    catch (const Error& e)
    {
        if (e.code() == Errc::InternalInvariantViolation)
            throw;
        world.revert_to(snap);
        return {CallStatus::Revert, {}, e.what()};
    }
}
}  // namespace

ExecutionResult apply_legacy_tx(WorldState& world, const LegacyTransaction& tx)
{
    const auto& origin = world.account(tx.origin);
    if (origin.is_contract())
        throw Error{Errc::NotExternallyOwned, tx.origin.hex()};
    if (tx.gas_limit < INTRINSIC_GAS)
        throw Error{Errc::IntrinsicGasTooLow,
            "gas limit " + std::to_string(tx.gas_limit) + " below intrinsic " +
                std::to_string(INTRINSIC_GAS)};
    if (tx.gas_limit > world.block().gas_limit)
        throw Error{Errc::GasLimitExceedsBlock, std::to_string(tx.gas_limit)};
    if (tx.nonce != origin.nonce)
        throw Error{Errc::BadNonce,
            "expected " + std::to_string(origin.nonce) + ", got " + std::to_string(tx.nonce)};

    const auto* creation = std::get_if<ContractCreation>(&tx.kind);
    const auto* call = std::get_if<MessageCall>(&tx.kind);
    const Wei value = creation ? creation->endowment : call->value;

    const u512 max_fee = u512{tx.gas_limit} * u512{tx.gas_price};
    if (max_fee + u512{value} > u512{origin.balance})
        throw Error{Errc::InsufficientFunds,
            "balance " + to_dec(origin.balance) + " < gas_limit*gas_price + value"};
    if (call && !world.exists(call->target))
        throw Error{Errc::UnknownTarget, call->target.hex()};
    if (creation)
        world.programs().at(creation->program);

    const uint64_t nonce_before = origin.nonce;
    const Wei upfront = static_cast<Wei>(max_fee);
    world.debit(tx.origin, upfront);
    world.increment_nonce(tx.origin);

    GasMeter gas{tx.gas_limit, tx.gas_price};
    gas.charge(INTRINSIC_GAS);
    const auto& block = world.block();
    const ExecEnv env{tx.origin, block.timestamp, block.seed, block.number};
    const size_t log_mark = world.logs().size();

    ExecutionResult result;
    CallResult r;
    if (creation)
    {
        const auto addr = contract_address(tx.origin, nonce_before);
        r = deploy(world, env, gas, tx.origin, addr, *creation);
        if (r.ok())
            result.created = addr;
    }
    else
    {
        r = execute_call(world, env, gas, tx.origin, call->target, call->value, call->input, 1);
    }

    result.success = r.ok();
    result.status = r.status;
    result.output = std::move(r.output);
    result.reason = std::move(r.reason);
    result.reverted = !r.ok();
    result.gas_used = gas.used();

    const Wei fee = Wei{gas.used()} * tx.gas_price;
    world.credit(tx.origin, upfront - fee);
    world.credit(world.block().proposer, fee);

    const auto& logs = world.logs();
    result.logs.assign(logs.begin() + static_cast<std::ptrdiff_t>(log_mark), logs.end());
    return result;
}

}  // namespace aasim
