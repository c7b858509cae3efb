#include <aasim/world/program.hpp>

namespace aasim
{
Program& Program::on(std::string signature, Handler handler, bool moves_value)
{
    abi::param_types(signature);
    const auto sel = abi::selector_of(signature);
    if (functions_.contains(sel))
        throw Error{Errc::InvalidPolicy, name_ + " already defines " + signature};
    functions_.emplace(sel, Function{std::move(signature), std::move(handler), moves_value});
    return *this;
}

Program& Program::on_receive(Handler handler)
{
    receive_ = std::move(handler);
    return *this;
}

Program& Program::on_construct(Handler handler)
{
    construct_ = std::move(handler);
    return *this;
}

const Function* Program::find(const abi::Selector& selector) const
{
    const auto it = functions_.find(selector);
    return it == functions_.end() ? nullptr : &it->second;
}

bool Program::can_spend() const
{
    for (const auto& [_, fn] : functions_)
        if (fn.moves_value)
            return true;
    return false;
}

void ProgramRegistry::add(Program program)
{
    if (programs_.contains(program.name()))
        throw Error{Errc::InvalidPolicy, "program '" + program.name() + "' already registered"};
    for (const auto& [sel, fn] : program.functions())
    {
        const auto [it, inserted] = signatures_.emplace(sel, fn.signature);
        if (!inserted && it->second != fn.signature)
            throw Error{Errc::InvalidPolicy,
                "selector clash between " + it->second + " and " + fn.signature};
    }
    auto name = program.name();
    programs_.emplace(std::move(name), std::move(program));
}

const Program* ProgramRegistry::find(std::string_view name) const
{
    const auto it = programs_.find(name);
    return it == programs_.end() ? nullptr : &it->second;
}

const Program& ProgramRegistry::at(std::string_view name) const
{
    if (const auto* p = find(name))
        return *p;
    throw Error{Errc::UnknownProgram, std::string{name}};
}

const std::string* ProgramRegistry::signature_of(const abi::Selector& selector) const
{
    const auto it = signatures_.find(selector);
    return it == signatures_.end() ? nullptr : &it->second;
}

std::vector<std::string> ProgramRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& [name, _] : programs_)
        out.push_back(name);
    return out;
}

std::string_view to_string(CallStatus s) noexcept
{
    switch (s)
    {
    case CallStatus::Success: return "Success";
    case CallStatus::Revert: return "Revert";
    case CallStatus::OutOfGas: return "OutOfGas";
    case CallStatus::DepthExceeded: return "DepthExceeded";
    case CallStatus::InsufficientBalance: return "InsufficientBalance";
    case CallStatus::UnknownTarget: return "UnknownTarget";
    case CallStatus::NoSuchFunction: return "NoSuchFunction";
    }
    return "Unknown";
}

void CallContext::sstore(const u256& key, const u256& value)
{
    gas_.charge(STORAGE_WRITE_GAS);
    world_.sstore(self_, key, value);
}

CallResult CallContext::call(const Address& to, const Wei& value, Bytes input)
{
    gas_.charge(STEP_GAS);
    return execute_call(world_, env_, gas_, self_, to, value, input, depth_ + 1);
}

void CallContext::self_destruct(const Address& beneficiary)
{
    gas_.charge(STEP_GAS);
    require(beneficiary != self_, "self-destruct beneficiary is the contract itself");
    world_.transfer(self_, beneficiary, world_.balance(self_));
    world_.destroy(self_);
    world_.emit({self_, "SelfDestruct", {beneficiary.to_word()}});
}

void CallContext::emit(std::string topic, std::vector<u256> data)
{
    gas_.charge(STEP_GAS);
    world_.emit({self_, std::move(topic), std::move(data)});
}

void CallContext::token_send(const std::string& token, const Address& to, const u256& amount)
{
    gas_.charge(STEP_GAS);
    world_.token_transfer(token, self_, to, amount);
}

void CallContext::token_pull(const std::string& token, const u256& amount)
{
    gas_.charge(STEP_GAS);
    world_.token_transfer(token, caller_, self_, amount);
}

bool CallContext::verify_signature(const PublicId& signer, const Hash32& digest, const Hash32& tag)
{
    gas_.charge(STEP_GAS);
    return world_.scheme().verify(signer, digest, tag);
}

CallResult execute_call(WorldState& world, const ExecEnv& env, GasMeter& gas,
    const Address& caller, const Address& target, const Wei& value, BytesView input, int depth)
{
    if (!call_depth_guard(depth))
        return {CallStatus::DepthExceeded, {}, "call depth " + std::to_string(depth)};

    const auto* acc = world.find(target);
    if (!acc && !input.empty())
        return {CallStatus::UnknownTarget, {}, target.hex()};
    if (world.balance(caller) < value)
        return {CallStatus::InsufficientBalance, {}, caller.hex()};

    const auto snap = world.snapshot();
    try
    {
        if (value > 0)
            world.transfer(caller, target, value);
        acc = world.find(target);
        if (!acc || !acc->is_contract())
            return {};

        const Program& program = world.programs().at(acc->program);
        const Handler* handler = nullptr;
        if (input.empty())
        {
            handler = program.receive();
            if (!handler)
                return {};
        }
        else
        {
            const auto sel = abi::selector(input);
            const Function* fn = sel ? program.find(*sel) : nullptr;
            if (!fn)
            {
                world.revert_to(snap);
                return {CallStatus::NoSuchFunction, {}, program.name()};
            }
            handler = &fn->handler;
        }

        CallContext ctx{world, env, gas, target, caller, value, input, depth};
        return {CallStatus::Success, (*handler)(ctx), {}};
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

}  // namespace aasim
