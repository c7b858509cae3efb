// Handler programs: the simulator's stand-in for contract bytecode.
#pragma once

#include <aasim/world/abi.hpp>
#include <aasim/world/gas.hpp>
#include <aasim/world/state.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace aasim
{
class CallContext;

/// A handler returns output bytes or halts through CallContext::revert.
/// Handlers must be deterministic functions of the context they observe.
using Handler = std::function<Bytes(CallContext&)>;

struct Function
{
    std::string signature;
    Handler handler;
    /// Whether the function can move value out of the contract.
    bool moves_value = false;
};

class Program
{
public:
    explicit Program(std::string name) : name_{std::move(name)} {}

    Program& on(std::string signature, Handler handler, bool moves_value = false);
    /// Handles calls with empty input (plain value transfers).
    Program& on_receive(Handler handler);
    /// Runs once at deployment with the creation input.
    Program& on_construct(Handler handler);

    const std::string& name() const noexcept { return name_; }
    const Function* find(const abi::Selector& selector) const;
    const Handler* receive() const { return receive_ ? &*receive_ : nullptr; }
    const Handler* constructor() const { return construct_ ? &*construct_ : nullptr; }
    const std::map<abi::Selector, Function>& functions() const noexcept { return functions_; }

    /// True if some function can spend the contract's funds.
    bool can_spend() const;

private:
    std::string name_;
    std::map<abi::Selector, Function> functions_;
    std::optional<Handler> receive_;
    std::optional<Handler> construct_;
};

class ProgramRegistry
{
public:
    /// Throws InvalidPolicy on a duplicate name.
    void add(Program program);
    const Program* find(std::string_view name) const;
    /// Throws UnknownProgram.
    const Program& at(std::string_view name) const;
    /// Signature registered for a selector by any program, for input validation.
    const std::string* signature_of(const abi::Selector& selector) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, Program, std::less<>> programs_;
    std::map<abi::Selector, std::string> signatures_;
};

/// Environment shared by every frame of one transaction or bundle execution.
struct ExecEnv
{
    /// Account reported as the transaction origin.
    Address origin{};
    /// Timestamp visible to handlers.
    uint64_t timestamp = 0;
    u256 seed = 0;
    uint64_t block_number = 0;
};

enum class CallStatus
{
    Success,
    Revert,
    OutOfGas,
    DepthExceeded,
    InsufficientBalance,
    UnknownTarget,
    NoSuchFunction,
};

std::string_view to_string(CallStatus s) noexcept;

struct CallResult
{
    CallStatus status = CallStatus::Success;
    Bytes output;
    std::string reason;

    bool ok() const noexcept { return status == CallStatus::Success; }
};

/// Thrown by CallContext::revert; caught at the frame boundary.
struct RevertHalt
{
    std::string reason;
};

/// View a handler gets of the world. Every mutating or computational primitive
/// charges the shared gas meter.
class CallContext
{
public:
    CallContext(WorldState& world, const ExecEnv& env, GasMeter& gas, const Address& self,
        const Address& caller, const Wei& value, BytesView input, int depth)
      : world_{world},
        env_{env},
        gas_{gas},
        self_{self},
        caller_{caller},
        value_{value},
        input_{input},
        depth_{depth}
    {}

    const Address& self() const noexcept { return self_; }
    const Address& caller() const noexcept { return caller_; }
    const Address& origin() const noexcept { return env_.origin; }
    const Wei& value() const noexcept { return value_; }
    BytesView input() const noexcept { return input_; }
    int depth() const noexcept { return depth_; }
    uint64_t timestamp() const noexcept { return env_.timestamp; }
    const u256& block_seed() const noexcept { return env_.seed; }
    const WorldState& world() const noexcept { return world_; }

    u256 arg(size_t index) const { return abi::read_slot(input_, index); }
    Address arg_address(size_t index) const { return Address::from_word(arg(index)); }

    void step(uint64_t n = 1) { gas_.charge(n * STEP_GAS); }
    u256 sload(const u256& key) const { return world_.sload(self_, key); }
    void sstore(const u256& key, const u256& value);
    Wei balance(const Address& who) const { return world_.balance(who); }
    Wei self_balance() const { return world_.balance(self_); }

    /// Calls another account, forwarding all remaining gas.
    CallResult call(const Address& to, const Wei& value, Bytes input = {});
    /// Value transfer with empty input; reports failure instead of halting.
    bool send(const Address& to, const Wei& value) { return call(to, value).ok(); }
    /// Moves all of this contract's balance to `beneficiary` and deletes it.
    void self_destruct(const Address& beneficiary);
    void emit(std::string topic, std::vector<u256> data = {});

    u256 token_balance(const std::string& token, const Address& holder) const
    {
        return world_.tokens().balance(token, holder);
    }
    /// Moves tokens owned by this contract.
    void token_send(const std::string& token, const Address& to, const u256& amount);
    /// Moves tokens from the caller, who authorises it by making the call.
    void token_pull(const std::string& token, const u256& amount);

    bool verify_signature(const PublicId& signer, const Hash32& digest, const Hash32& tag);

    [[noreturn]] void revert(std::string reason) const { throw RevertHalt{std::move(reason)}; }
    void require(bool condition, const char* reason) const
    {
        if (!condition)
            revert(reason);
    }

private:
    WorldState& world_;
    const ExecEnv& env_;
    GasMeter& gas_;
    Address self_;
    Address caller_;
    Wei value_;
    BytesView input_;
    int depth_;
};

/// Whether a frame at `depth` may run. False exactly when depth > 1024.
constexpr bool call_depth_guard(int depth) noexcept
{
    return depth <= MAX_CALL_DEPTH;
}

/// Runs one call frame: transfers value, dispatches to the target program and
/// reverts every state change of the frame on failure.
CallResult execute_call(WorldState& world, const ExecEnv& env, GasMeter& gas,
    const Address& caller, const Address& target, const Wei& value, BytesView input, int depth);

}  // namespace aasim
