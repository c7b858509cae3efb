#pragma once

#include <aasim/crypto/signature.hpp>
#include <aasim/paymaster/policy.hpp>

#include <optional>
#include <variant>
#include <vector>

namespace aasim
{
class ProgramRegistry;

/// Deploys the sender on first use. The sender address is a deterministic
/// function of all three fields.
struct InitCode
{
    std::string program = "smart_wallet";
    PublicId owner{};
    Hash32 salt{};

    bool operator==(const InitCode&) const = default;
};

struct CallData
{
    Address target{};
    Wei value = 0;
    Bytes input;
    /// Length header as it appears in the encoded operation.
    uint64_t input_length = 0;

    bool operator==(const CallData&) const = default;
};

/// Builds call data whose length header matches its input.
CallData make_call(const Address& target, const Wei& value, Bytes input = {});

enum class IntentObjective
{
    MaximizeOutput
};

/// Outcome-focused payload: give a fixed amount of one asset, receive as much
/// of another as the market allows.
struct Intent
{
    std::string give_asset;
    u256 give_amount = 0;
    std::string want_asset;
    IntentObjective objective = IntentObjective::MaximizeOutput;

    bool operator==(const Intent&) const = default;
};

using Payload = std::variant<CallData, Intent>;

struct PaymasterAndData
{
    Address paymaster{};
    /// Opaque policy bytes passed to the paymaster.
    Bytes data;

    bool operator==(const PaymasterAndData&) const = default;
};

struct UserOperation
{
    Address sender{};
    uint64_t nonce = 0;
    std::optional<InitCode> init_code;
    Payload payload = CallData{};
    uint64_t call_gas_limit = 0;
    uint64_t verification_gas_limit = 0;
    uint64_t pre_verification_gas = 0;
    Wei max_fee_per_gas = 0;
    std::optional<PaymasterAndData> paymaster_and_data;
    std::optional<Address> aggregator;
    /// One entry for single-key accounts, one per approving owner for multisig.
    std::vector<Signature> signatures;

    bool operator==(const UserOperation&) const = default;
};

/// Address an init code deploys to.
Address counterfactual_address(const InitCode& init);

/// Digest every signature over the operation commits to. Covers all fields
/// except the signatures, plus the EntryPoint address and chain id.
Hash32 digest_user_op(const UserOperation& op, const Address& entrypoint, uint64_t chain_id);

/// Appends the signature of `secret` over the operation digest.
/// Throws UnknownKey when the key was never registered with the scheme.
UserOperation sign_user_op(UserOperation op, const SecretKey& secret,
    const SignatureScheme& scheme, const Address& entrypoint, uint64_t chain_id);

enum class ValidationError
{
    ShortAddress,
    ZeroGasField,
    MalformedInput,
};

std::string_view to_string(ValidationError e) noexcept;

/// Stateless well-formedness checks run by bundlers and the EntryPoint.
/// When `programs` is given, address-typed arguments of known functions are
/// checked for exact 20-byte encodings.
std::optional<ValidationError> static_validate(
    const UserOperation& op, const ProgramRegistry* programs = nullptr);

/// Input encoding with the address argument shortened by its trailing byte,
/// the way a short-address exploit crafts it.
Bytes encode_short_address_call(
    std::string_view signature, const std::vector<u256>& args, size_t address_arg);

}  // namespace aasim
