// Handler programs shipped with the simulator: test fixtures, wallets, the
// swap pool, and the contracts the attack scenarios run against.
#pragma once

#include <aasim/world/program.hpp>

#include <memory>

namespace aasim
{
/// Fresh registry holding every built-in program. Callers may add more.
ProgramRegistry builtin_programs();

/// Shared immutable instance of builtin_programs().
std::shared_ptr<const ProgramRegistry> builtin_registry();

/// Digest the payment_proxy program expects its signer to have signed.
Hash32 payment_digest(const Address& to, const u256& amount);

}  // namespace aasim
