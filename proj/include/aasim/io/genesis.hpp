// Genesis file loading.
//
//   {
//     "block":  {"number": 1, "timestamp": 1000, "seed": "0", "proposer": "0x..", "gas_limit": 30000000},
//     "clock":  1000,
//     "accounts": [
//       {"seed": "0x<64 hex>", "kind": "eoa", "balance": "100"},
//       {"address": "0x<40 hex>", "kind": "contract", "program": "counter",
//        "balance": "0", "storage": {"0x0": "0x1"},
//        "wallet": {"policy": {...}, "recovery": {...}},
//        "paymaster": {"policy": {...}, "owner": "0x<64 hex>"}, "deposit": "0",
//        "aggregator": false}
//     ],
//     "tokens":     [{"token": "USDC", "holder": "0x..", "amount": "5"}],
//     "allowances": [{"token": "USDC", "owner": "0x..", "spender": "0x..", "amount": "5"}]
//   }
//
// Accounts are created in lexicographic address order.
#pragma once

#include <aasim/world/state.hpp>

#include <filesystem>
#include <memory>

#include <json.hpp>

namespace aasim
{
/// Throws ParseError, UnknownProgram, DuplicateSeed or AddressCollision.
WorldState load_genesis(const nlohmann::json& genesis,
    std::shared_ptr<const ProgramRegistry> programs, std::shared_ptr<SignatureScheme> scheme);

WorldState load_genesis_file(const std::filesystem::path& path,
    std::shared_ptr<const ProgramRegistry> programs, std::shared_ptr<SignatureScheme> scheme);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace aasim
