#pragma once

#include <aasim/common.hpp>

namespace aasim
{
/// Block-level context. Every field is settable by whoever proposes the block,
/// which is what the timestamp and randomness scenarios exploit.
struct BlockContext
{
    uint64_t number = 1;
    uint64_t timestamp = 1'000;
    /// Proposer-controlled randomness beacon.
    u256 seed = 0;
    /// Receives legacy transaction fees.
    Address proposer{};
    uint64_t gas_limit = 30'000'000;

    bool operator==(const BlockContext&) const = default;
};

}  // namespace aasim
