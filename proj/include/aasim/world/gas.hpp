#pragma once

#include <aasim/common.hpp>

namespace aasim
{
/// Flat intrinsic charge of every legacy transaction.
inline constexpr uint64_t INTRINSIC_GAS = 21'000;
/// Cost of one handler step (computation, call, transfer, log).
inline constexpr uint64_t STEP_GAS = 1;
/// Cost of one storage write, charged instead of STEP_GAS.
inline constexpr uint64_t STORAGE_WRITE_GAS = 100;
/// Deepest permitted call frame; the top-level frame has depth 1.
inline constexpr int MAX_CALL_DEPTH = 1'024;

/// Thrown by GasMeter::charge when the limit would be exceeded.
struct OutOfGasHalt
{};

class GasMeter
{
public:
    explicit GasMeter(uint64_t limit, Wei price = 0) : limit_{limit}, price_{price} {}

    /// Consumes `amount`. On exhaustion marks the whole limit used and throws OutOfGasHalt.
    void charge(uint64_t amount)
    {
        if (amount > limit_ - used_)
        {
            used_ = limit_;
            throw OutOfGasHalt{};
        }
        used_ += amount;
    }

    uint64_t limit() const noexcept { return limit_; }
    uint64_t used() const noexcept { return used_; }
    uint64_t remaining() const noexcept { return limit_ - used_; }
    const Wei& price() const noexcept { return price_; }

private:
    uint64_t limit_;
    uint64_t used_ = 0;
    Wei price_;
};

}  // namespace aasim
