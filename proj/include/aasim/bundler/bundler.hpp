// Bundler: simulates pooled operations, orders them canonically and hands the
// bundle to the EntryPoint.
#pragma once

#include <aasim/bundler/mempool.hpp>
#include <aasim/entrypoint/entrypoint.hpp>

#include <string>
#include <vector>

namespace aasim
{
class WorldState;

struct BundlerConfig
{
    size_t max_bundle_size = 16;
    /// Receives every gas reimbursement and appears as origin during execution.
    Address beneficiary{};
    /// Leave out operations whose simulation raised a warning.
    bool drop_flagged = false;
};

enum class SimWarning
{
    /// Value sent to a contract with no function able to spend it.
    FrozenFundsRisk,
};

std::string_view to_string(SimWarning w) noexcept;

struct SimReport
{
    bool would_pass = false;
    /// Rejection reason from the verification loop, e.g. PrefundShortfall.
    std::optional<std::string> reason;
    std::vector<SimWarning> warnings;
    /// Phase the operation would reach.
    Phase phase = Phase::RejectedVerification;
};

/// Ordering key: higher max_fee_per_gas first, then earlier arrival.
bool canonical_before(const MempoolEntry& a, const MempoolEntry& b);

class Bundler
{
public:
    /// Throws InvalidPolicy when max_bundle_size is zero.
    Bundler(BundlerConfig config, EntryPoint entrypoint);

    const BundlerConfig& config() const noexcept { return config_; }
    const EntryPoint& entrypoint() const noexcept { return entrypoint_; }

    /// Dry-runs the operation through the EntryPoint on a copy of `state`.
    SimReport simulate(const UserOperation& op, const WorldState& state) const;

    /// Operations whose simulation passes, in canonical order, at most one per
    /// sender and max_bundle_size in total. Simulation is sequential on a
    /// scratch copy so each op sees its predecessors' effects. Selected ops
    /// and ops with a nonce that is already used are removed from the pool.
    Bundle select_and_order(AltMempool& pool, const WorldState& state) const;

    /// Builds one aggregate signature per aggregator named in the bundle.
    void attach_aggregates(Bundle& bundle, const WorldState& state) const;

    HandleOpsReceipt submit_bundle(const Bundle& bundle, WorldState& state) const;

private:
    SimReport dry_run(const UserOperation& op, WorldState& scratch) const;

    BundlerConfig config_;
    EntryPoint entrypoint_;
};

}  // namespace aasim
