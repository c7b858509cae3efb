#include <aasim/bundler/bundler.hpp>
#include <aasim/entrypoint/aggregator.hpp>
#include <aasim/world/program.hpp>
#include <aasim/world/state.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace aasim
{
std::string_view to_string(SimWarning w) noexcept
{
    switch (w)
    {
    case SimWarning::FrozenFundsRisk: return "FrozenFundsRisk";
    }
    return "Unknown";
}

bool canonical_before(const MempoolEntry& a, const MempoolEntry& b)
{
    if (a.op.max_fee_per_gas != b.op.max_fee_per_gas)
        return a.op.max_fee_per_gas > b.op.max_fee_per_gas;
    return a.arrival_seq < b.arrival_seq;
}

Bundler::Bundler(BundlerConfig config, EntryPoint entrypoint)
  : config_{std::move(config)}, entrypoint_{entrypoint}
{
    if (config_.max_bundle_size == 0)
        throw Error{Errc::InvalidPolicy, "max_bundle_size must be at least 1"};
}

namespace
{
std::vector<SimWarning> inspect_target(const UserOperation& op, const WorldState& state)
{
    std::vector<SimWarning> out;
    const auto* call = std::get_if<CallData>(&op.payload);
    if (!call || call->value == 0 || call->target == op.sender)
        return out;
    const auto* acc = state.find(call->target);
    if (!acc || !acc->is_contract())
        return out;
    const auto* program = state.programs().find(acc->program);
    if (program && !program->can_spend())
        out.push_back(SimWarning::FrozenFundsRisk);
    return out;
}
}  // namespace

SimReport Bundler::dry_run(const UserOperation& op, WorldState& scratch) const
{
    SimReport report;
    report.warnings = inspect_target(op, scratch);

    Bundle single{{op}, {}};
    attach_aggregates(single, scratch);
    const auto receipt = entrypoint_.handle_ops(scratch, single, config_.beneficiary);
    const auto& r = receipt.ops.front();
    report.phase = r.phase_reached;
    report.would_pass = r.phase_reached != Phase::RejectedVerification;
    if (!report.would_pass)
        report.reason = r.reason;
    return report;
}

SimReport Bundler::simulate(const UserOperation& op, const WorldState& state) const
{
    WorldState scratch = state;
    scratch.commit();
    return dry_run(op, scratch);
}

void Bundler::attach_aggregates(Bundle& bundle, const WorldState& state) const
{
    bundle.aggregates.clear();
    std::map<Address, std::vector<Signature>> groups;
    for (const auto& op : bundle.ops)
        if (op.aggregator && !op.signatures.empty())
            groups[*op.aggregator].push_back(op.signatures.front());
    for (const auto& [addr, sigs] : groups)
    {
        try
        {
            bundle.aggregates.push_back({addr, state.scheme().aggregate(sigs)});
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::MixedSchemes)
                throw;
        }
    }
}

Bundle Bundler::select_and_order(AltMempool& pool, const WorldState& state) const
{
    auto candidates = pool.entries();
    std::ranges::sort(candidates, canonical_before);

    WorldState scratch = state;
    scratch.commit();
    Bundle bundle;
    std::set<Address> senders;

    for (const auto& entry : candidates)
    {
        if (bundle.ops.size() >= config_.max_bundle_size)
            break;
        const auto& op = entry.op;
        if (senders.contains(op.sender))
            continue;

        if (scratch.exists(op.sender) && op.nonce < scratch.aa_nonce(op.sender))
        {
            pool.remove(op.sender, op.nonce);
            continue;
        }

        const auto snap = scratch.snapshot();
        const auto report = dry_run(op, scratch);
        if (!report.would_pass)
        {
            scratch.revert_to(snap);
            continue;
        }
        if (config_.drop_flagged && !report.warnings.empty())
        {
            scratch.revert_to(snap);
            pool.remove(op.sender, op.nonce);
            continue;
        }
        senders.insert(op.sender);
        bundle.ops.push_back(op);
        pool.remove(op.sender, op.nonce);
    }

    attach_aggregates(bundle, state);
    return bundle;
}

HandleOpsReceipt Bundler::submit_bundle(const Bundle& bundle, WorldState& state) const
{
    return entrypoint_.handle_ops(state, bundle, config_.beneficiary);
}

}  // namespace aasim
