// Alternate mempool holding UserOperations until a bundler picks them up.
#pragma once

#include <aasim/userop/user_operation.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

namespace aasim
{
class ProgramRegistry;

struct MempoolEntry
{
    UserOperation op;
    uint64_t arrival_seq = 0;
};

enum class SubmitStatus
{
    Accepted,
    Duplicate,
    Invalid,
};

struct SubmitResult
{
    SubmitStatus status = SubmitStatus::Accepted;
    std::optional<ValidationError> error;
    uint64_t arrival_seq = 0;

    bool accepted() const noexcept { return status == SubmitStatus::Accepted; }
    std::string reason() const;
};

/// At most one entry per (sender, nonce). Mutations are serialised by an
/// internal mutex so submit may be called from several threads.
class AltMempool
{
public:
    explicit AltMempool(std::shared_ptr<const ProgramRegistry> programs = nullptr)
      : programs_{std::move(programs)}
    {}
    AltMempool(const AltMempool& other);
    AltMempool& operator=(const AltMempool& other);

    /// Accepts iff static_validate passes and (sender, nonce) is new.
    SubmitResult submit(UserOperation op);

    /// Inserts with a given arrival_seq, as when restoring a dump. Throws
    /// Duplicate on a taken (sender, nonce) or arrival_seq.
    void insert(UserOperation op, uint64_t arrival_seq);

    bool remove(const Address& sender, uint64_t nonce);
    bool contains(const Address& sender, uint64_t nonce) const;
    size_t size() const;
    uint64_t next_arrival_seq() const;
    /// Entries ordered by (sender, nonce).
    std::vector<MempoolEntry> entries() const;

    nlohmann::json dump() const;
    static AltMempool restore(
        const nlohmann::json& j, std::shared_ptr<const ProgramRegistry> programs = nullptr);

private:
    using Key = std::pair<Address, uint64_t>;

    std::shared_ptr<const ProgramRegistry> programs_;
    mutable std::mutex mutex_;
    std::map<Key, MempoolEntry> entries_;
    uint64_t next_seq_ = 0;
};

}  // namespace aasim
