#include <aasim/bundler/mempool.hpp>
#include <aasim/io/codec.hpp>
#include <aasim/world/program.hpp>

namespace aasim
{
std::string SubmitResult::reason() const
{
    switch (status)
    {
    case SubmitStatus::Accepted: return "Accepted";
    case SubmitStatus::Duplicate: return "Duplicate";
    case SubmitStatus::Invalid: return error ? std::string{to_string(*error)} : "Invalid";
    }
    return "Unknown";
}

AltMempool::AltMempool(const AltMempool& other)
{
    std::lock_guard lock{other.mutex_};
    programs_ = other.programs_;
    entries_ = other.entries_;
    next_seq_ = other.next_seq_;
}

AltMempool& AltMempool::operator=(const AltMempool& other)
{
    if (this == &other)
        return *this;
    std::scoped_lock lock{mutex_, other.mutex_};
    programs_ = other.programs_;
    entries_ = other.entries_;
    next_seq_ = other.next_seq_;
    return *this;
}

SubmitResult AltMempool::submit(UserOperation op)
{
    if (const auto err = static_validate(op, programs_.get()))
        return {SubmitStatus::Invalid, err, 0};
    std::lock_guard lock{mutex_};
    Key key{op.sender, op.nonce};
    if (entries_.contains(key))
        return {SubmitStatus::Duplicate, std::nullopt, 0};
    const uint64_t seq = next_seq_++;
    entries_.emplace(key, MempoolEntry{std::move(op), seq});
    return {SubmitStatus::Accepted, std::nullopt, seq};
}

void AltMempool::insert(UserOperation op, uint64_t arrival_seq)
{
    std::lock_guard lock{mutex_};
    Key key{op.sender, op.nonce};
    if (entries_.contains(key))
        throw Error{Errc::Duplicate, op.sender.hex() + " nonce " + std::to_string(op.nonce)};
    for (const auto& [_, e] : entries_)
        if (e.arrival_seq == arrival_seq)
            throw Error{Errc::Duplicate, "arrival_seq " + std::to_string(arrival_seq)};
    entries_.emplace(key, MempoolEntry{std::move(op), arrival_seq});
    next_seq_ = std::max(next_seq_, arrival_seq + 1);
}

bool AltMempool::remove(const Address& sender, uint64_t nonce)
{
    std::lock_guard lock{mutex_};
    return entries_.erase({sender, nonce}) > 0;
}

bool AltMempool::contains(const Address& sender, uint64_t nonce) const
{
    std::lock_guard lock{mutex_};
    return entries_.contains({sender, nonce});
}

size_t AltMempool::size() const
{
    std::lock_guard lock{mutex_};
    return entries_.size();
}

uint64_t AltMempool::next_arrival_seq() const
{
    std::lock_guard lock{mutex_};
    return next_seq_;
}

std::vector<MempoolEntry> AltMempool::entries() const
{
    std::lock_guard lock{mutex_};
    std::vector<MempoolEntry> out;
    out.reserve(entries_.size());
    for (const auto& [_, e] : entries_)
        out.push_back(e);
    return out;
}

nlohmann::json AltMempool::dump() const
{
    auto ops = nlohmann::json::array();
    for (const auto& e : entries())
    {
        auto j = io::to_json(e.op);
        j["arrival_seq"] = e.arrival_seq;
        ops.push_back(std::move(j));
    }
    return {{"next_arrival_seq", next_arrival_seq()}, {"entries", ops}};
}

AltMempool AltMempool::restore(
    const nlohmann::json& j, std::shared_ptr<const ProgramRegistry> programs)
{
    AltMempool pool{std::move(programs)};
    const auto& entries = io::require(j, "entries");
    if (!entries.is_array())
        throw Error{Errc::ParseError, "entries: expected array"};
    for (const auto& e : entries)
    {
        const auto seq = io::parse_field(io::require(e, "arrival_seq"), "arrival_seq",
            [](const nlohmann::json& x) { return x.get<uint64_t>(); });
        pool.insert(io::user_op_from_json(e), seq);
    }
    if (j.contains("next_arrival_seq"))
        pool.next_seq_ = std::max(pool.next_seq_, j.at("next_arrival_seq").get<uint64_t>());
    return pool;
}

}  // namespace aasim
