// JSON encodings of simulator values. Amounts are decimal strings.
#pragma once

#include <aasim/bundler/mempool.hpp>
#include <aasim/userop/user_operation.hpp>

#include <json.hpp>

namespace aasim::io
{
nlohmann::json to_json(const Signature& s);
Signature signature_from_json(const nlohmann::json& j);

nlohmann::json to_json(const UserOperation& op);
/// Throws ParseError naming the offending field, or ShortAddress.
UserOperation user_op_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AggregateSignature& a);
AggregateSignature aggregate_from_json(const nlohmann::json& j);

/// Reads a required field, turning any type or format failure into a
/// ParseError that names `path`. A truncated address keeps its ShortAddress code.
template <class F>
auto parse_field(const nlohmann::json& j, const std::string& path, F&& read)
{
    try
    {
        return read(j);
    }
    catch (const Error& e)
    {
        if (e.code() == Errc::ParseError)
            throw;
        if (e.code() == Errc::ShortAddress)
            throw Error{Errc::ShortAddress, path + ": " + e.what()};
        throw Error{Errc::ParseError, path + ": " + e.what()};
    }
    catch (const std::exception& e)
    {
        throw Error{Errc::ParseError, path + ": " + e.what()};
    }
}

const nlohmann::json& require(const nlohmann::json& j, const std::string& key,
    const std::string& where = {});
u256 amount(const nlohmann::json& j, const std::string& key, const std::string& where = {});

}  // namespace aasim::io
