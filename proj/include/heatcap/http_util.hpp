#pragma once

#include "heatcap/error.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

namespace heatcap::net {

/// "http://host:port/prefix" -> origin "http://host:port" and path "/prefix".
struct Endpoint {
    std::string origin;
    std::string path_prefix;

    std::string path(std::string_view suffix) const
    {
        std::string p = path_prefix;
        while (!p.empty() && p.back() == '/') p.pop_back();
        return p + std::string(suffix);
    }
};

inline Endpoint parse_endpoint(std::string_view url)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || url.size() == scheme_end + 3)
        throw Error(ErrorCode::InvalidConfig, "endpoint must look like http://host[:port][/path]: " + std::string(url));
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw Error(ErrorCode::InvalidConfig, "unsupported URL scheme: " + std::string(scheme));
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string_view::npos) return {std::string(url), ""};
    return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

inline std::unique_ptr<httplib::Client> make_client(const Endpoint& ep, double timeout_s)
{
    auto client = std::make_unique<httplib::Client>(ep.origin);
    const auto usec = std::chrono::microseconds(static_cast<long long>(std::llround(timeout_s * 1e6)));
    const auto sec = std::chrono::duration_cast<std::chrono::seconds>(usec);
    const auto rest = usec - sec;
    client->set_connection_timeout(sec.count(), rest.count());
    client->set_read_timeout(sec.count(), rest.count());
    client->set_write_timeout(sec.count(), rest.count());
    return client;
}

inline bool is_timeout(httplib::Error e) noexcept
{
    return e == httplib::Error::Read || e == httplib::Error::Write || e == httplib::Error::ConnectionTimeout;
}

inline std::string base64_encode(std::string_view bytes)
{
    return httplib::detail::base64_encode(std::string(bytes));
}

} // namespace heatcap::net
