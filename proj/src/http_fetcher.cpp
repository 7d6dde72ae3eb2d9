#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "serpsim/urlnorm.hpp"

namespace serpsim::urlnorm {

namespace {

struct Target {
    std::string origin;  // scheme://host[:port]
    std::string path;    // path plus query, never empty
};

Target split_target(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw RedirectError("not an absolute URL: " + url);
    const auto path_start = url.find_first_of("/?", scheme_end + 3);
    Target t;
    t.origin = url.substr(0, path_start);
    t.path = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (t.path.front() == '?') t.path.insert(t.path.begin(), '/');
    return t;
}

}  // namespace

HttpRedirectFetcher::HttpRedirectFetcher(std::chrono::seconds timeout) : timeout_(timeout) {}

std::optional<std::string> HttpRedirectFetcher::redirect_location(const std::string& url) {
    const Target target = split_target(url);
    httplib::Client client(target.origin);
    if (!client.is_valid()) throw RedirectError("unsupported URL for fetching: " + url);
    client.set_follow_location(false);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);

    auto response = client.Head(target.path);
    // Some servers refuse HEAD; fall back to GET before giving up.
    if (response && (response->status == 405 || response->status == 501)) {
        response = client.Get(target.path);
    }
    if (!response) {
        throw RedirectError("request to " + url + " failed: " + httplib::to_string(response.error()));
    }
    if (response->status < 300 || response->status >= 400) return std::nullopt;
    if (!response->has_header("Location")) return std::nullopt;
    return response->get_header_value("Location");
}

}  // namespace serpsim::urlnorm
