#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "serpsim/errors.hpp"

namespace serpsim::urlnorm {

struct CanonicalizeOptions {
    // Drop a leading "www." label from the host.
    bool strip_www = false;
    // Sort query parameters by key (stable for equal keys).
    bool sort_query = false;
};

/// Canonical form of an absolute URL:
///  - scheme and host lowercased, default ports dropped, fragment dropped;
///  - percent-escapes of unreserved characters decoded, all other escapes
///    upper-cased, bytes that may not appear literally get escaped;
///  - dot-segments resolved, trailing slashes on non-root paths removed,
///    an empty path becomes "/";
///  - query parameter order kept unless options.sort_query.
///
/// Throws UrlParseError carrying the input when it is not an absolute
/// hierarchical URL (scheme "://" host ...).
std::string canonicalize(std::string_view url, const CanonicalizeOptions& options = {});

/// Resolves a possibly relative reference (e.g. a Location header) against an
/// absolute base URL. The result is not canonicalized.
std::string resolve_reference(std::string_view base, std::string_view reference);

/// Thread-safe source -> final target mapping. Concurrent inserts of the same
/// key are last-write-wins.
class RedirectCache {
public:
    RedirectCache() = default;
    RedirectCache(const RedirectCache& other);
    RedirectCache& operator=(const RedirectCache& other);

    // One "source<TAB>target" pair per line; blank lines are skipped.
    static RedirectCache load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::optional<std::string> lookup(std::string_view source) const;
    void insert(std::string source, std::string target);
    std::size_t size() const;
    std::map<std::string, std::string> snapshot() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::string, std::less<>> entries_;
};

/// Where an online resolver gets 3xx information from.
class RedirectFetcher {
public:
    virtual ~RedirectFetcher() = default;
    // Returns the Location of a 3xx response, or nullopt for any non-3xx
    // status. Throws RedirectError on transport failure.
    virtual std::optional<std::string> redirect_location(const std::string& url) = 0;
};

/// Issues HEAD requests via cpp-httplib.
class HttpRedirectFetcher : public RedirectFetcher {
public:
    explicit HttpRedirectFetcher(std::chrono::seconds timeout = std::chrono::seconds(10));
    std::optional<std::string> redirect_location(const std::string& url) override;

private:
    std::chrono::seconds timeout_;
};

enum class ResolveMode { offline, online };

inline constexpr std::size_t kMaxRedirectHops = 10;

/// Follows redirects from a canonical URL to its final canonical target.
///
/// Offline, only the cache is consulted (chains a->b, b->c resolve to c) and
/// unknown URLs come back unchanged. Online, uncached hops are fetched and the
/// final target is recorded for every URL on the chain. Loops and chains
/// longer than kMaxRedirectHops throw RedirectError naming the chain.
std::string resolve_redirects(const std::string& url, RedirectCache& cache, ResolveMode mode,
                              RedirectFetcher* fetcher = nullptr,
                              const CanonicalizeOptions& options = {});

/// Resolves many URLs with at most max_in_flight concurrent lookups; output
/// order matches input order. The first error is rethrown after all workers stop.
std::vector<std::string> resolve_all(std::span<const std::string> urls, RedirectCache& cache,
                                     ResolveMode mode, RedirectFetcher* fetcher,
                                     std::size_t max_in_flight = 8,
                                     const CanonicalizeOptions& options = {});

}  // namespace serpsim::urlnorm
