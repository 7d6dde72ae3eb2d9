#include "serpsim/urlnorm.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace serpsim::urlnorm {

namespace {

struct UrlParts {
    std::string scheme;
    std::string userinfo;  // without the trailing '@'
    bool has_userinfo = false;
    std::string host;
    std::string port;
    bool has_port = false;
    std::string path;
    std::string query;
    bool has_query = false;
};

bool is_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_hex(unsigned char c) { return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'); }

int hex_value(unsigned char c) {
    if (is_digit(c)) return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

char to_lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), to_lower_ascii);
    return out;
}

bool is_unreserved(unsigned char c) {
    return is_alpha(c) || is_digit(c) || c == '-' || c == '.' || c == '_' || c == '~';
}

bool is_sub_delim(unsigned char c) {
    switch (c) {
        case '!': case '$': case '&': case '\'': case '(': case ')':
        case '*': case '+': case ',': case ';': case '=':
            return true;
        default:
            return false;
    }
}

bool may_appear_literally(unsigned char c, bool in_query) {
    if (is_unreserved(c) || is_sub_delim(c) || c == ':' || c == '@' || c == '/') return true;
    return in_query && c == '?';
}

void append_escape(std::string& out, unsigned char byte) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    out.push_back('%');
    out.push_back(kHex[byte >> 4]);
    out.push_back(kHex[byte & 0xF]);
}

// Decodes escapes of unreserved characters, upper-cases the rest and escapes
// bytes that cannot appear literally. Malformed '%' sequences are kept as is.
std::string normalize_escapes(std::string_view in, bool in_query) {
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const auto c = static_cast<unsigned char>(in[i]);
        if (c == '%') {
            if (i + 2 < in.size() && is_hex(in[i + 1]) && is_hex(in[i + 2])) {
                const auto byte = static_cast<unsigned char>(hex_value(in[i + 1]) * 16 + hex_value(in[i + 2]));
                if (is_unreserved(byte)) {
                    out.push_back(static_cast<char>(byte));
                } else {
                    append_escape(out, byte);
                }
                i += 2;
            } else {
                out.push_back('%');
            }
        } else if (may_appear_literally(c, in_query)) {
            out.push_back(static_cast<char>(c));
        } else {
            append_escape(out, c);
        }
    }
    return out;
}

// RFC 3986 remove_dot_segments.
std::string remove_dot_segments(std::string_view path) {
    std::string input(path);
    std::string output;
    while (!input.empty()) {
        if (input.starts_with("../")) {
            input.erase(0, 3);
        } else if (input.starts_with("./")) {
            input.erase(0, 2);
        } else if (input.starts_with("/./")) {
            input.erase(0, 2);
        } else if (input == "/.") {
            input = "/";
        } else if (input.starts_with("/../") || input == "/..") {
            input = input.size() == 3 ? std::string("/") : input.substr(3);
            const auto cut = output.rfind('/');
            output.erase(cut == std::string::npos ? 0 : cut);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            const std::size_t start = input[0] == '/' ? 1 : 0;
            const std::size_t next = input.find('/', start);
            const std::size_t len = next == std::string::npos ? input.size() : next;
            output.append(input, 0, len);
            input.erase(0, len);
        }
    }
    return output;
}

bool valid_scheme(std::string_view s) {
    if (s.empty() || !is_alpha(s[0])) return false;
    return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) {
        return is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.';
    });
}

std::string_view trim(std::string_view s) {
    auto ws = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::optional<UrlParts> parse_absolute(std::string_view url) {
    UrlParts parts;
    const auto colon = url.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    parts.scheme = std::string(url.substr(0, colon));
    if (!valid_scheme(parts.scheme)) return std::nullopt;
    std::string_view rest = url.substr(colon + 1);
    if (!rest.starts_with("//")) return std::nullopt;
    rest.remove_prefix(2);

    const auto auth_end = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, auth_end);
    rest = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);

    if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
        parts.userinfo = std::string(authority.substr(0, at));
        parts.has_userinfo = true;
        authority.remove_prefix(at + 1);
    }
    std::string_view host = authority;
    if (authority.starts_with('[')) {
        const auto close = authority.find(']');
        if (close == std::string_view::npos) return std::nullopt;
        host = authority.substr(0, close + 1);
        std::string_view tail = authority.substr(close + 1);
        if (!tail.empty()) {
            if (tail[0] != ':') return std::nullopt;
            parts.port = std::string(tail.substr(1));
            parts.has_port = true;
        }
    } else if (const auto pc = authority.rfind(':'); pc != std::string_view::npos) {
        host = authority.substr(0, pc);
        parts.port = std::string(authority.substr(pc + 1));
        parts.has_port = true;
    }
    if (host.empty()) return std::nullopt;
    const bool host_ok = std::none_of(host.begin(), host.end(), [](unsigned char c) {
        return c <= 0x20 || c == 0x7F || c == '<' || c == '>' || c == '"' || c == '\\' || c == '^' ||
               c == '`' || c == '{' || c == '|' || c == '}';
    });
    if (!host_ok) return std::nullopt;
    parts.host = std::string(host);
    if (parts.has_port && !std::all_of(parts.port.begin(), parts.port.end(), is_digit)) return std::nullopt;

    const auto hash = rest.find('#');
    if (hash != std::string_view::npos) rest = rest.substr(0, hash);
    const auto qmark = rest.find('?');
    parts.path = std::string(rest.substr(0, qmark));
    if (qmark != std::string_view::npos) {
        parts.query = std::string(rest.substr(qmark + 1));
        parts.has_query = true;
    }
    return parts;
}

std::string_view default_port(std::string_view scheme) {
    if (scheme == "http" || scheme == "ws") return "80";
    if (scheme == "https" || scheme == "wss") return "443";
    if (scheme == "ftp") return "21";
    return {};
}

std::string sort_query_params(const std::string& query) {
    std::vector<std::string> params;
    std::size_t start = 0;
    while (true) {
        const auto amp = query.find('&', start);
        params.push_back(query.substr(start, amp == std::string::npos ? std::string::npos : amp - start));
        if (amp == std::string::npos) break;
        start = amp + 1;
    }
    auto key = [](const std::string& p) { return std::string_view(p).substr(0, p.find('=')); };
    std::stable_sort(params.begin(), params.end(),
                     [&](const std::string& x, const std::string& y) { return key(x) < key(y); });
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out.push_back('&');
        out += params[i];
    }
    return out;
}

std::string chain_text(const std::vector<std::string>& chain, const std::string& last) {
    std::string text;
    for (const auto& u : chain) text += u + " -> ";
    return text + last;
}

}  // namespace

std::string canonicalize(std::string_view raw, const CanonicalizeOptions& options) {
    const std::string_view url = trim(raw);
    auto parsed = parse_absolute(url);
    if (!parsed) throw UrlParseError(std::string(raw));
    UrlParts& p = *parsed;

    std::string out = lower_ascii(p.scheme);
    out += "://";
    if (p.has_userinfo) {
        out += normalize_escapes(p.userinfo, false);
        out.push_back('@');
    }
    std::string host = lower_ascii(p.host);
    if (options.strip_www && host.starts_with("www.") && host.size() > 4) host.erase(0, 4);
    out += host;

    if (p.has_port && !p.port.empty()) {
        unsigned long port = 0;
        auto [ptr, ec] = std::from_chars(p.port.data(), p.port.data() + p.port.size(), port);
        if (ec != std::errc{} || port > 65535) throw UrlParseError(std::string(raw));
        const std::string port_text = std::to_string(port);
        if (port_text != default_port(lower_ascii(p.scheme))) {
            out.push_back(':');
            out += port_text;
        }
    }

    std::string path = remove_dot_segments(normalize_escapes(p.path, false));
    while (path.size() > 1 && path.back() == '/') path.pop_back();
    if (path.empty()) path = "/";
    out += path;

    if (p.has_query && !p.query.empty()) {
        std::string query = normalize_escapes(p.query, true);
        if (options.sort_query) query = sort_query_params(query);
        out.push_back('?');
        out += query;
    }
    return out;
}

std::string resolve_reference(std::string_view base, std::string_view reference) {
    reference = trim(reference);
    if (const auto colon = reference.find(':');
        colon != std::string_view::npos && valid_scheme(reference.substr(0, colon)) &&
        reference.find_first_of("/?#") > colon) {
        return std::string(reference);
    }
    const auto parsed = parse_absolute(trim(base));
    if (!parsed) throw UrlParseError(std::string(base));
    const UrlParts& b = *parsed;
    if (reference.starts_with("//")) return b.scheme + ":" + std::string(reference);

    std::string origin = b.scheme + "://";
    if (b.has_userinfo) origin += b.userinfo + "@";
    origin += b.host;
    if (b.has_port) origin += ":" + b.port;
    const std::string base_path = b.path.empty() ? std::string("/") : b.path;
    const std::string base_query = b.has_query ? "?" + b.query : std::string();

    if (reference.empty() || reference.starts_with('#')) return origin + base_path + base_query;
    if (reference.starts_with('/')) return origin + std::string(reference);
    if (reference.starts_with('?')) return origin + base_path + std::string(reference);
    const auto dir_end = base_path.rfind('/');
    return origin + base_path.substr(0, dir_end + 1) + std::string(reference);
}

RedirectCache::RedirectCache(const RedirectCache& other) {
    auto copy = other.snapshot();
    entries_ = {copy.begin(), copy.end()};
}

RedirectCache& RedirectCache::operator=(const RedirectCache& other) {
    if (this != &other) {
        auto copy = other.snapshot();
        std::unique_lock lock(mutex_);
        entries_ = {copy.begin(), copy.end()};
    }
    return *this;
}

RedirectCache RedirectCache::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open redirect cache " + path.string());
    RedirectCache cache;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
            line.find('\t', tab + 1) != std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'source<TAB>target'");
        }
        cache.insert(line.substr(0, tab), line.substr(tab + 1));
    }
    return cache;
}

void RedirectCache::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write redirect cache " + path.string());
    for (const auto& [source, target] : snapshot()) out << source << '\t' << target << '\n';
}

std::optional<std::string> RedirectCache::lookup(std::string_view source) const {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(source); it != entries_.end()) return it->second;
    return std::nullopt;
}

void RedirectCache::insert(std::string source, std::string target) {
    std::unique_lock lock(mutex_);
    entries_.insert_or_assign(std::move(source), std::move(target));
}

std::size_t RedirectCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::map<std::string, std::string> RedirectCache::snapshot() const {
    std::shared_lock lock(mutex_);
    return {entries_.begin(), entries_.end()};
}

std::string resolve_redirects(const std::string& url, RedirectCache& cache, ResolveMode mode,
                              RedirectFetcher* fetcher, const CanonicalizeOptions& options) {
    if (mode == ResolveMode::online && fetcher == nullptr) {
        throw RedirectError("online redirect resolution needs a fetcher");
    }
    std::vector<std::string> chain{url};
    std::unordered_set<std::string> seen{url};
    std::string current = url;
    while (true) {
        std::string next;
        if (auto cached = cache.lookup(current)) {
            next = std::move(*cached);
            if (next == current) break;
        } else if (mode == ResolveMode::offline) {
            break;
        } else {
            std::optional<std::string> location;
            try {
                location = fetcher->redirect_location(current);
            } catch (const RedirectError& e) {
                throw RedirectError("redirect chain " + chain_text(chain, "?") + " failed: " + e.what());
            }
            if (!location) {
                cache.insert(current, current);
                break;
            }
            try {
                next = canonicalize(resolve_reference(current, *location), options);
            } catch (const UrlParseError& e) {
                throw RedirectError("redirect chain " + chain_text(chain, *location) +
                                    " has an unusable target: " + e.what());
            }
        }
        if (!seen.insert(next).second) {
            throw RedirectError("redirect loop: " + chain_text(chain, next));
        }
        if (chain.size() > kMaxRedirectHops) {
            throw RedirectError("more than " + std::to_string(kMaxRedirectHops) +
                                " redirect hops: " + chain_text(chain, next));
        }
        chain.push_back(next);
        current = std::move(next);
    }
    if (mode == ResolveMode::online) {
        for (const auto& hop : chain) cache.insert(hop, current);
    }
    return current;
}

std::vector<std::string> resolve_all(std::span<const std::string> urls, RedirectCache& cache,
                                     ResolveMode mode, RedirectFetcher* fetcher,
                                     std::size_t max_in_flight, const CanonicalizeOptions& options) {
    std::vector<std::string> out(urls.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min(max_in_flight, urls.size()));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= urls.size()) return;
            try {
                out[i] = resolve_redirects(urls[i], cache, mode, fetcher, options);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace serpsim::urlnorm
