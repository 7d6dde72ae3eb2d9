#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "serpsim/model.hpp"

namespace serpsim::testing {

inline Date day(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline std::string url_for(const std::string& id) { return "https://example.org/" + id; }

struct Entry {
    std::string id;
    std::string title;
    std::string snippet;
};

inline RankedList make_list(const std::string& engine, const std::string& query, Date date,
                            const std::vector<Entry>& entries) {
    std::vector<SearchResult> results;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        results.emplace_back(url_for(entries[i].id), entries[i].title, entries[i].snippet, static_cast<int>(i + 1));
    }
    return RankedList(engine, query, date, std::move(results));
}

// Every result gets the same title/snippet text as the same id in any other
// list built with this helper, so shared results carry identical content.
inline RankedList shared_content_list(const std::string& engine, const std::vector<std::string>& ids,
                                      const std::string& query = "q", Date date = day(2019, 5, 1)) {
    std::vector<Entry> entries;
    for (const auto& id : ids) entries.push_back({id, "title " + id + "word", "snippet about " + id + "topic"});
    return make_list(engine, query, date, entries);
}

// Content specific to `engine`: every word carries the engine name, so the
// same result in lists from two different engines has orthogonal vectors.
inline RankedList engine_content_list(const std::string& engine, const std::vector<std::string>& ids,
                                      const std::string& query = "q", Date date = day(2019, 5, 1)) {
    std::vector<Entry> entries;
    for (const auto& id : ids) {
        entries.push_back({id, engine + "heading" + id, engine + "summary" + id + " " + engine + "extra"});
    }
    return make_list(engine, query, date, entries);
}

inline std::vector<std::string> letters(const std::string& word) {
    std::vector<std::string> out;
    for (char c : word) {
        if (c != ' ') out.emplace_back(1, c);
    }
    return out;
}

/// Random pairs of equal-length lists over a shared URL pool with content
/// drawn from a small vocabulary, for property tests.
class ListPairGenerator {
public:
    explicit ListPairGenerator(std::uint64_t seed) : rng_(seed) {}

    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

    std::string text() {
        static const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "music", "album",
                                                       "official", "news", "the", "of", "q", "live"};
        std::string out;
        const std::size_t words = uniform(0, 6);
        for (std::size_t i = 0; i < words; ++i) {
            if (i) out.push_back(' ');
            out += vocab[uniform(0, vocab.size() - 1)];
        }
        return out;
    }

    RankedList list(const std::string& engine, std::size_t n, std::size_t pool) {
        std::vector<std::size_t> ids(pool);
        for (std::size_t i = 0; i < pool; ++i) ids[i] = i;
        std::shuffle(ids.begin(), ids.end(), rng_);
        std::vector<Entry> entries;
        for (std::size_t i = 0; i < n; ++i) entries.push_back({"u" + std::to_string(ids[i]), text(), text()});
        return make_list(engine, "q", day(2019, 5, 1), entries);
    }

    std::pair<RankedList, RankedList> pair() {
        const std::size_t n = uniform(1, 10);
        const std::size_t pool = n + uniform(0, 2 * n);
        return {list("A", n, pool), list("B", n, pool)};
    }

    // Messy absolute URL: mixed case, ports, dot segments, escapes, queries,
    // fragments and non-ASCII bytes.
    std::string url() {
        static const std::string alphabet = "aZ09-._~%2f%7E/./../?&=#: @!$'()*+,;\xC3\xA9";
        static const std::vector<std::string> prefixes = {"http://Example.com", "HTTPS://a.b:443",
                                                          "http://x.org:8080", "ftp://h:21", "https://WWW.Site.org"};
        std::string out = prefixes[uniform(0, prefixes.size() - 1)] + "/";
        for (std::size_t k = 0, len = uniform(0, 23); k < len; ++k) out.push_back(alphabet[uniform(0, alphabet.size() - 1)]);
        return out;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace serpsim::testing
