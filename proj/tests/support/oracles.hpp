#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "serpsim/model.hpp"
#include "serpsim/textsim.hpp"

namespace serpsim::testing {

// Exhaustive maximum of sum |pos_a - pos_b| over every way to place m shared
// symbols in two length-n lists: choose the m positions in list A, then every
// injective assignment of those symbols to positions in list B.
// Returns {max displacement, number of placements examined}.
inline std::pair<std::int64_t, std::int64_t> brute_force_max_displacement(int m, int n) {
    if (m == 0) return {0, 1};
    std::int64_t best = -1;
    std::int64_t examined = 0;
    std::vector<int> select(static_cast<std::size_t>(n), 0);
    std::fill(select.end() - m, select.end(), 1);
    do {
        std::vector<int> pos_a;
        for (int i = 0; i < n; ++i) {
            if (select[static_cast<std::size_t>(i)]) pos_a.push_back(i + 1);
        }
        // Every ordered choice of m distinct positions in B.
        std::vector<int> all_b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) all_b[static_cast<std::size_t>(i)] = i + 1;
        std::vector<int> chosen(static_cast<std::size_t>(n), 0);
        std::fill(chosen.end() - m, chosen.end(), 1);
        do {
            std::vector<int> pos_b;
            for (int i = 0; i < n; ++i) {
                if (chosen[static_cast<std::size_t>(i)]) pos_b.push_back(i + 1);
            }
            do {
                std::int64_t total = 0;
                for (int k = 0; k < m; ++k) {
                    total += std::abs(pos_a[static_cast<std::size_t>(k)] - pos_b[static_cast<std::size_t>(k)]);
                }
                best = std::max(best, total);
                ++examined;
            } while (std::next_permutation(pos_b.begin(), pos_b.end()));
        } while (std::next_permutation(chosen.begin(), chosen.end()));
    } while (std::next_permutation(select.begin(), select.end()));
    return {best, examined};
}

// Straight-line evaluation of T from its definition, sharing only the
// tokenizer with the library.
struct ReferenceT {
    double s = 0.0;
    double h = 0.0;
    double t = 0.0;
    double score = 0.0;
    double total = 0.0;
};

inline double reference_cosine_distance(const std::map<std::string, double>& x,
                                        const std::map<std::string, double>& y) {
    if (x.empty() && y.empty()) return 0.0;
    if (x.empty() || y.empty()) return 1.0;
    double dot = 0.0, nx = 0.0, ny = 0.0;
    for (const auto& [k, v] : x) {
        nx += v * v;
        if (auto it = y.find(k); it != y.end()) dot += v * it->second;
    }
    for (const auto& [k, v] : y) ny += v * v;
    return std::clamp(1.0 - dot / std::sqrt(nx * ny), 0.0, 1.0);
}

inline std::map<std::string, double> reference_terms(const std::string& text, const std::string& query,
                                                     const textsim::StopwordSet& stopwords) {
    std::map<std::string, double> out;
    const auto terms = textsim::tokenize(text, query, stopwords);
    for (const auto& [k, v] : terms.counts()) out[k] = static_cast<double>(v);
    return out;
}

inline ReferenceT reference_t(const RankedList& a, const RankedList& b, const MetricConfig& cfg,
                              const textsim::StopwordSet& stopwords) {
    ReferenceT out;
    const int n = static_cast<int>(a.size());
    int m = 0;
    double displacement = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const auto& ra = a.at_rank(static_cast<std::size_t>(i));
            const auto& rb = b.at_rank(static_cast<std::size_t>(j));
            if (ra.url() != rb.url()) continue;
            ++m;
            displacement += std::abs(i - j);
            out.s += reference_cosine_distance(reference_terms(ra.snippet(), a.query(), stopwords),
                                               reference_terms(rb.snippet(), b.query(), stopwords));
            out.h += reference_cosine_distance(reference_terms(ra.title(), a.query(), stopwords),
                                               reference_terms(rb.title(), b.query(), stopwords));
        }
    }
    if (m == 0) return out;
    double worst = 0.0;
    for (int i = 1; i <= m; ++i) worst += (i % 2 == 0) ? n + 1 - i : n - i;
    out.t = worst > 0 ? displacement / worst : 0.0;
    out.score = (3.0 * m + 1 - cfg.a() * out.s - cfg.b() * out.h - cfg.c() * out.t) / (3.0 * n + 1);
    double boost = 0.0;
    for (std::size_t i = 1; i <= std::min<std::size_t>(cfg.r(), a.size()); ++i) {
        if (a.at_rank(i).url() == b.at_rank(i).url()) boost += cfg.boost_weights()[i - 1] * (1.0 - out.score);
    }
    out.total = out.score + boost;
    return out;
}

}  // namespace serpsim::testing
