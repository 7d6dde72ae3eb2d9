#include "serpsim/rank_metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace serpsim::rank {

namespace {

void require_equal_lengths(const RankedList& a, const RankedList& b) {
    if (a.size() != b.size()) {
        throw DataError("ranked lists must share a common length (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    }
}

std::int64_t abs_diff(std::size_t x, std::size_t y) {
    return x > y ? static_cast<std::int64_t>(x - y) : static_cast<std::int64_t>(y - x);
}

}  // namespace

RankAlignment align(const RankedList& list_a, const RankedList& list_b) {
    require_equal_lengths(list_a, list_b);
    RankAlignment al;
    al.n = list_a.size();
    std::unordered_map<std::string_view, std::size_t> in_b;
    for (const auto& r : list_b.results()) in_b.emplace(r.url(), static_cast<std::size_t>(r.rank()));
    for (const auto& r : list_a.results()) {
        if (auto it = in_b.find(r.url()); it != in_b.end()) {
            al.common.push_back(r.url());
            al.pos_a.emplace(r.url(), static_cast<std::size_t>(r.rank()));
            al.pos_b.emplace(r.url(), it->second);
        }
    }
    std::sort(al.common.begin(), al.common.end());
    return al;
}

std::int64_t phi(std::int64_t i, std::int64_t n) {
    if (n < 1 || i < 1 || i > n) {
        throw std::out_of_range("phi(i, n) needs 1 <= i <= n, got i=" + std::to_string(i) +
                                ", n=" + std::to_string(n));
    }
    return i % 2 == 0 ? n + 1 - i : n - i;
}

std::int64_t t_max(std::int64_t m, std::int64_t n) {
    if (m < 0 || n < 1 || m > n) {
        throw std::out_of_range("t_max(m, n) needs 0 <= m <= n and n >= 1, got m=" +
                                std::to_string(m) + ", n=" + std::to_string(n));
    }
    std::int64_t total = 0;
    for (std::int64_t i = 1; i <= m; ++i) total += phi(i, n);
    return total;
}

std::int64_t displacement(const RankAlignment& alignment) {
    std::int64_t total = 0;
    for (const auto& url : alignment.common) {
        total += abs_diff(alignment.pos_a.at(url), alignment.pos_b.at(url));
    }
    return total;
}

double transposition_penalty(const RankAlignment& alignment) {
    if (alignment.m() == 0) return 0.0;
    const std::int64_t moved = displacement(alignment);
    if (moved == 0) return 0.0;
    const auto bound = t_max(static_cast<std::int64_t>(alignment.m()), static_cast<std::int64_t>(alignment.n));
    return static_cast<double>(moved) / static_cast<double>(bound);
}

double spearman_footrule_sim(const RankedList& list_a, const RankedList& list_b) {
    const auto al = align(list_a, list_b);
    if (al.m() <= 1) return 1.0;
    return 1.0 - transposition_penalty(al);
}

double kendall_tau_sim(const RankedList& list_a, const RankedList& list_b) {
    const auto al = align(list_a, list_b);
    const std::size_t m = al.m();
    if (m < 2) return 1.0;
    std::vector<std::pair<std::size_t, std::size_t>> pos;
    pos.reserve(m);
    for (const auto& url : al.common) pos.emplace_back(al.pos_a.at(url), al.pos_b.at(url));
    std::size_t discordant = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const bool a_less = pos[i].first < pos[j].first;
            const bool b_less = pos[i].second < pos[j].second;
            if (a_less != b_less) ++discordant;
        }
    }
    const double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
    return 1.0 - static_cast<double>(discordant) / pairs;
}

double jaro_sim(const RankedList& list_a, const RankedList& list_b) {
    require_equal_lengths(list_a, list_b);
    const std::size_t n = list_a.size();
    const std::size_t window = n / 2 >= 1 ? n / 2 - 1 : 0;

    // URLs are unique per list, so a symbol matches iff the other list holds it
    // within the window.
    std::unordered_map<std::string_view, std::size_t> in_b;
    for (const auto& r : list_b.results()) in_b.emplace(r.url(), static_cast<std::size_t>(r.rank()));
    std::vector<bool> matched_b(n + 1, false);
    std::vector<std::string_view> order_a;
    for (const auto& r : list_a.results()) {
        auto it = in_b.find(r.url());
        if (it == in_b.end()) continue;
        if (static_cast<std::size_t>(abs_diff(static_cast<std::size_t>(r.rank()), it->second)) <= window) {
            order_a.push_back(r.url());
            matched_b[it->second] = true;
        }
    }
    const std::size_t m = order_a.size();
    if (m == 0) return 0.0;

    std::vector<std::string_view> order_b;
    for (std::size_t rank = 1; rank <= n; ++rank) {
        if (matched_b[rank]) order_b.push_back(list_b.at_rank(rank).url());
    }
    std::size_t out_of_order = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (order_a[k] != order_b[k]) ++out_of_order;
    }
    const double transpositions = static_cast<double>(out_of_order) / 2.0;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return (md / nd + md / nd + (md - transpositions) / md) / 3.0;
}

double jaro_winkler_sim(const RankedList& list_a, const RankedList& list_b, const JaroWinklerParams& params) {
    const double scale = params.p * static_cast<double>(params.l_max);
    if (!(params.p >= 0.0) || scale > 1.0) {
        throw std::invalid_argument("Jaro-Winkler needs 0 <= p * l_max <= 1");
    }
    const double dj = jaro_sim(list_a, list_b);
    std::size_t prefix = 0;
    const std::size_t limit = std::min(params.l_max, list_a.size());
    while (prefix < limit && list_a.results()[prefix].url() == list_b.results()[prefix].url()) ++prefix;
    return dj + static_cast<double>(prefix) * params.p * (1.0 - dj);
}

}  // namespace serpsim::rank
