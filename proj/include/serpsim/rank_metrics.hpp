#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "serpsim/model.hpp"

namespace serpsim::rank {

/// Positions of the results two equal-length lists have in common.
struct RankAlignment {
    std::vector<std::string> common;            // sorted
    std::map<std::string, std::size_t> pos_a;   // URL -> 1-based rank, common URLs only
    std::map<std::string, std::size_t> pos_b;
    std::size_t n = 0;

    std::size_t m() const noexcept { return common.size(); }
};

// Throws DataError when the lists differ in length.
RankAlignment align(const RankedList& list_a, const RankedList& list_b);

// Largest displacement available to the i-th common element of two length-n
// lists: n + 1 - i for even i, n - i for odd i. Throws std::out_of_range
// unless 1 <= i <= n.
std::int64_t phi(std::int64_t i, std::int64_t n);

/// Upper bound of the summed rank displacement of m common elements in two
/// length-n lists: the sum of phi(i, n) for i = 1..m.
std::int64_t t_max(std::int64_t m, std::int64_t n);

// Total |pos_a - pos_b| over the common results.
std::int64_t displacement(const RankAlignment& alignment);

/// Summed displacement normalized by t_max, in [0,1]; 0 when nothing is shared.
double transposition_penalty(const RankAlignment& alignment);

/// Footrule similarity over common elements, normalized by t_max(m, n). 1 when m <= 1.
double spearman_footrule_sim(const RankedList& list_a, const RankedList& list_b);

/// 1 - discordant pairs / C(m,2) over common elements. 1 when m < 2.
double kendall_tau_sim(const RankedList& list_a, const RankedList& list_b);

/// Jaro similarity with whole results (by URL) as symbols.
double jaro_sim(const RankedList& list_a, const RankedList& list_b);

struct JaroWinklerParams {
    double p = 0.1;
    std::size_t l_max = 3;
};

/// Jaro similarity raised by p per exactly matching leading result, up to
/// l_max of them. Throws std::invalid_argument unless 0 <= p * l_max <= 1.
double jaro_winkler_sim(const RankedList& list_a, const RankedList& list_b,
                        const JaroWinklerParams& params = {});

}  // namespace serpsim::rank
