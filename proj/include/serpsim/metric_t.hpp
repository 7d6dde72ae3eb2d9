#pragma once

#include <cstddef>

#include "serpsim/model.hpp"
#include "serpsim/textsim.hpp"

namespace serpsim {

/// All intermediate quantities of one T evaluation.
struct TBreakdown {
    std::size_t m = 0;  // shared results
    std::size_t n = 0;  // common list length
    double s = 0.0;     // snippet penalty, in [0, m]
    double h = 0.0;     // title penalty, in [0, m]
    double t = 0.0;     // transposition penalty, in [0, 1]
    double score = 0.0; // adjusted score S
    double boost = 0.0;
    double total = 0.0; // T = S + boost
};

struct PenaltyInputs {
    std::size_t m = 0;
    std::size_t n = 0;
    double s = 0.0;
    double h = 0.0;
    double t = 0.0;
};

/// (3m + 1 - a*s - b*h - c*t) / (3n + 1), or 0 when m = 0.
double adjusted_score(const PenaltyInputs& in, const MetricConfig& cfg);

/// Computes m, s, h, t and the adjusted score S; boost stays 0 and total = S.
/// Throws DataError for unequal lengths or queries.
TBreakdown score_s(const RankedList& list_a, const RankedList& list_b, const MetricConfig& cfg,
                   const textsim::StopwordSet& stopwords);

/// Sum over the first r positions where both lists hold the same URL of
/// w_i * (1 - S).
double positional_boost(const RankedList& list_a, const RankedList& list_b, double score,
                        const MetricConfig& cfg);

/// The combined content-and-ranking similarity T = S + boost.
TBreakdown metric_t(const RankedList& list_a, const RankedList& list_b, const MetricConfig& cfg,
                    const textsim::StopwordSet& stopwords);

}  // namespace serpsim
