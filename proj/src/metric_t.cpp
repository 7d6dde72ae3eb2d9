#include "serpsim/metric_t.hpp"

#include <algorithm>
#include <stdexcept>

#include "serpsim/rank_metrics.hpp"

namespace serpsim {

double adjusted_score(const PenaltyInputs& in, const MetricConfig& cfg) {
    if (in.n == 0 || in.m > in.n) throw std::invalid_argument("adjusted score needs 0 <= m <= n, n >= 1");
    if (in.m == 0) return 0.0;
    const double m = static_cast<double>(in.m);
    const double n = static_cast<double>(in.n);
    const double numerator = 3.0 * m + 1.0 - cfg.a() * in.s - cfg.b() * in.h - cfg.c() * in.t;
    return numerator / (3.0 * n + 1.0);
}

TBreakdown score_s(const RankedList& list_a, const RankedList& list_b, const MetricConfig& cfg,
                   const textsim::StopwordSet& stopwords) {
    if (list_a.size() != list_b.size()) {
        throw DataError("cannot compare lists of different length (" + std::to_string(list_a.size()) +
                        " vs " + std::to_string(list_b.size()) + ")");
    }
    if (list_a.query() != list_b.query()) {
        throw DataError("cannot compare lists for different queries ('" + list_a.query() + "' vs '" +
                        list_b.query() + "')");
    }
    const auto alignment = rank::align(list_a, list_b);
    TBreakdown out;
    out.m = alignment.m();
    out.n = alignment.n;
    if (out.m > 0) {
        out.s = textsim::content_penalty(list_a, list_b, textsim::ContentField::snippet, stopwords);
        out.h = textsim::content_penalty(list_a, list_b, textsim::ContentField::title, stopwords);
        out.t = rank::transposition_penalty(alignment);
    }
    out.score = adjusted_score({out.m, out.n, out.s, out.h, out.t}, cfg);
    out.total = out.score;
    return out;
}

double positional_boost(const RankedList& list_a, const RankedList& list_b, double score,
                        const MetricConfig& cfg) {
    if (!(score >= 0.0 && score <= 1.0)) throw std::invalid_argument("boost needs 0 <= S <= 1");
    const auto& weights = cfg.boost_weights();
    const std::size_t depth = std::min({weights.size(), list_a.size(), list_b.size()});
    double total = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (list_a.results()[i].url() == list_b.results()[i].url()) total += weights[i] * (1.0 - score);
    }
    return total;
}

TBreakdown metric_t(const RankedList& list_a, const RankedList& list_b, const MetricConfig& cfg,
                    const textsim::StopwordSet& stopwords) {
    TBreakdown out = score_s(list_a, list_b, cfg, stopwords);
    out.boost = positional_boost(list_a, list_b, out.score, cfg);
    out.total = out.score + out.boost;
    return out;
}

}  // namespace serpsim
