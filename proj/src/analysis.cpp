#include "serpsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "parallel.hpp"
#include "serpsim/rank_metrics.hpp"

namespace serpsim::analysis {

namespace {

struct CellRef {
    std::size_t index;
    const RankedList* a;
    const RankedList* b;
};

struct Grid {
    std::vector<Date> days;
    std::vector<std::string> queries;
    std::vector<CellRef> cells;  // only cells where both lists exist
};

Grid build_grid(const SerpDataset& ds, const std::string& engine_a, const std::string& engine_b) {
    for (const auto* engine : {&engine_a, &engine_b}) {
        if (!ds.has_engine(*engine)) throw DataError("engine '" + *engine + "' is not in the dataset");
    }
    std::set<Date> days;
    std::set<std::string> queries;
    for (const auto& [key, list] : ds.records()) {
        if (key.engine == engine_a || key.engine == engine_b) {
            days.insert(key.date);
            queries.insert(key.query);
        }
    }
    Grid grid{{days.begin(), days.end()}, {queries.begin(), queries.end()}, {}};
    for (std::size_t d = 0; d < grid.days.size(); ++d) {
        for (std::size_t q = 0; q < grid.queries.size(); ++q) {
            const auto* a = ds.find({engine_a, grid.queries[q], grid.days[d]});
            const auto* b = ds.find({engine_b, grid.queries[q], grid.days[d]});
            if (a && b) grid.cells.push_back({d * grid.queries.size() + q, a, b});
        }
    }
    return grid;
}

// Adds the failing cell to a comparison error.
[[noreturn]] void rethrow_for_cell(const CellRef& cell, const std::exception& e) {
    throw DataError("cannot compare " + cell.a->engine() + " and " + cell.b->engine() + " for '" +
                    cell.a->query() + "' on " + format_date(cell.a->date()) + ": " + e.what());
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

const RankedList* pick(const SerpDataset& ds, const std::string& engine, const std::string& query,
                       const PeriodDate& when) {
    const auto dates = ds.dates(engine, query);
    if (dates.empty()) return nullptr;
    switch (when.kind) {
        case PeriodDate::Kind::first:
            return ds.find({engine, query, dates.front()});
        case PeriodDate::Kind::last:
            return ds.find({engine, query, dates.back()});
        case PeriodDate::Kind::exact:
            return ds.find({engine, query, when.exact});
    }
    return nullptr;
}

}  // namespace

std::string to_string(const ListKey& key) {
    return key.engine + "/'" + key.query + "'/" + format_date(key.date);
}

void SerpDataset::insert(RankedList list) {
    ListKey key{list.engine(), list.query(), list.date()};
    if (records_.contains(key)) throw DataError("duplicate list for " + to_string(key));
    records_.emplace(std::move(key), std::move(list));
}

void SerpDataset::set_category(const std::string& query, const std::string& category) {
    auto [it, inserted] = categories_.emplace(query, category);
    if (!inserted && it->second != category) {
        throw DataError("query '" + query + "' has conflicting categories '" + it->second + "' and '" +
                        category + "'");
    }
}

const RankedList* SerpDataset::find(const ListKey& key) const {
    const auto it = records_.find(key);
    return it == records_.end() ? nullptr : &it->second;
}

bool SerpDataset::has_engine(const std::string& engine) const {
    const auto it = records_.lower_bound(ListKey{engine, "", Date{std::chrono::year::min(), std::chrono::January, std::chrono::day{1}}});
    return it != records_.end() && it->first.engine == engine;
}

std::vector<std::string> SerpDataset::engines() const {
    std::vector<std::string> out;
    for (const auto& [key, list] : records_) {
        if (out.empty() || out.back() != key.engine) out.push_back(key.engine);
    }
    return out;
}

std::vector<std::string> SerpDataset::queries(const std::string& engine) const {
    std::vector<std::string> out;
    for (const auto& [key, list] : records_) {
        if (key.engine == engine && (out.empty() || out.back() != key.query)) out.push_back(key.query);
    }
    return out;
}

std::vector<Date> SerpDataset::dates(const std::string& engine, const std::string& query) const {
    std::vector<Date> out;
    for (const auto& [key, list] : records_) {
        if (key.engine == engine && key.query == query) out.push_back(key.date);
    }
    return out;
}

std::optional<std::string> SerpDataset::category(const std::string& query) const {
    const auto it = categories_.find(query);
    if (it == categories_.end()) return std::nullopt;
    return it->second;
}

std::optional<MetricKind> parse_metric_kind(std::string_view name) {
    if (name == "t") return MetricKind::t;
    if (name == "footrule") return MetricKind::footrule;
    if (name == "kendall") return MetricKind::kendall;
    if (name == "jaro") return MetricKind::jaro;
    if (name == "jarowinkler") return MetricKind::jaro_winkler;
    return std::nullopt;
}

std::string_view metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::t: return "t";
        case MetricKind::footrule: return "footrule";
        case MetricKind::kendall: return "kendall";
        case MetricKind::jaro: return "jaro";
        case MetricKind::jaro_winkler: return "jarowinkler";
    }
    return "?";
}

PairMetric make_pair_metric(MetricKind kind, const MetricConfig& cfg, const textsim::StopwordSet& stopwords) {
    switch (kind) {
        case MetricKind::t:
            return [cfg, &stopwords](const RankedList& a, const RankedList& b) {
                return metric_t(a, b, cfg, stopwords).total;
            };
        case MetricKind::footrule:
            return [](const RankedList& a, const RankedList& b) { return rank::spearman_footrule_sim(a, b); };
        case MetricKind::kendall:
            return [](const RankedList& a, const RankedList& b) { return rank::kendall_tau_sim(a, b); };
        case MetricKind::jaro:
            return [](const RankedList& a, const RankedList& b) { return rank::jaro_sim(a, b); };
        case MetricKind::jaro_winkler:
            return [](const RankedList& a, const RankedList& b) { return rank::jaro_winkler_sim(a, b); };
    }
    throw std::invalid_argument("unknown metric kind");
}

SimilarityMatrix similarity_matrix(const SerpDataset& ds, const std::string& engine_a,
                                   const std::string& engine_b, const PairMetric& metric,
                                   const ParallelOptions& parallel) {
    Grid grid = build_grid(ds, engine_a, engine_b);
    std::vector<SimilarityMatrix::Cell> values(grid.days.size() * grid.queries.size());
    detail::parallel_for(grid.cells.size(), parallel.threads, [&](std::size_t i) {
        const CellRef& cell = grid.cells[i];
        try {
            values[cell.index] = metric(*cell.a, *cell.b);
        } catch (const std::exception& e) {
            rethrow_for_cell(cell, e);
        }
    });
    return SimilarityMatrix({engine_a, engine_b}, std::move(grid.days), std::move(grid.queries),
                            std::move(values));
}

SimilarityMatrix similarity_matrix(const SerpDataset& ds, const std::string& engine_a,
                                   const std::string& engine_b, const MetricConfig& cfg,
                                   const textsim::StopwordSet& stopwords, const ParallelOptions& parallel) {
    return similarity_matrix(ds, engine_a, engine_b, make_pair_metric(MetricKind::t, cfg, stopwords), parallel);
}

std::vector<DailyMean> consistency_series(const SimilarityMatrix& matrix) {
    if (matrix.days().empty() || matrix.queries().empty()) {
        throw DataError("consistency series needs a non-empty matrix");
    }
    std::vector<DailyMean> series;
    series.reserve(matrix.days().size());
    for (std::size_t d = 0; d < matrix.days().size(); ++d) {
        double sum = 0.0;
        std::size_t present = 0;
        for (std::size_t q = 0; q < matrix.queries().size(); ++q) {
            if (const auto& cell = matrix.at(d, q)) {
                sum += *cell;
                ++present;
            }
        }
        DailyMean day{matrix.days()[d], std::nullopt};
        if (present > 0) day.mean = sum / static_cast<double>(present);
        series.push_back(day);
    }
    return series;
}

PairSummary pair_summary(const SimilarityMatrix& matrix) {
    std::vector<double> cells;
    for (const auto& cell : matrix.values()) {
        if (cell) cells.push_back(*cell);
    }
    if (cells.empty()) throw DataError("summary needs at least one present cell");
    std::sort(cells.begin(), cells.end());
    PairSummary out;
    out.cells = cells.size();
    out.mean = mean_of(cells);
    out.min = cells.front();
    out.max = cells.back();
    const std::size_t mid = cells.size() / 2;
    out.median = cells.size() % 2 == 1 ? cells[mid] : (cells[mid - 1] + cells[mid]) / 2.0;
    return out;
}

std::optional<Factor> parse_factor(std::string_view name) {
    if (name == "snippet") return Factor::snippet;
    if (name == "title") return Factor::title;
    if (name == "transposition") return Factor::transposition;
    return std::nullopt;
}

std::string_view factor_name(Factor factor) {
    switch (factor) {
        case Factor::snippet: return "snippet";
        case Factor::title: return "title";
        case Factor::transposition: return "transposition";
    }
    return "?";
}

std::vector<double> default_sweep_steps() {
    std::vector<double> steps;
    for (int k = 1; k <= 10; ++k) steps.push_back(k / 10.0);
    return steps;
}

ImpactReport impact_sweep(const SerpDataset& ds, const std::string& engine_a, const std::string& engine_b,
                          Factor factor, const std::vector<double>& steps, const MetricConfig& boost_cfg,
                          const textsim::StopwordSet& stopwords, const ParallelOptions& parallel) {
    if (steps.empty()) throw std::invalid_argument("impact sweep needs at least one weight step");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0 && steps[i] <= 1.0) || (i > 0 && !(steps[i] > steps[i - 1]))) {
            throw std::invalid_argument("sweep steps must be strictly increasing within (0, 1]");
        }
    }

    const Grid grid = build_grid(ds, engine_a, engine_b);
    if (grid.cells.empty()) {
        throw DataError("engines '" + engine_a + "' and '" + engine_b + "' share no (day, query) cell");
    }

    // Penalties do not depend on the weights; compute them once per cell.
    const MetricConfig zero = boost_cfg.with_penalty_weights(0.0, 0.0, 0.0);
    std::vector<TBreakdown> base(grid.cells.size());
    detail::parallel_for(grid.cells.size(), parallel.threads, [&](std::size_t i) {
        const CellRef& cell = grid.cells[i];
        try {
            base[i] = metric_t(*cell.a, *cell.b, zero, stopwords);
        } catch (const std::exception& e) {
            rethrow_for_cell(cell, e);
        }
    });

    auto mean_t = [&](const MetricConfig& cfg) {
        std::vector<double> totals;
        totals.reserve(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            const auto& br = base[i];
            const double score = adjusted_score({br.m, br.n, br.s, br.h, br.t}, cfg);
            totals.push_back(score + positional_boost(*grid.cells[i].a, *grid.cells[i].b, score, cfg));
        }
        return mean_of(totals);
    };

    ImpactReport report;
    report.factor = factor;
    report.weight_steps = steps;
    report.base_mean = mean_t(zero);
    if (!(report.base_mean > 0.0)) {
        throw DataError("baseline mean similarity is zero for '" + engine_a + "' vs '" + engine_b +
                        "'; no overlapping results to sweep over");
    }
    for (double w : steps) {
        const MetricConfig cfg = boost_cfg.with_penalty_weights(factor == Factor::snippet ? w : 0.0,
                                                                factor == Factor::title ? w : 0.0,
                                                                factor == Factor::transposition ? w : 0.0);
        const double mean = mean_t(cfg);
        report.mean_t.push_back(mean);
        report.decrease_pct.push_back(100.0 * (report.base_mean - mean) / report.base_mean);
    }
    return report;
}

DriftResult cross_period_drift(const SerpDataset& ds_old, const SerpDataset& ds_new, const std::string& engine,
                               const PairMetric& metric, const PeriodDate& old_date, const PeriodDate& new_date) {
    const auto old_queries = ds_old.queries(engine);
    const auto new_queries = ds_new.queries(engine);
    std::vector<std::string> shared;
    std::set_intersection(old_queries.begin(), old_queries.end(), new_queries.begin(), new_queries.end(),
                          std::back_inserter(shared));

    std::vector<double> values;
    for (const auto& query : shared) {
        const auto* before = pick(ds_old, engine, query, old_date);
        const auto* after = pick(ds_new, engine, query, new_date);
        if (!before || !after) continue;
        try {
            values.push_back(metric(*before, *after));
        } catch (const std::exception& e) {
            throw DataError("cannot compare periods of " + engine + " for '" + query + "': " + e.what());
        }
    }
    if (values.empty()) throw DataError("no shared queries for engine '" + engine + "' across the two periods");
    return {mean_of(values), values.size()};
}

}  // namespace serpsim::analysis
