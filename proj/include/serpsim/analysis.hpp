#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "serpsim/metric_t.hpp"
#include "serpsim/model.hpp"
#include "serpsim/textsim.hpp"

namespace serpsim::analysis {

struct ListKey {
    std::string engine;
    std::string query;
    Date date;

    friend auto operator<=>(const ListKey& x, const ListKey& y) {
        if (auto c = x.engine <=> y.engine; c != 0) return c;
        if (auto c = x.query <=> y.query; c != 0) return c;
        return x.date <=> y.date;
    }
    friend bool operator==(const ListKey&, const ListKey&) = default;
};

std::string to_string(const ListKey& key);

/// Ranked lists keyed by (engine, query, date), plus an optional category per query.
class SerpDataset {
public:
    // Throws DataError if the key is already present.
    void insert(RankedList list);
    // Throws DataError if the query already carries a different category.
    void set_category(const std::string& query, const std::string& category);

    const RankedList* find(const ListKey& key) const;
    bool has_engine(const std::string& engine) const;

    std::vector<std::string> engines() const;
    std::vector<std::string> queries(const std::string& engine) const;
    std::vector<Date> dates(const std::string& engine, const std::string& query) const;
    std::optional<std::string> category(const std::string& query) const;

    const std::map<ListKey, RankedList>& records() const noexcept { return records_; }
    const std::map<std::string, std::string>& categories() const noexcept { return categories_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

private:
    std::map<ListKey, RankedList> records_;
    std::map<std::string, std::string> categories_;
};

using PairMetric = std::function<double(const RankedList&, const RankedList&)>;

enum class MetricKind { t, footrule, kendall, jaro, jaro_winkler };

std::optional<MetricKind> parse_metric_kind(std::string_view name);
std::string_view metric_kind_name(MetricKind kind);

// Binds a metric kind to its configuration. The returned callable holds a
// reference to `stopwords`, which must outlive it.
PairMetric make_pair_metric(MetricKind kind, const MetricConfig& cfg,
                            const textsim::StopwordSet& stopwords);

struct ParallelOptions {
    // 0 picks std::thread::hardware_concurrency().
    std::size_t threads = 0;
};

/// Day x query grid for one engine pair. Days and queries are the sorted
/// unions over both engines; cells lacking either list stay empty. Cells are
/// evaluated in parallel; the output does not depend on the thread count.
/// Throws DataError if an engine is absent or a cell cannot be compared.
SimilarityMatrix similarity_matrix(const SerpDataset& ds, const std::string& engine_a,
                                   const std::string& engine_b, const PairMetric& metric,
                                   const ParallelOptions& parallel = {});

SimilarityMatrix similarity_matrix(const SerpDataset& ds, const std::string& engine_a,
                                   const std::string& engine_b, const MetricConfig& cfg,
                                   const textsim::StopwordSet& stopwords,
                                   const ParallelOptions& parallel = {});

struct DailyMean {
    Date date;
    std::optional<double> mean;  // empty when the day has no present cells
};

/// Per-day arithmetic mean over present cells.
std::vector<DailyMean> consistency_series(const SimilarityMatrix& matrix);

struct PairSummary {
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t cells = 0;
};

// Throws DataError when the matrix has no present cell.
PairSummary pair_summary(const SimilarityMatrix& matrix);

enum class Factor { snippet, title, transposition };

std::optional<Factor> parse_factor(std::string_view name);
std::string_view factor_name(Factor factor);

struct ImpactReport {
    Factor factor = Factor::snippet;
    double base_mean = 0.0;             // mean T with a = b = c = 0
    std::vector<double> weight_steps;
    std::vector<double> mean_t;         // per step
    std::vector<double> decrease_pct;   // per step, relative to base_mean
};

// 0.1, 0.2, ..., 1.0
std::vector<double> default_sweep_steps();

/// Mean T over every comparable (day, query) cell with only the swept
/// factor's weight set, against the all-zero baseline. Boost weights come
/// from `boost_cfg`. Throws DataError when the baseline mean is zero and
/// std::invalid_argument unless steps are strictly increasing in (0, 1].
ImpactReport impact_sweep(const SerpDataset& ds, const std::string& engine_a,
                          const std::string& engine_b, Factor factor, const std::vector<double>& steps,
                          const MetricConfig& boost_cfg, const textsim::StopwordSet& stopwords,
                          const ParallelOptions& parallel = {});

/// Which list stands for a whole collection period.
struct PeriodDate {
    enum class Kind { first, last, exact } kind = Kind::first;
    Date exact{};
};

struct DriftResult {
    double mean = 0.0;
    std::size_t queries = 0;
};

/// Mean similarity of one engine to itself across two collection periods,
/// averaged over the queries both periods cover. Throws DataError when no
/// query is shared.
DriftResult cross_period_drift(const SerpDataset& ds_old, const SerpDataset& ds_new,
                               const std::string& engine, const PairMetric& metric,
                               const PeriodDate& old_date = {}, const PeriodDate& new_date = {});

}  // namespace serpsim::analysis
