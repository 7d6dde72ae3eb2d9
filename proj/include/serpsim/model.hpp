#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "serpsim/errors.hpp"

namespace serpsim {

using Date = std::chrono::year_month_day;

// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Throws DataError.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

/// One ranked response of a search engine: where it points, what the engine
/// showed for it, and its 1-based position.
class SearchResult {
public:
    SearchResult(std::string url, std::string title, std::string snippet, int rank);

    const std::string& url() const noexcept { return url_; }
    const std::string& title() const noexcept { return title_; }
    const std::string& snippet() const noexcept { return snippet_; }
    int rank() const noexcept { return rank_; }

    SearchResult with_rank(int rank) const;
    SearchResult with_url(std::string url) const;

    friend bool operator==(const SearchResult&, const SearchResult&) = default;

private:
    std::string url_;
    std::string title_;
    std::string snippet_;
    int rank_;
};

/// One engine's top-n results for one query on one date.
///
/// Ranks are exactly 1..n, URLs are unique and n > 0; the constructor throws
/// InvariantError otherwise. Use validate_ranked_list() to build one from raw,
/// possibly messy, engine output.
class RankedList {
public:
    RankedList(std::string engine, std::string query, Date date, std::vector<SearchResult> results);

    const std::string& engine() const noexcept { return engine_; }
    const std::string& query() const noexcept { return query_; }
    const Date& date() const noexcept { return date_; }
    const std::vector<SearchResult>& results() const noexcept { return results_; }
    std::size_t size() const noexcept { return results_.size(); }

    // 1-based access, matching result ranks.
    const SearchResult& at_rank(std::size_t rank) const { return results_.at(rank - 1); }

    friend bool operator==(const RankedList&, const RankedList&) = default;

private:
    std::string engine_;
    std::string query_;
    Date date_;
    std::vector<SearchResult> results_;
};

struct ValidateOptions {
    std::size_t expected_n = 10;
    // Reject lists that end up shorter than expected_n after deduplication.
    bool strict = false;
};

/// Builds a RankedList from raw results: orders by rank, drops later
/// duplicates of a URL (first occurrence wins), truncates to expected_n and
/// re-ranks 1..n. Duplicate input ranks are always rejected.
RankedList validate_ranked_list(std::string engine, std::string query, Date date,
                                std::vector<SearchResult> raw, const ValidateOptions& options);

/// Weights of the combined metric: a (snippets), b (titles), c (transpositions)
/// and the strictly descending positional boost weights w_1..w_r.
class MetricConfig {
public:
    MetricConfig(double a, double b, double c, std::vector<double> boost_weights);

    // a=0.8, b=1, c=0.8 with the five-position boost used for engine comparisons.
    static MetricConfig experiment_defaults();
    // a=b=c=1 with the five-position boost; reproduces the synthetic comparison table.
    static MetricConfig comparison_table();
    static std::vector<double> default_boost_weights();

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double c() const noexcept { return c_; }
    std::size_t r() const noexcept { return weights_.size(); }
    const std::vector<double>& boost_weights() const noexcept { return weights_; }

    MetricConfig with_penalty_weights(double a, double b, double c) const;

    friend bool operator==(const MetricConfig&, const MetricConfig&) = default;

private:
    double a_;
    double b_;
    double c_;
    std::vector<double> weights_;
};

/// Day x query grid of similarity values for one engine pair. Cells without a
/// comparable pair of lists are empty optionals, never imputed.
class SimilarityMatrix {
public:
    using Cell = std::optional<double>;

    SimilarityMatrix(std::pair<std::string, std::string> engine_pair, std::vector<Date> days,
                     std::vector<std::string> queries, std::vector<Cell> values);

    const std::pair<std::string, std::string>& engine_pair() const noexcept { return pair_; }
    const std::vector<Date>& days() const noexcept { return days_; }
    const std::vector<std::string>& queries() const noexcept { return queries_; }
    const std::vector<Cell>& values() const noexcept { return values_; }

    const Cell& at(std::size_t day, std::size_t query) const {
        return values_.at(day * queries_.size() + query);
    }
    std::size_t present_count() const noexcept;

    friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

private:
    std::pair<std::string, std::string> pair_;
    std::vector<Date> days_;
    std::vector<std::string> queries_;
    std::vector<Cell> values_;
};

}  // namespace serpsim
