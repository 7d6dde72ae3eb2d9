#include "serpsim/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>

namespace serpsim {

namespace {

bool has_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    });
}

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

Date parse_date(std::string_view text) {
    auto bad = [&] { return DataError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
    auto field = [&](std::size_t pos, std::size_t len) {
        int value = 0;
        const char* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, value);
        if (ec != std::errc{} || ptr != first + len) throw bad();
        return value;
    };
    Date date{std::chrono::year{field(0, 4)},
              std::chrono::month{static_cast<unsigned>(field(5, 2))},
              std::chrono::day{static_cast<unsigned>(field(8, 2))}};
    if (!date.ok()) throw bad();
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

SearchResult::SearchResult(std::string url, std::string title, std::string snippet, int rank)
    : url_(std::move(url)), title_(std::move(title)), snippet_(std::move(snippet)), rank_(rank) {
    if (rank_ < 1) throw InvariantError("result rank must be >= 1, got " + std::to_string(rank_));
    if (url_.empty()) throw InvariantError("result URL must be non-empty");
    if (has_whitespace(url_)) throw InvariantError("result URL contains whitespace: '" + url_ + "'");
}

SearchResult SearchResult::with_rank(int rank) const { return {url_, title_, snippet_, rank}; }

SearchResult SearchResult::with_url(std::string url) const {
    return {std::move(url), title_, snippet_, rank_};
}

RankedList::RankedList(std::string engine, std::string query, Date date,
                       std::vector<SearchResult> results)
    : engine_(std::move(engine)), query_(std::move(query)), date_(date), results_(std::move(results)) {
    if (engine_.empty()) throw InvariantError("ranked list needs an engine identifier");
    if (!date_.ok()) throw InvariantError("ranked list date is not a valid calendar date");
    if (results_.empty()) {
        throw InvariantError("ranked list for " + engine_ + "/'" + query_ + "' is empty");
    }
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < results_.size(); ++i) {
        const auto& r = results_[i];
        if (r.rank() != static_cast<int>(i + 1)) {
            throw InvariantError("ranks must be exactly 1..n; position " + std::to_string(i + 1) +
                                 " has rank " + std::to_string(r.rank()));
        }
        if (!seen.insert(r.url()).second) {
            throw InvariantError("duplicate URL in ranked list: " + r.url());
        }
    }
}

RankedList validate_ranked_list(std::string engine, std::string query, Date date,
                                std::vector<SearchResult> raw, const ValidateOptions& options) {
    if (raw.empty()) throw DataError("no results for " + engine + "/'" + query + "'");
    if (options.expected_n == 0) throw DataError("expected list length must be positive");

    std::stable_sort(raw.begin(), raw.end(),
                     [](const SearchResult& x, const SearchResult& y) { return x.rank() < y.rank(); });
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].rank() == raw[i - 1].rank()) {
            throw DataError("duplicate rank " + std::to_string(raw[i].rank()) + " in results for " +
                            engine + "/'" + query + "'");
        }
    }

    std::vector<SearchResult> kept;
    kept.reserve(std::min(raw.size(), options.expected_n));
    std::unordered_set<std::string> seen;
    for (const auto& r : raw) {
        if (kept.size() == options.expected_n) break;
        if (!seen.insert(r.url()).second) continue;
        kept.push_back(r.with_rank(static_cast<int>(kept.size() + 1)));
    }

    if (options.strict && kept.size() < options.expected_n) {
        throw DataError("list for " + engine + "/'" + query + "' on " + format_date(date) + " has " +
                        std::to_string(kept.size()) + " distinct results, expected " +
                        std::to_string(options.expected_n));
    }
    return RankedList(std::move(engine), std::move(query), date, std::move(kept));
}

MetricConfig::MetricConfig(double a, double b, double c, std::vector<double> boost_weights)
    : a_(a), b_(b), c_(c), weights_(std::move(boost_weights)) {
    if (!in_unit_interval(a_) || !in_unit_interval(b_) || !in_unit_interval(c_)) {
        throw InvariantError("penalty weights a, b, c must lie in [0,1]");
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
            throw InvariantError("boost weights must be positive");
        }
        if (i > 0 && !(weights_[i] < weights_[i - 1])) {
            throw InvariantError("boost weights must be strictly descending");
        }
    }
    // Tolerate representation error of decimal inputs such as 0.7 + 0.2 + 0.1.
    if (std::accumulate(weights_.begin(), weights_.end(), 0.0) > 1.0 + 1e-12) {
        throw InvariantError("boost weights must sum to at most 1");
    }
}

std::vector<double> MetricConfig::default_boost_weights() { return {0.15, 0.1, 0.07, 0.03, 0.01}; }

MetricConfig MetricConfig::experiment_defaults() {
    return MetricConfig(0.8, 1.0, 0.8, default_boost_weights());
}

MetricConfig MetricConfig::comparison_table() {
    return MetricConfig(1.0, 1.0, 1.0, default_boost_weights());
}

MetricConfig MetricConfig::with_penalty_weights(double a, double b, double c) const {
    return MetricConfig(a, b, c, weights_);
}

SimilarityMatrix::SimilarityMatrix(std::pair<std::string, std::string> engine_pair,
                                   std::vector<Date> days, std::vector<std::string> queries,
                                   std::vector<Cell> values)
    : pair_(std::move(engine_pair)),
      days_(std::move(days)),
      queries_(std::move(queries)),
      values_(std::move(values)) {
    if (values_.size() != days_.size() * queries_.size()) {
        throw InvariantError("similarity grid has " + std::to_string(values_.size()) +
                             " cells, expected " + std::to_string(days_.size()) + " x " +
                             std::to_string(queries_.size()));
    }
    for (const auto& cell : values_) {
        if (cell && !in_unit_interval(*cell)) {
            throw InvariantError("similarity value outside [0,1]: " + std::to_string(*cell));
        }
    }
}

std::size_t SimilarityMatrix::present_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](const Cell& c) { return c.has_value(); }));
}

}  // namespace serpsim
