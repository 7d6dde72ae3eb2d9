#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "serpsim/analysis.hpp"
#include "serpsim/model.hpp"
#include "serpsim/urlnorm.hpp"

namespace serpsim::io {

struct LoadOptions {
    // Canonicalize URLs and resolve them through the redirect cache (offline).
    bool normalize = false;
    std::optional<std::filesystem::path> redirect_cache;
    urlnorm::CanonicalizeOptions canonical;
    // Truncate every list to this length; with strict, shorter lists are rejected.
    std::optional<std::size_t> list_length;
    bool strict = false;
};

/// Reads a line-delimited dataset: one JSON object per line with engine,
/// query, category, date and results [{rank, url, title, snippet}].
/// Blank lines are skipped. Errors name the 1-based line number.
analysis::SerpDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});
analysis::SerpDataset read_dataset(std::istream& in, const LoadOptions& options = {},
                                   std::string_view source_name = "<stream>");

/// Writes records sorted by (engine, query, date), keys in sorted order,
/// compact JSON, one record per line. Loading and rewriting a file in this
/// form reproduces it byte for byte.
void write_dataset(std::ostream& out, const analysis::SerpDataset& ds);
std::string record_to_json_line(const RankedList& list, const std::string& category);

// Fixed four-decimal rendering used by every numeric output.
std::string format_number(double value);

// Comma-separated field, quoted when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);
std::vector<std::string> parse_csv_line(std::string_view line);

/// "date,<query>,<query>..." header then one row per day; missing cells are "NA".
void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix);
SimilarityMatrix read_matrix_csv(std::istream& in, std::string_view source_name = "<stream>");
SimilarityMatrix load_matrix_csv(const std::filesystem::path& path);

void write_series_csv(std::ostream& out, const std::vector<analysis::DailyMean>& series);
void write_summary_csv(std::ostream& out, const analysis::PairSummary& summary);
void write_impact_csv(std::ostream& out, const analysis::ImpactReport& report);
void write_breakdown(std::ostream& out, const TBreakdown& breakdown);

/// Converts foreign line-delimited JSON into dataset records. The mapping is a
/// JSON object of JSON pointers:
///   {"engine": "/se", "query": "/q", "date": "/day", "category": "/cat",
///    "results": "/items", "url": "/link", "title": "/title",
///    "snippet": "/desc", "rank": "/pos"}
/// "category", "title", "snippet" and "rank" are optional; without "rank" the
/// array order gives the rank. "date_format" may be "iso" (default) or
/// "compact" (YYYYMMDD). Fixed values can be given as {"const": "..."}.
class ImportMapping {
public:
    static ImportMapping load(const std::filesystem::path& path);
    static ImportMapping parse(std::string_view json_text);

    // Converts one foreign record to a canonical dataset line (without newline).
    std::string convert(std::string_view foreign_line) const;

private:
    struct Field {
        std::string pointer;
        std::optional<std::string> constant;
        bool present = false;
    };
    Field engine_, query_, date_, category_, results_, url_, title_, snippet_, rank_;
    bool compact_dates_ = false;
};

/// Converts every non-blank line of `in`; errors name the line number.
void import_records(std::istream& in, std::ostream& out, const ImportMapping& mapping,
                    std::string_view source_name = "<stream>");

}  // namespace serpsim::io
