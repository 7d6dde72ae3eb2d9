#include "serpsim/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace serpsim::io {

using nlohmann::json;

namespace {

std::string where(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line) + ": ";
}

const json& require(const json& obj, const char* key, json::value_t type, const char* type_name) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
    if (it->type() != type) throw DataError(std::string("field '") + key + "' must be " + type_name);
    return *it;
}

const std::string& require_string(const json& obj, const char* key) {
    return require(obj, key, json::value_t::string, "a string").get_ref<const std::string&>();
}

int require_rank(const json& obj) {
    const auto it = obj.find("rank");
    if (it == obj.end()) throw DataError("result is missing field 'rank'");
    if (!it->is_number_integer()) throw DataError("result field 'rank' must be an integer");
    const auto value = it->get<std::int64_t>();
    if (value < 1 || value > 1'000'000) throw DataError("result rank out of range: " + std::to_string(value));
    return static_cast<int>(value);
}

RankedList parse_record(const json& record, const LoadOptions& options, urlnorm::RedirectCache* cache,
                        std::string& category) {
    if (!record.is_object()) throw DataError("record must be a JSON object");
    const std::string& engine = require_string(record, "engine");
    const std::string& query = require_string(record, "query");
    const Date date = parse_date(require_string(record, "date"));
    category.clear();
    if (const auto it = record.find("category"); it != record.end()) {
        if (!it->is_string()) throw DataError("field 'category' must be a string");
        category = it->get<std::string>();
    }
    const json& results = require(record, "results", json::value_t::array, "an array");
    if (results.empty()) throw DataError("record has no results");

    std::vector<SearchResult> raw;
    raw.reserve(results.size());
    std::set<int> ranks;
    for (const auto& item : results) {
        if (!item.is_object()) throw DataError("each result must be a JSON object");
        const int rank = require_rank(item);
        if (!ranks.insert(rank).second) throw DataError("duplicate rank " + std::to_string(rank));
        std::string url = require_string(item, "url");
        if (options.normalize) {
            url = urlnorm::canonicalize(url, options.canonical);
            if (cache) url = urlnorm::resolve_redirects(url, *cache, urlnorm::ResolveMode::offline);
        }
        raw.emplace_back(std::move(url), require_string(item, "title"), require_string(item, "snippet"), rank);
    }
    if (*ranks.rbegin() != static_cast<int>(ranks.size())) {
        throw DataError("ranks must be contiguous 1.." + std::to_string(ranks.size()));
    }
    ValidateOptions validate;
    validate.expected_n = options.list_length.value_or(raw.size());
    validate.strict = options.strict;
    return validate_ranked_list(engine, query, date, std::move(raw), validate);
}

}  // namespace

analysis::SerpDataset read_dataset(std::istream& in, const LoadOptions& options, std::string_view source_name) {
    std::optional<urlnorm::RedirectCache> cache;
    if (options.normalize && options.redirect_cache) cache = urlnorm::RedirectCache::load(*options.redirect_cache);

    analysis::SerpDataset ds;
    std::string line;
    std::string category;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            const json record = json::parse(line);
            RankedList list = parse_record(record, options, cache ? &*cache : nullptr, category);
            if (!category.empty()) ds.set_category(list.query(), category);
            ds.insert(std::move(list));
        } catch (const json::exception& e) {
            throw DataError(where(source_name, line_no) + "malformed JSON: " + e.what());
        } catch (const Error& e) {
            throw DataError(where(source_name, line_no) + e.what());
        }
    }
    return ds;
}

analysis::SerpDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset " + path.string());
    return read_dataset(in, options, path.string());
}

std::string record_to_json_line(const RankedList& list, const std::string& category) {
    json results = json::array();
    for (const auto& r : list.results()) {
        results.push_back({{"rank", r.rank()}, {"url", r.url()}, {"title", r.title()}, {"snippet", r.snippet()}});
    }
    const json record = {{"engine", list.engine()},
                         {"query", list.query()},
                         {"category", category},
                         {"date", format_date(list.date())},
                         {"results", std::move(results)}};
    return record.dump(-1, ' ', false, json::error_handler_t::replace);
}

void write_dataset(std::ostream& out, const analysis::SerpDataset& ds) {
    for (const auto& [key, list] : ds.records()) {
        out << record_to_json_line(list, ds.category(key.query).value_or("")) << '\n';
    }
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    std::string text = buf;
    if (text == "-0.0000") text = "0.0000";
    return text;
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> parse_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back().push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back().push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back().push_back(c);
        }
    }
    if (quoted) throw DataError("unterminated quoted field");
    return fields;
}

void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix) {
    out << "date";
    for (const auto& q : matrix.queries()) out << ',' << csv_field(q);
    out << '\n';
    for (std::size_t d = 0; d < matrix.days().size(); ++d) {
        out << format_date(matrix.days()[d]);
        for (std::size_t q = 0; q < matrix.queries().size(); ++q) {
            const auto& cell = matrix.at(d, q);
            out << ',' << (cell ? format_number(*cell) : "NA");
        }
        out << '\n';
    }
}

SimilarityMatrix read_matrix_csv(std::istream& in, std::string_view source_name) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };
    if (!next_line()) throw DataError(std::string(source_name) + ": empty matrix file");
    std::vector<std::string> header;
    try {
        header = parse_csv_line(line);
    } catch (const Error& e) {
        throw DataError(where(source_name, line_no) + e.what());
    }
    if (header.empty() || header.front() != "date") {
        throw DataError(where(source_name, line_no) + "matrix header must start with 'date'");
    }
    std::vector<std::string> queries(header.begin() + 1, header.end());
    std::vector<Date> days;
    std::vector<SimilarityMatrix::Cell> values;
    while (next_line()) {
        try {
            const auto fields = parse_csv_line(line);
            if (fields.size() != header.size()) {
                throw DataError("expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()));
            }
            days.push_back(parse_date(fields.front()));
            for (std::size_t i = 1; i < fields.size(); ++i) {
                const std::string& f = fields[i];
                if (f == "NA" || f.empty()) {
                    values.emplace_back(std::nullopt);
                    continue;
                }
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
                if (ec != std::errc{} || ptr != f.data() + f.size()) throw DataError("bad number '" + f + "'");
                values.emplace_back(v);
            }
        } catch (const Error& e) {
            throw DataError(where(source_name, line_no) + e.what());
        }
    }
    return SimilarityMatrix({"", ""}, std::move(days), std::move(queries), std::move(values));
}

SimilarityMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open matrix " + path.string());
    return read_matrix_csv(in, path.string());
}

void write_series_csv(std::ostream& out, const std::vector<analysis::DailyMean>& series) {
    out << "date,mean\n";
    for (const auto& day : series) {
        out << format_date(day.date) << ',' << (day.mean ? format_number(*day.mean) : "NA") << '\n';
    }
}

void write_summary_csv(std::ostream& out, const analysis::PairSummary& s) {
    out << "cells,mean,median,min,max\n";
    out << s.cells << ',' << format_number(s.mean) << ',' << format_number(s.median) << ','
        << format_number(s.min) << ',' << format_number(s.max) << '\n';
}

void write_impact_csv(std::ostream& out, const analysis::ImpactReport& report) {
    const std::string factor(analysis::factor_name(report.factor));
    out << "factor,weight,mean_t,decrease_pct\n";
    out << factor << ',' << format_number(0.0) << ',' << format_number(report.base_mean) << ','
        << format_number(0.0) << '\n';
    for (std::size_t i = 0; i < report.weight_steps.size(); ++i) {
        out << factor << ',' << format_number(report.weight_steps[i]) << ',' << format_number(report.mean_t[i])
            << ',' << format_number(report.decrease_pct[i]) << '\n';
    }
}

void write_breakdown(std::ostream& out, const TBreakdown& b) {
    out << "m = " << b.m << '\n'
        << "n = " << b.n << '\n'
        << "s = " << format_number(b.s) << '\n'
        << "h = " << format_number(b.h) << '\n'
        << "t = " << format_number(b.t) << '\n'
        << "S = " << format_number(b.score) << '\n'
        << "boost = " << format_number(b.boost) << '\n'
        << "T = " << format_number(b.total) << '\n';
}

ImportMapping ImportMapping::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open import mapping " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const Error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

ImportMapping ImportMapping::parse(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed mapping: ") + e.what());
    }
    if (!doc.is_object()) throw DataError("mapping must be a JSON object");

    ImportMapping m;
    auto field = [&](const char* name, bool required) {
        Field f;
        const auto it = doc.find(name);
        if (it == doc.end()) {
            if (required) throw DataError(std::string("mapping lacks '") + name + "'");
            return f;
        }
        f.present = true;
        if (it->is_string()) {
            f.pointer = it->get<std::string>();
            try {
                json::json_pointer check(f.pointer);
            } catch (const json::exception&) {
                throw DataError(std::string("mapping '") + name + "' is not a JSON pointer");
            }
        } else if (it->is_object() && it->contains("const") && (*it)["const"].is_string()) {
            f.constant = (*it)["const"].get<std::string>();
        } else {
            throw DataError(std::string("mapping '") + name + "' must be a JSON pointer or {\"const\": ...}");
        }
        return f;
    };
    m.engine_ = field("engine", true);
    m.query_ = field("query", true);
    m.date_ = field("date", true);
    m.results_ = field("results", true);
    m.url_ = field("url", true);
    m.category_ = field("category", false);
    m.title_ = field("title", false);
    m.snippet_ = field("snippet", false);
    m.rank_ = field("rank", false);
    if (const auto it = doc.find("date_format"); it != doc.end()) {
        if (*it == "compact") {
            m.compact_dates_ = true;
        } else if (*it != "iso") {
            throw DataError("date_format must be 'iso' or 'compact'");
        }
    }
    return m;
}

std::string ImportMapping::convert(std::string_view foreign_line) const {
    const json src = json::parse(foreign_line);
    auto lookup = [](const json& obj, const Field& f, const char* name) -> const json& {
        const json::json_pointer ptr(f.pointer);
        if (!obj.contains(ptr)) throw DataError(std::string("no value at '") + f.pointer + "' for " + name);
        return obj.at(ptr);
    };
    auto text = [&](const json& obj, const Field& f, const char* name) -> std::string {
        if (!f.present) return "";
        if (f.constant) return *f.constant;
        const json& v = lookup(obj, f, name);
        if (v.is_string()) return v.get<std::string>();
        if (v.is_null()) return "";
        if (v.is_number() || v.is_boolean()) return v.dump();
        throw DataError(std::string(name) + " must be a scalar");
    };

    std::string date = text(src, date_, "date");
    if (compact_dates_) {
        if (date.size() != 8) throw DataError("compact date must be YYYYMMDD, got '" + date + "'");
        date = date.substr(0, 4) + "-" + date.substr(4, 2) + "-" + date.substr(6, 2);
    }
    parse_date(date);

    if (results_.constant) throw DataError("results cannot be a constant");
    const json& items = lookup(src, results_, "results");
    if (!items.is_array()) throw DataError("results must be an array");

    json results = json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        const json& item = items[i];
        std::int64_t rank = static_cast<std::int64_t>(i) + 1;
        if (rank_.present && !rank_.constant) {
            const json& v = lookup(item, rank_, "rank");
            if (v.is_number_integer()) {
                rank = v.get<std::int64_t>();
            } else if (v.is_string()) {
                const auto& s = v.get_ref<const std::string&>();
                auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), rank);
                if (ec != std::errc{} || ptr != s.data() + s.size()) throw DataError("bad rank '" + s + "'");
            } else {
                throw DataError("rank must be an integer");
            }
        }
        results.push_back({{"rank", rank},
                           {"url", text(item, url_, "url")},
                           {"title", text(item, title_, "title")},
                           {"snippet", text(item, snippet_, "snippet")}});
    }
    const json record = {{"engine", text(src, engine_, "engine")},
                         {"query", text(src, query_, "query")},
                         {"category", text(src, category_, "category")},
                         {"date", date},
                         {"results", std::move(results)}};
    return record.dump(-1, ' ', false, json::error_handler_t::replace);
}

void import_records(std::istream& in, std::ostream& out, const ImportMapping& mapping, std::string_view source_name) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out << mapping.convert(line) << '\n';
        } catch (const json::exception& e) {
            throw DataError(where(source_name, line_no) + e.what());
        } catch (const Error& e) {
            throw DataError(where(source_name, line_no) + e.what());
        }
    }
}

}  // namespace serpsim::io
