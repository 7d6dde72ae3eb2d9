#include "serpsim/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "serpsim/analysis.hpp"
#include "serpsim/dataset_io.hpp"
#include "serpsim/metric_t.hpp"
#include "serpsim/rank_metrics.hpp"
#include "serpsim/textsim.hpp"
#include "serpsim/urlnorm.hpp"

namespace serpsim::cli {

namespace {

// Bad flag values detected after CLI11 parsing; reported like parse errors.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    std::istringstream in(text);
    while (std::getline(in, current, sep)) parts.push_back(current);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
    std::vector<double> values;
    if (text.empty()) return values;
    for (const auto& part : split(text, ',')) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
            throw UsageError(std::string(flag) + ": '" + part + "' is not a number");
        }
        values.push_back(v);
    }
    return values;
}

std::pair<std::string, std::string> parse_pair(const std::string& text, const char* flag) {
    const auto parts = split(text, ',');
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
        throw UsageError(std::string(flag) + " expects two comma-separated engine names");
    }
    return {parts[0], parts[1]};
}

analysis::PeriodDate parse_period(const std::string& text) {
    if (text == "first") return {};
    if (text == "last") return {analysis::PeriodDate::Kind::last, {}};
    try {
        return {analysis::PeriodDate::Kind::exact, parse_date(text)};
    } catch (const DataError&) {
        throw UsageError("period date must be 'first', 'last' or YYYY-MM-DD, got '" + text + "'");
    }
}

struct GlobalOptions {
    std::string weights = "0.8,1,0.8";
    std::string boost = "0.15,0.1,0.07,0.03,0.01";
    std::string stopwords_path;
    std::string metric = "t";
    bool strict = false;
    bool normalize = false;
    bool strip_www = false;
    bool sort_query = false;
    std::string redirect_cache;
    std::size_t list_length = 0;
    std::size_t threads = 0;
};

class Session {
public:
    Session(const GlobalOptions& g, std::istream& in, std::ostream& out) : g_(g), in_(in), out_(out) {}

    MetricConfig config() const {
        const auto w = parse_numbers(g_.weights, "--weights");
        if (w.size() != 3) throw UsageError("--weights expects three values a,b,c");
        try {
            return MetricConfig(w[0], w[1], w[2], parse_numbers(g_.boost, "--boost"));
        } catch (const InvariantError& e) {
            throw UsageError(std::string("invalid metric configuration: ") + e.what());
        }
    }

    const textsim::StopwordSet& stopwords() {
        if (g_.stopwords_path.empty()) return textsim::default_stopwords();
        if (!custom_stopwords_) custom_stopwords_ = textsim::load_stopwords(g_.stopwords_path);
        return *custom_stopwords_;
    }

    analysis::MetricKind metric_kind() const {
        if (auto kind = analysis::parse_metric_kind(g_.metric)) return *kind;
        throw UsageError("unknown metric '" + g_.metric + "'");
    }

    analysis::PairMetric pair_metric() { return analysis::make_pair_metric(metric_kind(), config(), stopwords()); }

    urlnorm::CanonicalizeOptions canonical() const { return {g_.strip_www, g_.sort_query}; }

    io::LoadOptions load_options() const {
        io::LoadOptions opts;
        opts.normalize = g_.normalize;
        if (!g_.redirect_cache.empty()) opts.redirect_cache = g_.redirect_cache;
        opts.canonical = canonical();
        if (g_.list_length > 0) opts.list_length = g_.list_length;
        opts.strict = g_.strict;
        return opts;
    }

    analysis::SerpDataset dataset(const std::string& path) {
        if (path == "-") return io::read_dataset(in_, load_options(), display_name(path));
        return io::load_dataset(path, load_options());
    }

    analysis::ParallelOptions parallel() const { return {g_.threads}; }

    // Writes to --output when given, otherwise to stdout.
    template <typename Fn>
    void emit(const std::string& output, Fn&& write) {
        if (output.empty()) {
            write(out_);
            return;
        }
        std::ofstream file(output, std::ios::binary | std::ios::trunc);
        if (!file) throw DataError("cannot write " + output);
        write(file);
    }

    static std::string display_name(const std::string& path) { return path == "-" ? "<stdin>" : path; }

    std::istream& open_input(const std::string& path, std::unique_ptr<std::ifstream>& holder) {
        if (path == "-") return in_;
        holder = std::make_unique<std::ifstream>(path, std::ios::binary);
        if (!*holder) throw DataError("cannot open " + path);
        return *holder;
    }

    const GlobalOptions& globals() const { return g_; }

private:
    const GlobalOptions& g_;
    std::istream& in_;
    std::ostream& out_;
    std::optional<textsim::StopwordSet> custom_stopwords_;
};

const RankedList& single_record(const analysis::SerpDataset& ds, const std::string& path) {
    if (ds.size() != 1) {
        throw DataError(path + " must hold exactly one record, found " + std::to_string(ds.size()));
    }
    return ds.records().begin()->second;
}

const RankedList& select(const analysis::SerpDataset& ds, const std::string& engine, const std::string& query,
                         const std::string& date) {
    analysis::ListKey key{engine, query, parse_date(date)};
    const auto* list = ds.find(key);
    if (!list) throw DataError("no list for " + analysis::to_string(key));
    return *list;
}

std::string fingerprint_text(const textsim::StopwordSet& words) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                  static_cast<unsigned long long>(textsim::stopword_fingerprint(words)));
    return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compare ranked search-result lists with the content-aware metric T and baseline rank metrics.",
                 "serpsim"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--weights", g.weights, "Penalty weights a,b,c for snippets, titles, transpositions")
        ->capture_default_str();
    app.add_option("--boost", g.boost, "Strictly descending boost weights w1,...,wr")->capture_default_str();
    app.add_option("--stopwords", g.stopwords_path, "Stopword file (one token per line, '#' comments)");
    app.add_option("--metric", g.metric, "Similarity metric")
        ->check(CLI::IsMember({"t", "footrule", "kendall", "jaro", "jarowinkler"}))
        ->capture_default_str();
    app.add_flag("--strict", g.strict, "Reject lists shorter than --list-length after deduplication");
    app.add_flag("--normalize", g.normalize, "Canonicalize and redirect-resolve URLs while loading");
    app.add_option("--redirect-cache", g.redirect_cache, "Redirect cache file (source<TAB>target per line)");
    app.add_flag("--strip-www", g.strip_www, "Drop a leading 'www.' from hosts when canonicalizing");
    app.add_flag("--sort-query", g.sort_query, "Sort query parameters when canonicalizing");
    app.add_option("--list-length", g.list_length, "Truncate lists to this common length");
    app.add_option("--threads", g.threads, "Worker threads for batch analyses (0 = all cores)");

    std::string dataset, output, pair_text, query, date, engine;
    std::vector<std::string> files;

    auto* compare = app.add_subcommand("compare", "Compare two lists (two single-record files or dataset selectors)");
    compare->add_option("files", files, "Two single-record dataset files")->expected(0, 2);
    compare->add_option("--dataset", dataset, "Dataset to select both lists from");
    compare->add_option("--engines", pair_text, "Engine pair A,B");
    compare->add_option("--query", query, "Query text");
    compare->add_option("--date", date, "Date YYYY-MM-DD");

    auto* matrix = app.add_subcommand("matrix", "Day x query similarity grid for an engine pair");
    matrix->add_option("dataset", dataset, "Dataset file ('-' for stdin)")->required();
    matrix->add_option("--pair", pair_text, "Engine pair A,B")->required();
    matrix->add_option("--output,-o", output, "Write to file instead of stdout");

    auto* consistency = app.add_subcommand("consistency", "Per-day mean similarity of a matrix");
    consistency->add_option("matrix", files, "Matrix CSV produced by 'matrix' ('-' for stdin)")->expected(0, 1);
    consistency->add_option("--dataset", dataset, "Compute the matrix from this dataset instead");
    consistency->add_option("--pair", pair_text, "Engine pair A,B (with --dataset)");
    consistency->add_option("--output,-o", output, "Write to file instead of stdout");

    auto* summary = app.add_subcommand("summary", "Mean, median, min and max of a matrix");
    summary->add_option("matrix", files, "Matrix CSV produced by 'matrix' ('-' for stdin)")->expected(0, 1);
    summary->add_option("--dataset", dataset, "Compute the matrix from this dataset instead");
    summary->add_option("--pair", pair_text, "Engine pair A,B (with --dataset)");
    summary->add_option("--output,-o", output, "Write to file instead of stdout");

    std::string factor_text, steps_text;
    auto* sweep = app.add_subcommand("sweep", "Percentage decrease of mean T as one penalty weight grows");
    sweep->add_option("dataset", dataset, "Dataset file ('-' for stdin)")->required();
    sweep->add_option("--pair", pair_text, "Engine pair A,B")->required();
    sweep->add_option("--factor", factor_text, "Penalty to sweep")
        ->required()
        ->check(CLI::IsMember({"snippet", "title", "transposition"}));
    sweep->add_option("--steps", steps_text, "Weights to try (default 0.1,0.2,...,1)");
    sweep->add_option("--output,-o", output, "Write to file instead of stdout");

    std::string old_path, new_path, old_date = "first", new_date = "first";
    auto* drift = app.add_subcommand("drift", "Mean similarity of one engine to itself across two periods");
    drift->add_option("--old", old_path, "Earlier dataset")->required();
    drift->add_option("--new", new_path, "Later dataset")->required();
    drift->add_option("--engine", engine, "Engine to compare with itself")->required();
    drift->add_option("--old-date", old_date, "first, last or YYYY-MM-DD")->capture_default_str();
    drift->add_option("--new-date", new_date, "first, last or YYYY-MM-DD")->capture_default_str();

    std::string resolve_mode = "offline", save_cache;
    std::size_t max_in_flight = 8;
    auto* normalize = app.add_subcommand("normalize-urls", "Print the canonical form of each URL, one per line");
    normalize->add_option("input", files, "File of URLs, one per line ('-' for stdin)")->expected(0, 1);
    normalize->add_option("--resolve", resolve_mode, "Redirect resolution mode")
        ->check(CLI::IsMember({"none", "offline", "online"}))
        ->capture_default_str();
    normalize->add_option("--save-cache", save_cache, "Write the updated redirect cache here");
    normalize->add_option("--max-in-flight", max_in_flight, "Concurrent online lookups")->capture_default_str();
    normalize->add_option("--output,-o", output, "Write to file instead of stdout");

    std::string mapping_path;
    auto* import = app.add_subcommand("import", "Convert foreign line-delimited JSON using a field-mapping file");
    import->add_option("input", files, "Foreign JSONL file ('-' for stdin)")->expected(0, 1);
    import->add_option("--mapping", mapping_path, "JSON mapping of field names to JSON pointers")->required();
    import->add_option("--output,-o", output, "Write to file instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitUsage;
    }

    Session session(g, in, out);
    try {
        if (*compare) {
            const RankedList* left = nullptr;
            const RankedList* right = nullptr;
            analysis::SerpDataset left_ds, right_ds;
            if (files.size() == 2) {
                left_ds = session.dataset(files[0]);
                right_ds = session.dataset(files[1]);
                left = &single_record(left_ds, files[0]);
                right = &single_record(right_ds, files[1]);
            } else if (!dataset.empty() && files.empty()) {
                if (query.empty() || date.empty()) throw UsageError("compare --dataset needs --engines, --query, --date");
                const auto [a, b] = parse_pair(pair_text, "--engines");
                left_ds = session.dataset(dataset);
                left = &select(left_ds, a, query, date);
                right = &select(left_ds, b, query, date);
            } else {
                throw UsageError("compare needs two files, or --dataset with --engines, --query and --date");
            }
            const auto kind = session.metric_kind();
            out << "metric = " << analysis::metric_kind_name(kind) << '\n';
            out << "left = " << analysis::to_string({left->engine(), left->query(), left->date()}) << '\n';
            out << "right = " << analysis::to_string({right->engine(), right->query(), right->date()}) << '\n';
            if (kind == analysis::MetricKind::t) {
                out << "stopwords = " << fingerprint_text(session.stopwords()) << '\n';
                io::write_breakdown(out, metric_t(*left, *right, session.config(), session.stopwords()));
            } else {
                out << "similarity = " << io::format_number(session.pair_metric()(*left, *right)) << '\n';
            }
        } else if (*matrix) {
            const auto [a, b] = parse_pair(pair_text, "--pair");
            const auto ds = session.dataset(dataset);
            const auto grid = analysis::similarity_matrix(ds, a, b, session.pair_metric(), session.parallel());
            session.emit(output, [&](std::ostream& o) { io::write_matrix_csv(o, grid); });
        } else if (*consistency || *summary) {
            std::optional<SimilarityMatrix> grid;
            if (!dataset.empty()) {
                if (!files.empty()) throw UsageError("give either a matrix file or --dataset, not both");
                const auto [a, b] = parse_pair(pair_text, "--pair");
                const auto ds = session.dataset(dataset);
                grid = analysis::similarity_matrix(ds, a, b, session.pair_metric(), session.parallel());
            } else if (files.size() == 1) {
                std::unique_ptr<std::ifstream> holder;
                grid = io::read_matrix_csv(session.open_input(files[0], holder), Session::display_name(files[0]));
            } else {
                throw UsageError("a matrix file or --dataset with --pair is required");
            }
            if (*consistency) {
                const auto series = analysis::consistency_series(*grid);
                session.emit(output, [&](std::ostream& o) { io::write_series_csv(o, series); });
            } else {
                const auto stats = analysis::pair_summary(*grid);
                session.emit(output, [&](std::ostream& o) { io::write_summary_csv(o, stats); });
            }
        } else if (*sweep) {
            const auto [a, b] = parse_pair(pair_text, "--pair");
            const auto steps = steps_text.empty() ? analysis::default_sweep_steps()
                                                  : parse_numbers(steps_text, "--steps");
            const auto factor = *analysis::parse_factor(factor_text);
            const auto ds = session.dataset(dataset);
            analysis::ImpactReport report;
            try {
                report = analysis::impact_sweep(ds, a, b, factor, steps, session.config(), session.stopwords(),
                                                session.parallel());
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            session.emit(output, [&](std::ostream& o) { io::write_impact_csv(o, report); });
        } else if (*drift) {
            const auto before = session.dataset(old_path);
            const auto after = session.dataset(new_path);
            const auto result = analysis::cross_period_drift(before, after, engine, session.pair_metric(),
                                                             parse_period(old_date), parse_period(new_date));
            out << "engine = " << engine << '\n'
                << "metric = " << analysis::metric_kind_name(session.metric_kind()) << '\n'
                << "queries = " << result.queries << '\n'
                << "mean_similarity = " << io::format_number(result.mean) << '\n';
        } else if (*normalize) {
            const std::string input = files.empty() ? "-" : files[0];
            std::unique_ptr<std::ifstream> holder;
            std::istream& src = session.open_input(input, holder);
            std::vector<std::string> urls;
            std::string line;
            std::size_t line_no = 0;
            while (std::getline(src, line)) {
                ++line_no;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.find_first_not_of(" \t") == std::string::npos) continue;
                try {
                    urls.push_back(urlnorm::canonicalize(line, session.canonical()));
                } catch (const UrlParseError& e) {
                    throw DataError(Session::display_name(input) + ":" + std::to_string(line_no) + ": " + e.what());
                }
            }
            if (resolve_mode != "none") {
                urlnorm::RedirectCache cache;
                if (!g.redirect_cache.empty()) cache = urlnorm::RedirectCache::load(g.redirect_cache);
                const auto mode = resolve_mode == "online" ? urlnorm::ResolveMode::online : urlnorm::ResolveMode::offline;
                urlnorm::HttpRedirectFetcher fetcher;
                urls = urlnorm::resolve_all(urls, cache, mode, &fetcher, std::max<std::size_t>(1, max_in_flight),
                                            session.canonical());
                if (!save_cache.empty()) cache.save(save_cache);
            }
            session.emit(output, [&](std::ostream& o) {
                for (const auto& u : urls) o << u << '\n';
            });
        } else if (*import) {
            const auto mapping = io::ImportMapping::load(mapping_path);
            const std::string input = files.empty() ? "-" : files[0];
            std::unique_ptr<std::ifstream> holder;
            std::istream& src = session.open_input(input, holder);
            session.emit(output, [&](std::ostream& o) { io::import_records(src, o, mapping, Session::display_name(input)); });
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace serpsim::cli
