#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "fixtures.hpp"
#include "serpsim/dataset_io.hpp"

using namespace serpsim;
using namespace serpsim::io;
using serpsim::testing::day;

namespace {

std::string record(const std::string& engine, const std::string& query, const std::string& date,
                   const std::string& results, const std::string& category = "music") {
    return R"({"category":")" + category + R"(","date":")" + date + R"(","engine":")" + engine +
           R"(","query":")" + query + R"(","results":[)" + results + "]}";
}

std::string result(int rank, const std::string& url, const std::string& title = "t",
                   const std::string& snippet = "s") {
    return R"({"rank":)" + std::to_string(rank) + R"(,"snippet":")" + snippet + R"(","title":")" + title +
           R"(","url":")" + url + R"("})";
}

analysis::SerpDataset read(const std::string& text, const LoadOptions& options = {}) {
    std::istringstream in(text);
    return read_dataset(in, options, "data.jsonl");
}

std::string error_of(const std::string& text, const LoadOptions& options = {}) {
    try {
        read(text, options);
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("serpsim_io_" + name + "_" + std::to_string(::getpid()));
}

}  // namespace

TEST(ReadDataset, EmptyInputGivesEmptyDataset) {
    EXPECT_TRUE(read("").empty());
    EXPECT_TRUE(read("\n   \n").empty());
}

TEST(ReadDataset, ReadsRecordsAndCategories) {
    const std::string text = record("bing", "q1", "2019-05-01", result(1, "https://a.org/") + "," +
                                                                    result(2, "https://b.org/")) +
                             "\n" + record("google", "q1", "2019-05-01", result(1, "https://a.org/")) + "\n\n" +
                             record("bing", "q2", "2019-05-02", result(1, "https://c.org/"), "news") + "\n";
    const auto ds = read(text);
    EXPECT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds.engines(), (std::vector<std::string>{"bing", "google"}));
    EXPECT_EQ(ds.category("q2"), "news");
    const auto* list = ds.find({"bing", "q1", day(2019, 5, 1)});
    ASSERT_NE(list, nullptr);
    EXPECT_EQ(list->at_rank(2).url(), "https://b.org/");
}

TEST(ReadDataset, ResultsMayArriveOutOfOrder) {
    const auto ds = read(record("bing", "q", "2019-05-01", result(2, "https://b.org/") + "," +
                                                               result(1, "https://a.org/")));
    EXPECT_EQ(ds.find({"bing", "q", day(2019, 5, 1)})->at_rank(1).url(), "https://a.org/");
}

TEST(ReadDataset, ErrorsNameTheLine) {
    const std::string good = record("bing", "q", "2019-05-01", result(1, "https://a.org/"));
    const std::string dup = record("bing", "q", "2019-05-02", result(1, "https://a.org/") + "," +
                                                                  result(2, "https://b.org/") + "," +
                                                                  result(2, "https://c.org/"));
    const auto msg = error_of(good + "\n\n" + dup + "\n");
    EXPECT_NE(msg.find("data.jsonl:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("duplicate rank 2"), std::string::npos) << msg;

    EXPECT_NE(error_of("{not json").find("data.jsonl:1:"), std::string::npos);
    EXPECT_NE(error_of(record("bing", "q", "2019-13-01", result(1, "https://a.org/"))).find(":1:"),
              std::string::npos);
    EXPECT_NE(error_of(record("bing", "q", "2019-05-01", result(1, "https://a.org/") + "," +
                                                             result(3, "https://b.org/")))
                  .find("contiguous"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"engine":"bing","query":"q","date":"2019-05-01"})").find("results"), std::string::npos);
    EXPECT_NE(error_of(good + "\n" + good).find(":2:"), std::string::npos);
    EXPECT_NE(error_of(record("bing", "q", "2019-05-01", result(1, "https://a.org/"), "a") + "\n" +
                       record("bing", "q", "2019-05-02", result(1, "https://a.org/"), "b"))
                  .find("conflicting"),
              std::string::npos);
}

TEST(ReadDataset, DuplicateUrlsAreDroppedAndStrictRejectsShortLists) {
    const std::string text = record("bing", "q", "2019-05-01", result(1, "https://a.org/") + "," +
                                                                   result(2, "https://b.org/") + "," +
                                                                   result(3, "https://a.org/"));
    EXPECT_EQ(read(text).find({"bing", "q", day(2019, 5, 1)})->size(), 2u);

    LoadOptions strict;
    strict.list_length = 3;
    strict.strict = true;
    EXPECT_THROW(read(text, strict), DataError);

    LoadOptions cut;
    cut.list_length = 1;
    EXPECT_EQ(read(text, cut).find({"bing", "q", day(2019, 5, 1)})->size(), 1u);
}

TEST(ReadDataset, NormalizationCanonicalizesAndResolvesThroughTheCache) {
    const auto cache_path = temp_file("cache");
    {
        std::ofstream out(cache_path);
        out << "http://short.example/x\thttps://target.example/page\n";
    }
    const std::string text = record("bing", "q", "2019-05-01", result(1, "HTTP://Short.Example:80/x/") + "," +
                                                                   result(2, "https://B.org/a/../b"));
    LoadOptions opts;
    opts.normalize = true;
    opts.redirect_cache = cache_path;
    const auto ds = read(text, opts);
    const auto* list = ds.find({"bing", "q", day(2019, 5, 1)});
    ASSERT_NE(list, nullptr);
    EXPECT_EQ(list->at_rank(1).url(), "https://target.example/page");
    EXPECT_EQ(list->at_rank(2).url(), "https://b.org/b");
    std::filesystem::remove(cache_path);
}

TEST(WriteDataset, RoundTripIsByteExact) {
    const std::string text =
        record("bing", "q1", "2019-05-01",
               result(1, "https://a.org/", "Café \\\"quoted\\\"", "line") + "," + result(2, "https://b.org/")) +
        "\n" + record("google", "q1", "2019-05-01", result(1, "https://a.org/")) + "\n";
    std::ostringstream first;
    write_dataset(first, read(text));
    std::ostringstream second;
    write_dataset(second, read(first.str()));
    EXPECT_EQ(first.str(), second.str());
    EXPECT_EQ(first.str(), text);
}

TEST(Csv, FieldsAndNumbers) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(parse_csv_line("a,\"b,c\",\"d\"\"e\",,"), (std::vector<std::string>{"a", "b,c", "d\"e", "", ""}));
    EXPECT_THROW(parse_csv_line("\"open"), DataError);

    EXPECT_EQ(format_number(0.123456), "0.1235");
    EXPECT_EQ(format_number(-0.00001), "0.0000");
    EXPECT_EQ(format_number(1.0), "1.0000");
}

TEST(MatrixCsv, RoundTripAndErrors) {
    const SimilarityMatrix m({"a", "b"}, {day(2019, 5, 1), day(2019, 5, 2)}, {"steven wilson", "x,y"},
                             {0.25, std::nullopt, 1.0, 0.123456});
    std::ostringstream out;
    write_matrix_csv(out, m);
    EXPECT_EQ(out.str(), "date,steven wilson,\"x,y\"\n2019-05-01,0.2500,NA\n2019-05-02,1.0000,0.1235\n");

    std::istringstream in(out.str());
    const auto back = read_matrix_csv(in);
    EXPECT_EQ(back.queries(), m.queries());
    EXPECT_EQ(back.days(), m.days());
    EXPECT_EQ(back.at(0, 0), 0.25);
    EXPECT_FALSE(back.at(0, 1).has_value());

    std::istringstream empty("");
    EXPECT_THROW(read_matrix_csv(empty), DataError);
    std::istringstream bad_header("day,q\n");
    EXPECT_THROW(read_matrix_csv(bad_header), DataError);
    std::istringstream bad_row("date,q\n2019-05-01,0.5,0.7\n");
    EXPECT_THROW(read_matrix_csv(bad_row, "m.csv"), DataError);
    std::istringstream bad_value("date,q\n2019-05-01,1.5\n");
    EXPECT_THROW(read_matrix_csv(bad_value), InvariantError);
    std::istringstream bad_number("date,q\n2019-05-01,abc\n");
    EXPECT_THROW(read_matrix_csv(bad_number), DataError);
}

TEST(ReportCsv, SeriesSummaryImpactBreakdown) {
    std::ostringstream series;
    write_series_csv(series, {{day(2019, 5, 1), 0.3}, {day(2019, 5, 2), std::nullopt}});
    EXPECT_EQ(series.str(), "date,mean\n2019-05-01,0.3000\n2019-05-02,NA\n");

    std::ostringstream summary;
    write_summary_csv(summary, {0.3, 0.2, 0.1, 0.6, 3});
    EXPECT_EQ(summary.str(), "cells,mean,median,min,max\n3,0.3000,0.2000,0.1000,0.6000\n");

    analysis::ImpactReport report;
    report.factor = analysis::Factor::title;
    report.base_mean = 0.8;
    report.weight_steps = {0.5};
    report.mean_t = {0.6};
    report.decrease_pct = {25.0};
    std::ostringstream impact;
    write_impact_csv(impact, report);
    EXPECT_EQ(impact.str(), "factor,weight,mean_t,decrease_pct\ntitle,0.0000,0.8000,0.0000\ntitle,0.5000,0.6000,25.0000\n");

    std::ostringstream breakdown;
    write_breakdown(breakdown, {1, 6, 1.0, 1.0, 0.0, 2.0 / 19.0, 0.15 * 17.0 / 19.0, 2.0 / 19.0 + 0.15 * 17.0 / 19.0});
    EXPECT_NE(breakdown.str().find("S = 0.1053\n"), std::string::npos);
    EXPECT_NE(breakdown.str().find("T = 0.2395\n"), std::string::npos);
}

TEST(ImportMapping, ConvertsForeignRecords) {
    const auto mapping = ImportMapping::parse(R"({
        "engine": {"const": "bing"}, "query": "/meta/q", "date": "/day", "date_format": "compact",
        "category": "/cat", "results": "/items", "url": "/link", "title": "/name", "snippet": "/desc",
        "rank": "/pos"})");
    const std::string foreign =
        R"({"meta":{"q":"steven wilson"},"day":"20190501","cat":"music","items":[)"
        R"({"pos":"2","link":"https://b.org/","name":"B","desc":null},{"pos":1,"link":"https://a.org/","name":"A","desc":"x"}]})";
    const std::string line = mapping.convert(foreign);
    EXPECT_EQ(line, record("bing", "steven wilson", "2019-05-01",
                           result(2, "https://b.org/", "B", "") + "," + result(1, "https://a.org/", "A", "x")));

    std::istringstream in(line + "\n");
    const auto ds = read_dataset(in);
    EXPECT_EQ(ds.find({"bing", "steven wilson", day(2019, 5, 1)})->at_rank(1).url(), "https://a.org/");
}

TEST(ImportMapping, ArrayOrderGivesRankWhenUnmapped) {
    const auto mapping = ImportMapping::parse(
        R"({"engine": "/se", "query": "/q", "date": "/d", "results": "/r", "url": "/u"})");
    const auto line = mapping.convert(R"({"se":"ddg","q":"x","d":"2019-05-01","r":[{"u":"https://a.org/"},{"u":"https://b.org/"}]})");
    EXPECT_EQ(line, record("ddg", "x", "2019-05-01",
                           result(1, "https://a.org/", "", "") + "," + result(2, "https://b.org/", "", ""), ""));
}

TEST(ImportMapping, Errors) {
    EXPECT_THROW(ImportMapping::parse("[]"), DataError);
    EXPECT_THROW(ImportMapping::parse(R"({"engine": "/e"})"), DataError);
    EXPECT_THROW(ImportMapping::parse(R"({"engine": "no-slash", "query": "/q", "date": "/d", "results": "/r", "url": "/u"})"),
                 DataError);
    EXPECT_THROW(ImportMapping::parse(
                     R"({"engine": "/e", "query": "/q", "date": "/d", "results": "/r", "url": "/u", "date_format": "us"})"),
                 DataError);

    const auto mapping = ImportMapping::parse(R"({"engine": "/e", "query": "/q", "date": "/d", "results": "/r", "url": "/u"})");
    std::istringstream in("{\"e\":\"x\",\"q\":\"q\",\"d\":\"2019-05-01\",\"r\":[]}\n{\"e\":\"x\"}\n");
    std::ostringstream out;
    try {
        import_records(in, out, mapping, "foreign.jsonl");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("foreign.jsonl:2:"), std::string::npos) << e.what();
    }
}
