#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "serpsim/textsim.hpp"

using namespace serpsim;
using namespace serpsim::textsim;
using serpsim::testing::day;
using serpsim::testing::Entry;
using serpsim::testing::make_list;

namespace {

TermVector vec(std::initializer_list<std::pair<const char*, int>> items) {
    TermVector v;
    for (const auto& [token, n] : items) v.add(token, n);
    return v;
}

}  // namespace

TEST(Tokenize, EmptyTextGivesEmptyVector) {
    EXPECT_TRUE(tokenize("", "anything", default_stopwords()).empty());
}

TEST(Tokenize, RemovesStopwordsAndQueryTerms) {
    const auto v = tokenize("The official website for songwriter Steven Wilson", "Steven Wilson", default_stopwords());
    EXPECT_EQ(v, vec({{"official", 1}, {"website", 1}, {"songwriter", 1}}));
}

TEST(Tokenize, CountsRepeats) {
    EXPECT_EQ(tokenize("rock rock band", "jazz", {}), vec({{"rock", 2}, {"band", 1}}));
}

TEST(Tokenize, SplitsOnNonAlphanumericRunsAndLowercasesUnicode) {
    EXPECT_EQ(split_words("songwriter/producer Steven's 'Home Invasion:' 2018!"),
              (std::vector<std::string>{"songwriter", "producer", "steven", "s", "home", "invasion", "2018"}));
    EXPECT_EQ(split_words("CAFÉ Über\xE2\x80\x94" "straße"), (std::vector<std::string>{"café", "über", "straße"}));
    // Invalid UTF-8 acts as a separator.
    EXPECT_EQ(split_words("ab\xFF" "cd"), (std::vector<std::string>{"ab", "cd"}));
    EXPECT_TRUE(split_words(" ,.;- ").empty());
}

TEST(CosineDistance, Conventions) {
    EXPECT_EQ(cosine_distance({}, {}), 0.0);
    EXPECT_EQ(cosine_distance(vec({{"a", 1}}), {}), 1.0);
    EXPECT_EQ(cosine_distance({}, vec({{"a", 1}})), 1.0);
}

TEST(CosineDistance, HandComputedCases) {
    EXPECT_EQ(cosine_distance(vec({{"a", 1}, {"b", 1}}), vec({{"a", 1}, {"b", 1}})), 0.0);
    EXPECT_EQ(cosine_distance(vec({{"a", 1}}), vec({{"b", 1}})), 1.0);
    EXPECT_NEAR(cosine_distance(vec({{"a", 1}, {"b", 1}}), vec({{"a", 1}})), 1.0 - 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(cosine_distance(vec({{"a", 1}, {"b", 1}}), vec({{"a", 1}})), 0.29289, 1e-5);
}

TEST(CosineDistance, PropertiesOnRandomVectors) {
    serpsim::testing::ListPairGenerator gen(11);
    for (int i = 0; i < 1000; ++i) {
        TermVector v1, v2, scaled;
        const std::int64_t k = static_cast<std::int64_t>(gen.uniform(1, 9));
        for (std::size_t t = 0, n = gen.uniform(0, 5); t < n; ++t) {
            const auto tok = "w" + std::to_string(gen.uniform(0, 6));
            const auto c = static_cast<std::int64_t>(gen.uniform(1, 4));
            v1.add(tok, c);
            scaled.add(tok, c * k);
        }
        for (std::size_t t = 0, n = gen.uniform(0, 5); t < n; ++t) {
            v2.add("w" + std::to_string(gen.uniform(0, 6)), static_cast<std::int64_t>(gen.uniform(1, 4)));
        }
        const double d = cosine_distance(v1, v2);
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, 1.0);
        EXPECT_EQ(d, cosine_distance(v2, v1));
        EXPECT_NEAR(cosine_distance(scaled, v2), d, 1e-12);
    }
}

TEST(ContentPenalty, IdenticalSnippetsCostNothing) {
    const auto a = serpsim::testing::shared_content_list("A", {"a", "b", "c"});
    const auto b = serpsim::testing::shared_content_list("B", {"c", "a", "b"});
    EXPECT_EQ(content_penalty(a, b, ContentField::snippet, default_stopwords()), 0.0);
    EXPECT_EQ(content_penalty(a, b, ContentField::title, default_stopwords()), 0.0);
}

TEST(ContentPenalty, DisjointVocabulariesCostOnePerSharedResult) {
    const auto a = serpsim::testing::engine_content_list("A", {"a", "b", "c", "x"});
    const auto b = serpsim::testing::engine_content_list("B", {"c", "a", "b", "y"});
    EXPECT_EQ(content_penalty(a, b, ContentField::snippet, default_stopwords()), 3.0);
    EXPECT_EQ(content_penalty(a, b, ContentField::title, default_stopwords()), 3.0);
}

TEST(ContentPenalty, MixedPairSumsDistances) {
    const auto d = day(2019, 5, 1);
    const auto a = make_list("A", "q", d, {{"a", "t", "same words here"}, {"b", "t", "apple"}, {"c", "t", "x"}});
    const auto b = make_list("B", "q", d, {{"a", "t", "same words here"}, {"b", "t", "orange"}, {"z", "t", "y"}});
    EXPECT_EQ(content_penalty(a, b, ContentField::snippet, default_stopwords()), 1.0);
    EXPECT_EQ(content_penalty(b, a, ContentField::snippet, default_stopwords()), 1.0);
}

TEST(ContentPenalty, QueryTermsDoNotCount) {
    const auto d = day(2019, 5, 1);
    const auto a = make_list("A", "steven wilson", d, {{"a", "Steven Wilson", "Steven Wilson music"}});
    const auto b = make_list("B", "steven wilson", d, {{"a", "Wilson", "music by Steven"}});
    EXPECT_EQ(content_penalty(a, b, ContentField::title, default_stopwords()), 0.0);
    EXPECT_EQ(content_penalty(a, b, ContentField::snippet, default_stopwords()), 0.0);
}

TEST(ContentPenalty, PreconditionsAreEnforced) {
    const auto d = day(2019, 5, 1);
    const auto a = make_list("A", "q", d, {{"a", "", ""}});
    const auto b = make_list("B", "other", d, {{"a", "", ""}});
    const auto c = make_list("C", "q", d, {{"a", "", ""}, {"b", "", ""}});
    EXPECT_THROW(content_penalty(a, b, ContentField::snippet, {}), DataError);
    EXPECT_THROW(content_penalty(a, c, ContentField::snippet, {}), DataError);
}

TEST(ContentPenalty, BoundedBySharedCountAndSymmetric) {
    serpsim::testing::ListPairGenerator gen(5);
    for (int i = 0; i < 500; ++i) {
        const auto [a, b] = gen.pair();
        std::size_t shared = 0;
        for (const auto& r : a.results()) {
            for (const auto& q : b.results()) shared += r.url() == q.url();
        }
        for (auto field : {ContentField::snippet, ContentField::title}) {
            const double p = content_penalty(a, b, field, default_stopwords());
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, static_cast<double>(shared));
            EXPECT_EQ(p, content_penalty(b, a, field, default_stopwords()));
        }
    }
}

TEST(Stopwords, FileFormatAndBundledFingerprint) {
    const auto words = parse_stopwords("# comment\nThe\n\n  and  # trailing\nfor\n");
    EXPECT_EQ(words, (StopwordSet{"the", "and", "for"}));

    EXPECT_EQ(stopword_fingerprint(default_stopwords()), kDefaultStopwordFingerprint);
    EXPECT_EQ(default_stopwords().size(), 153u);
    EXPECT_TRUE(default_stopwords().contains("the"));
    EXPECT_TRUE(default_stopwords().contains("for"));

    const auto on_disk = load_stopwords(SERPSIM_DATA_DIR "/stopwords_en.txt");
    EXPECT_EQ(on_disk, default_stopwords());
    EXPECT_THROW(load_stopwords("/nonexistent/stopwords.txt"), DataError);
}
