#include "serpsim/textsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <locale>
#include <sstream>
#include <vector>

namespace serpsim::textsim {

extern const char* const kBundledStopwords;  // generated from data/stopwords_en.txt

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at text[i], advancing i. Malformed input
// yields kInvalid and consumes one byte.
char32_t next_code_point(std::string_view text, std::size_t& i) {
    const auto lead = static_cast<unsigned char>(text[i]);
    if (lead < 0x80) {
        ++i;
        return lead;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        ++i;
        return kInvalid;
    }
    if (i + extra >= text.size()) {
        ++i;
        return kInvalid;
    }
    for (int k = 1; k <= extra; ++k) {
        const auto cont = static_cast<unsigned char>(text[i + k]);
        if ((cont & 0xC0) != 0x80) {
            ++i;
            return kInvalid;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kInvalid;
    }
    i += extra + 1;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Character classes come from the C.UTF-8 locale when the platform has it;
// otherwise only ASCII letters and digits count as word characters.
class CharClassifier {
public:
    CharClassifier() {
        for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
            try {
                locale_ = std::locale(name);
                facet_ = &std::use_facet<std::ctype<wchar_t>>(locale_);
                return;
            } catch (const std::runtime_error&) {
            }
        }
    }

    bool is_word(char32_t cp) const {
        if (cp < 0x80) {
            return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
        }
        return facet_ != nullptr && facet_->is(std::ctype_base::alnum, static_cast<wchar_t>(cp));
    }

    char32_t lower(char32_t cp) const {
        if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp - 'A' + 'a' : cp;
        return facet_ != nullptr ? static_cast<char32_t>(facet_->tolower(static_cast<wchar_t>(cp))) : cp;
    }

private:
    std::locale locale_;
    const std::ctype<wchar_t>* facet_ = nullptr;
};

const CharClassifier& classifier() {
    static const CharClassifier instance;
    return instance;
}

}  // namespace

void TermVector::add(const std::string& token, std::int64_t count) {
    if (count <= 0) throw InvariantError("term counts must be positive");
    if (token.empty()) throw InvariantError("empty token");
    counts_[token] += count;
}

std::int64_t TermVector::count(const std::string& token) const {
    const auto it = counts_.find(token);
    return it == counts_.end() ? 0 : it->second;
}

std::vector<std::string> split_words(std::string_view text) {
    const auto& cls = classifier();
    std::vector<std::string> words;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = next_code_point(text, i);
        if (cp != kInvalid && cls.is_word(cp)) {
            append_utf8(current, cls.lower(cp));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

TermVector tokenize(std::string_view text, std::string_view query, const StopwordSet& stopwords) {
    const auto query_words = split_words(query);
    const std::unordered_set<std::string> query_terms(query_words.begin(), query_words.end());
    TermVector vec;
    for (auto& word : split_words(text)) {
        if (stopwords.contains(word) || query_terms.contains(word)) continue;
        vec.add(word);
    }
    return vec;
}

double cosine_distance(const TermVector& v1, const TermVector& v2) {
    if (v1.empty() && v2.empty()) return 0.0;
    if (v1.empty() || v2.empty()) return 1.0;

    // Integer accumulation keeps the result exactly symmetric.
    std::int64_t dot = 0;
    std::int64_t sq1 = 0;
    std::int64_t sq2 = 0;
    for (const auto& [token, n] : v1.counts()) {
        sq1 += n * n;
        dot += n * v2.count(token);
    }
    for (const auto& [token, n] : v2.counts()) sq2 += n * n;

    const double cosine = static_cast<double>(dot) /
                          std::sqrt(static_cast<double>(sq1) * static_cast<double>(sq2));
    return std::clamp(1.0 - cosine, 0.0, 1.0);
}

double content_penalty(const RankedList& list_a, const RankedList& list_b, ContentField field,
                       const StopwordSet& stopwords) {
    if (list_a.size() != list_b.size()) {
        throw DataError("content penalty needs equal list lengths (" + std::to_string(list_a.size()) +
                        " vs " + std::to_string(list_b.size()) + ")");
    }
    if (list_a.query() != list_b.query()) {
        throw DataError("content penalty needs equal queries ('" + list_a.query() + "' vs '" +
                        list_b.query() + "')");
    }

    std::map<std::string_view, const SearchResult*> in_b;
    for (const auto& r : list_b.results()) in_b.emplace(r.url(), &r);

    // Visit shared results in URL order so the sum does not depend on which list comes first.
    std::map<std::string_view, std::pair<const SearchResult*, const SearchResult*>> shared;
    for (const auto& r : list_a.results()) {
        if (auto it = in_b.find(r.url()); it != in_b.end()) shared.emplace(r.url(), std::pair{&r, it->second});
    }

    auto text_of = [field](const SearchResult& r) -> const std::string& {
        return field == ContentField::snippet ? r.snippet() : r.title();
    };
    double total = 0.0;
    for (const auto& [url, pair] : shared) {
        total += cosine_distance(tokenize(text_of(*pair.first), list_a.query(), stopwords),
                                 tokenize(text_of(*pair.second), list_b.query(), stopwords));
    }
    return total;
}

StopwordSet parse_stopwords(std::string_view text) {
    StopwordSet words;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& w : split_words(line)) words.insert(std::move(w));
    }
    return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open stopword file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_stopwords(buf.str());
}

const StopwordSet& default_stopwords() {
    static const StopwordSet words = parse_stopwords(kBundledStopwords);
    return words;
}

std::uint64_t stopword_fingerprint(const StopwordSet& stopwords) {
    std::vector<std::string_view> sorted(stopwords.begin(), stopwords.end());
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](unsigned char byte) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    };
    for (auto word : sorted) {
        for (char c : word) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    return hash;
}

}  // namespace serpsim::textsim
