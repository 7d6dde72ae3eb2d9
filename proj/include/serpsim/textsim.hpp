#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>

#include "serpsim/model.hpp"

namespace serpsim::textsim {

using StopwordSet = std::unordered_set<std::string>;

/// Token -> frequency counts. Every stored count is >= 1.
class TermVector {
public:
    TermVector() = default;

    void add(const std::string& token, std::int64_t count = 1);
    std::int64_t count(const std::string& token) const;
    std::size_t size() const noexcept { return counts_.size(); }
    bool empty() const noexcept { return counts_.empty(); }
    const std::map<std::string, std::int64_t, std::less<>>& counts() const noexcept { return counts_; }

    friend bool operator==(const TermVector&, const TermVector&) = default;

private:
    std::map<std::string, std::int64_t, std::less<>> counts_;
};

/// Lowercased word tokens, split on every run of non-alphanumeric code points.
/// Lowercasing and classification are Unicode-aware; invalid UTF-8 bytes act
/// as separators.
std::vector<std::string> split_words(std::string_view text);

/// Term frequencies of `text` without stopwords and without the query's own tokens.
TermVector tokenize(std::string_view text, std::string_view query, const StopwordSet& stopwords);

/// 1 - cos(v1, v2). Both empty gives 0, exactly one empty gives 1.
double cosine_distance(const TermVector& v1, const TermVector& v2);

enum class ContentField { snippet, title };

/// Sum of per-result cosine distances of the chosen field over the results
/// both lists share. Requires equal list lengths and equal query text.
double content_penalty(const RankedList& list_a, const RankedList& list_b, ContentField field,
                       const StopwordSet& stopwords);

// Stopword file: one token per line, '#' starts a comment.
StopwordSet load_stopwords(const std::filesystem::path& path);
StopwordSet parse_stopwords(std::string_view text);

// The English list bundled with the library.
const StopwordSet& default_stopwords();

// FNV-1a 64 over the sorted tokens, each followed by '\n'.
std::uint64_t stopword_fingerprint(const StopwordSet& stopwords);
// Fingerprint of the bundled list; a mismatch means results are not comparable.
inline constexpr std::uint64_t kDefaultStopwordFingerprint = 0xd51fb26099a747e1ULL;

}  // namespace serpsim::textsim
