#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace motivescan {

// UTF-8 helpers. The decoder is total: malformed bytes are skipped, so all
// downstream text functions accept arbitrary byte strings.
namespace utf8 {
std::vector<std::uint32_t> decode(std::string_view bytes);
void encode_append(std::uint32_t cp, std::string& out);
std::string encode(const std::vector<std::uint32_t>& cps);
}  // namespace utf8

// A token list produced by the classifier preprocessing chain, capped at
// max_len tokens (prefix kept — the first identifiable motive decides the
// label, so the head of the text carries the signal).
struct TokenSequence {
  std::vector<std::string> tokens;
  std::size_t original_length = 0;  // token count before truncation
};

struct StopWordList {
  std::unordered_set<std::string> entries;

  bool contains(const std::string& word) const {
    return entries.count(word) != 0;
  }
};

// Loads a stop-word file: UTF-8, one word per line, '#' comment lines and
// blank lines ignored. Entries are passed through normalize() so the list is
// guaranteed lowercase and umlaut-folded regardless of how the file was
// written. Throws if no usable entry remains.
StopWordList load_stopwords(const std::string& path);

// Text normalization: lowercases (ASCII, Latin-1, Latin Extended-A, Greek,
// Cyrillic), folds ae/oe/ue/ss for German umlauts and eszett, strips digits
// (ASCII and fullwidth) and emoji/pictographic codepoints, drops URL,
// #hashtag and @mention chunks, and collapses whitespace to single spaces.
// Character-level mapping runs before chunk filtering so the function is
// idempotent (e.g. "1#tag" loses the digit and the remaining "#tag" chunk in
// the same pass).
std::string normalize(std::string_view text);

// Splits a normalized string on whitespace, strips leading/trailing
// punctuation from each token, drops tokens that are punctuation-only.
// Interior punctuation (hyphens, apostrophes) is kept.
std::vector<std::string> tokenize(std::string_view normalized);

// Order-preserving removal of exact stop-word matches.
std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopWordList& stop);

// Keeps the first max_len tokens and records the pre-truncation count.
// max_len must be >= 1.
TokenSequence truncate_primacy(std::vector<std::string> tokens,
                               std::size_t max_len);

inline constexpr std::size_t kDefaultMaxLen = 20;

// Classifier stream: normalize -> tokenize -> remove stop words -> truncate.
TokenSequence prep_classifier_tokens(std::string_view text,
                                     const StopWordList& stop,
                                     std::size_t max_len = kDefaultMaxLen);

// Lexicon / linguistic stream: normalize -> tokenize only. Dictionary
// percentages and word statistics are defined over all words, so no stop-word
// removal and no token cap here.
std::vector<std::string> prep_full_tokens(std::string_view text);

// Codepoint classifiers used by normalize/tokenize, exposed for tests.
bool is_space_cp(std::uint32_t cp);
bool is_digit_cp(std::uint32_t cp);
bool is_emoji_cp(std::uint32_t cp);
bool is_punct_cp(std::uint32_t cp);
std::uint32_t lower_cp(std::uint32_t cp);

}  // namespace motivescan
