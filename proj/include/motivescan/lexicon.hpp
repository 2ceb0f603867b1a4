#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace motivescan {

// One dictionary pattern: a literal word, or a prefix when the source ended
// with '*' (stored without the star).
struct LexiconPattern {
  std::string stem;
  bool is_prefix = false;
};

struct CategoryScore {
  std::string category;
  std::size_t matched = 0;
  std::size_t total_tokens = 0;
  double percentage = 0.0;  // 100 * matched / total_tokens, 0 when empty
};

// Single-pattern match semantics: literal <=> equality, prefix <=> the token
// starts with the stem.
bool match_token(std::string_view token, const LexiconPattern& pattern);

// A psycholinguistic category dictionary in the %-delimited format:
//   %
//   1<TAB>family
//   2<TAB>insight
//   %
//   bruder<TAB>1
//   sohn*<TAB>1
// Patterns are matched through a byte trie compiled at load time.
class Lexicon {
public:
  static Lexicon parse_dic(const std::string& path);

  // Builds a lexicon from in-memory categories (tests, fuzzing). Each entry
  // is (category name, patterns in source syntax, e.g. "sohn*").
  static Lexicon from_patterns(
      const std::vector<std::pair<std::string, std::vector<std::string>>>&
          categories);

  const std::vector<std::string>& categories() const { return names_; }
  const std::vector<std::vector<LexiconPattern>>& patterns() const {
    return patterns_;
  }

  // Sets hit_flags[c] for every category c with at least one pattern matching
  // the token. hit_flags is resized to the category count and zeroed first.
  void match_categories(std::string_view token,
                        std::vector<char>& hit_flags) const;

  // Per-category scores over one document's full token stream (stop words
  // kept, no length cap). A token matching several patterns of one category
  // still counts once for that category.
  std::vector<CategoryScore> score_document(
      const std::vector<std::string>& tokens) const;

  // FNV-1a fingerprint of the source (file bytes, or the canonical dump for
  // in-memory lexicons); lets reports verify both corpora used the same
  // dictionary.
  std::uint64_t fingerprint() const { return fingerprint_; }

private:
  struct TrieNode {
    std::vector<std::pair<unsigned char, std::int32_t>> children;
    std::vector<std::int32_t> exact_categories;
    std::vector<std::int32_t> prefix_categories;
  };

  std::vector<std::string> names_;
  std::vector<std::vector<LexiconPattern>> patterns_;
  std::vector<TrieNode> trie_;
  std::uint64_t fingerprint_ = 0;

  void compile();
  void add_pattern_to_trie(const LexiconPattern& pattern,
                           std::int32_t category);
};

// Corpus-level scores: per-document percentage rows plus the arithmetic mean
// per category (means of per-document percentages, not pooled counts).
struct CorpusScores {
  std::vector<std::string> categories;
  std::vector<std::vector<double>> per_doc_pct;  // [doc][category]
  std::vector<double> mean_pct;                  // [category]
};

CorpusScores score_corpus(const std::vector<std::vector<std::string>>& docs,
                          const Lexicon& lexicon);

// Negation-frequency helper for the activity-inhibition indicator.
const std::unordered_set<std::string>& default_negation_words();
std::size_t negation_count(const std::vector<std::string>& tokens,
                           const std::unordered_set<std::string>& negations =
                               default_negation_words());

}  // namespace motivescan
