#include "motivescan/lexicon.hpp"

#include <algorithm>
#include <map>

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"
#include "motivescan/textprep.hpp"

namespace motivescan {

bool match_token(std::string_view token, const LexiconPattern& pattern) {
  if (pattern.is_prefix)
    return token.size() >= pattern.stem.size() &&
           token.substr(0, pattern.stem.size()) == pattern.stem;
  return token == pattern.stem;
}

namespace {

LexiconPattern parse_pattern(const std::string& raw, std::size_t line_no) {
  std::string text = raw;
  LexiconPattern p;
  if (!text.empty() && text.back() == '*') {
    p.is_prefix = true;
    text.pop_back();
  }
  if (text.empty())
    throw MotiveError("empty dictionary pattern at line " +
                      std::to_string(line_no));
  if (text.find('*') != std::string::npos)
    throw MotiveError("'*' is only allowed at the end of a pattern (line " +
                      std::to_string(line_no) + ")");
  // Patterns must already be in normalized form (lowercase, umlauts folded,
  // no digits/emoji), otherwise they could never match a normalized token.
  if (normalize(text) != text)
    throw MotiveError("dictionary pattern '" + raw +
                      "' is not in normalized form (line " +
                      std::to_string(line_no) + ")");
  p.stem = std::move(text);
  return p;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  for (std::string& f : split(line, '\t')) {
    std::string t(trim(f));
    if (!t.empty()) fields.push_back(std::move(t));
  }
  return fields;
}

}  // namespace

void Lexicon::add_pattern_to_trie(const LexiconPattern& pattern,
                                  std::int32_t category) {
  std::int32_t node = 0;
  for (unsigned char byte : pattern.stem) {
    std::int32_t next = -1;
    for (auto& [b, child] : trie_[static_cast<std::size_t>(node)].children)
      if (b == byte) {
        next = child;
        break;
      }
    if (next < 0) {
      next = static_cast<std::int32_t>(trie_.size());
      trie_[static_cast<std::size_t>(node)].children.emplace_back(byte, next);
      trie_.emplace_back();
    }
    node = next;
  }
  auto& bucket = pattern.is_prefix
                     ? trie_[static_cast<std::size_t>(node)].prefix_categories
                     : trie_[static_cast<std::size_t>(node)].exact_categories;
  if (std::find(bucket.begin(), bucket.end(), category) == bucket.end())
    bucket.push_back(category);
}

void Lexicon::compile() {
  trie_.clear();
  trie_.emplace_back();  // root
  for (std::size_t c = 0; c < patterns_.size(); ++c)
    for (const LexiconPattern& p : patterns_[c])
      add_pattern_to_trie(p, static_cast<std::int32_t>(c));
}

Lexicon Lexicon::parse_dic(const std::string& path) {
  std::string content = read_file(path);
  std::vector<std::string> lines = read_lines(path);

  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i >= lines.size() || trim(lines[i]) != "%")
    throw MotiveError("dictionary must start with a '%' header block: " + path);
  ++i;

  Lexicon lex;
  std::map<long long, std::int32_t> id_to_index;
  for (; i < lines.size() && trim(lines[i]) != "%"; ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> fields = split_tabs(lines[i]);
    if (fields.size() != 2)
      throw MotiveError("dictionary header line " + std::to_string(i + 1) +
                        " must be 'id<TAB>name'");
    long long id = parse_int(fields[0], "category id at line " +
                                            std::to_string(i + 1));
    if (id_to_index.count(id))
      throw MotiveError("duplicate category id " + std::to_string(id) +
                        " at line " + std::to_string(i + 1));
    id_to_index[id] = static_cast<std::int32_t>(lex.names_.size());
    lex.names_.push_back(fields[1]);
    lex.patterns_.emplace_back();
  }
  if (i >= lines.size())
    throw MotiveError("dictionary header block is not closed by '%': " + path);
  ++i;  // skip closing '%'

  for (; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> fields = split_tabs(lines[i]);
    if (fields.size() < 2)
      throw MotiveError("dictionary word line " + std::to_string(i + 1) +
                        " must be 'pattern<TAB>id[<TAB>id...]'");
    LexiconPattern pattern = parse_pattern(fields[0], i + 1);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      long long id =
          parse_int(fields[k], "category id at line " + std::to_string(i + 1));
      auto it = id_to_index.find(id);
      if (it == id_to_index.end())
        throw MotiveError("unknown category id " + std::to_string(id) +
                          " at line " + std::to_string(i + 1));
      auto& bucket = lex.patterns_[static_cast<std::size_t>(it->second)];
      bool dup = false;
      for (const LexiconPattern& existing : bucket)
        if (existing.stem == pattern.stem &&
            existing.is_prefix == pattern.is_prefix) {
          dup = true;
          break;
        }
      if (!dup) bucket.push_back(pattern);
    }
  }

  lex.fingerprint_ = fnv1a64(content);
  lex.compile();
  return lex;
}

Lexicon Lexicon::from_patterns(
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        categories) {
  Lexicon lex;
  std::string canonical;
  for (const auto& [name, pats] : categories) {
    lex.names_.push_back(name);
    lex.patterns_.emplace_back();
    canonical += name;
    canonical += '\n';
    for (const std::string& raw : pats) {
      LexiconPattern p = parse_pattern(raw, 0);
      canonical += raw;
      canonical += '\n';
      auto& bucket = lex.patterns_.back();
      bool dup = false;
      for (const LexiconPattern& existing : bucket)
        if (existing.stem == p.stem && existing.is_prefix == p.is_prefix) {
          dup = true;
          break;
        }
      if (!dup) bucket.push_back(std::move(p));
    }
  }
  lex.fingerprint_ = fnv1a64(canonical);
  lex.compile();
  return lex;
}

void Lexicon::match_categories(std::string_view token,
                               std::vector<char>& hit_flags) const {
  hit_flags.assign(names_.size(), 0);
  std::int32_t node = 0;
  // Prefix patterns fire at every node on the walk (including the last);
  // exact patterns only when the whole token was consumed.
  for (std::int32_t cat :
       trie_[static_cast<std::size_t>(node)].prefix_categories)
    hit_flags[static_cast<std::size_t>(cat)] = 1;
  for (unsigned char byte : token) {
    std::int32_t next = -1;
    for (const auto& [b, child] :
         trie_[static_cast<std::size_t>(node)].children)
      if (b == byte) {
        next = child;
        break;
      }
    if (next < 0) return;
    node = next;
    for (std::int32_t cat :
         trie_[static_cast<std::size_t>(node)].prefix_categories)
      hit_flags[static_cast<std::size_t>(cat)] = 1;
  }
  for (std::int32_t cat :
       trie_[static_cast<std::size_t>(node)].exact_categories)
    hit_flags[static_cast<std::size_t>(cat)] = 1;
}

std::vector<CategoryScore> Lexicon::score_document(
    const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> matched(names_.size(), 0);
  std::vector<char> flags;
  for (const std::string& tok : tokens) {
    match_categories(tok, flags);
    for (std::size_t c = 0; c < flags.size(); ++c)
      if (flags[c]) ++matched[c];
  }
  std::vector<CategoryScore> scores;
  scores.reserve(names_.size());
  for (std::size_t c = 0; c < names_.size(); ++c) {
    CategoryScore s;
    s.category = names_[c];
    s.matched = matched[c];
    s.total_tokens = tokens.size();
    s.percentage = tokens.empty() ? 0.0
                                  : 100.0 * static_cast<double>(matched[c]) /
                                        static_cast<double>(tokens.size());
    scores.push_back(std::move(s));
  }
  return scores;
}

CorpusScores score_corpus(const std::vector<std::vector<std::string>>& docs,
                          const Lexicon& lexicon) {
  CorpusScores out;
  out.categories = lexicon.categories();
  out.per_doc_pct.reserve(docs.size());
  out.mean_pct.assign(out.categories.size(), 0.0);
  for (const auto& tokens : docs) {
    std::vector<CategoryScore> scores = lexicon.score_document(tokens);
    std::vector<double> row(scores.size());
    for (std::size_t c = 0; c < scores.size(); ++c) {
      row[c] = scores[c].percentage;
      out.mean_pct[c] += scores[c].percentage;
    }
    out.per_doc_pct.push_back(std::move(row));
  }
  if (!docs.empty())
    for (double& m : out.mean_pct) m /= static_cast<double>(docs.size());
  return out;
}

const std::unordered_set<std::string>& default_negation_words() {
  static const std::unordered_set<std::string> words = {
      "nicht", "kein",  "keine",   "keinen", "keinem", "keiner",
      "keins", "nichts", "nie",    "niemals", "niemand"};
  return words;
}

std::size_t negation_count(const std::vector<std::string>& tokens,
                           const std::unordered_set<std::string>& negations) {
  std::size_t count = 0;
  for (const std::string& tok : tokens)
    if (negations.count(tok)) ++count;
  return count;
}

}  // namespace motivescan
