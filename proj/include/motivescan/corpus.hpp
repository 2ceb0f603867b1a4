#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "motivescan/textprep.hpp"

namespace motivescan {

// One post. timestamp is kept verbatim when the source record has a
// "created_at" field, empty otherwise.
struct Document {
  std::string text;
  std::string timestamp;
  std::size_t source_line = 0;  // 1-based line in the source file
};

struct Corpus {
  std::vector<Document> documents;
  std::string label;                    // free-form tag, e.g. "2019"
  std::size_t skipped_malformed = 0;    // unparseable / missing text lines
  std::size_t skipped_language = 0;     // records with "lang" != "de"
};

// Parses line-delimited JSON records. A well-formed line is a JSON object
// with a non-empty string "text" field; "created_at" and "lang" are optional.
// Records carrying a "lang" value other than "de" are dropped (files may be
// pre-filtered upstream, in which case the field is simply absent). Malformed
// lines are counted, not fatal; a file with zero usable records is an error.
Corpus parse_jsonl(const std::string& path);

// Removes documents with fewer than min_content_words content words, where a
// content word is a token that survives normalization (URL/#/@ chunks gone)
// and is not a stop word. Order preserved; idempotent.
Corpus filter_documents(const Corpus& corpus, const StopWordList& stop,
                        std::size_t min_content_words = 3);

// Fisher-Yates shuffle with the documented generator, then the first n
// documents. Identical (corpus, n, seed) inputs give identical samples.
Corpus sample(const Corpus& corpus, std::size_t n, std::uint64_t seed);

// Serializes back to the ingestion format (one JSON object per line, "text"
// plus "created_at" when present).
std::string corpus_to_jsonl(const Corpus& corpus);

}  // namespace motivescan
