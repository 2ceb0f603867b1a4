#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "motivescan/label.hpp"
#include "motivescan/textprep.hpp"

namespace motivescan {

// One row of labeled training text: text <TAB> motive <TAB> level.
struct RawLabeledDocument {
  std::string text;
  Label label;
  std::size_t source_line = 0;  // 1-based line in the TSV
};

// Strict TSV parse: every non-empty line must have exactly three columns, a
// non-empty text, a motive in {0,A,F,L,M} and a level digit 0-5.
std::vector<RawLabeledDocument> parse_train_tsv(const std::string& text);
std::vector<RawLabeledDocument> load_train_tsv(const std::string& path);

// A classifier-ready instance: prepped token sequence plus gold label.
struct LabeledInstance {
  TokenSequence tokens;
  Label label;
};

struct PreparedDataset {
  std::vector<LabeledInstance> instances;
  std::size_t dropped_empty = 0;  // rows whose text prepped to zero tokens
};

// Runs the classifier token pipeline (normalize, tokenize, stop-word
// removal, primacy truncation) over every row. Rows left with no tokens are
// dropped and counted rather than kept as unlearnable instances.
PreparedDataset prep_dataset(const std::vector<RawLabeledDocument>& raw,
                             const StopWordList& stop_words,
                             std::size_t max_len = kDefaultMaxLen);

// Serialization back to the training TSV format (used by the synthetic
// corpus generator).
std::string dataset_to_tsv(const std::vector<RawLabeledDocument>& rows);

}  // namespace motivescan
