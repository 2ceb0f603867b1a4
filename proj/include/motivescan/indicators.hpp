#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "motivescan/lexicon.hpp"
#include "motivescan/model.hpp"
#include "motivescan/stats.hpp"

namespace motivescan {

// Per-document word statistics over the full (pre-truncation) token streams.
// "Long" words have more than six letters, counted in Unicode codepoints.
struct LinguisticStats {
  std::vector<double> words_per_doc;       // token count per document
  std::vector<double> long_word_pct_per_doc;  // 100 * long / count, 0 if empty
  double avg_words = 0.0;                  // mean of words_per_doc
  double long_word_pct = 0.0;              // mean of long_word_pct_per_doc
};

LinguisticStats linguistic_stats(
    const std::vector<std::vector<std::string>>& docs);

// The social-unrest indicator vector of one corpus. There is deliberately no
// combined scalar score: the indicators are reported side by side.
struct IndicatorSet {
  // Share (%) of documents whose predicted label is (M, 4).
  double activity_inhibition_motive = 0.0;
  // Mean count of negation words per document.
  double activity_inhibition_negation = 0.0;
  // Leadership motive pattern: power share minus affiliation share, in
  // percentage points of predicted labels.
  double lmp = 0.0;
  // Mean of the "family" and "insight" dictionary percentages; absent when
  // the lexicon does not define both categories.
  std::optional<double> responsibility_proxy;

  FrequencyTable label_table;       // full 30-class distribution
  FrequencyTable motive_marginals;  // keys 0,A,F,L,M
  FrequencyTable level_marginals;   // keys 0..5
};

// All inputs must describe the same corpus, one entry per document.
IndicatorSet compute_indicators(const std::vector<Prediction>& predictions,
                                const CorpusScores& scores,
                                const std::vector<std::size_t>& negation_counts);

// Everything the two-corpus comparison needs about one corpus. The
// fingerprints identify the model checkpoint, the dictionary, and the
// preprocessing settings that produced the artifacts; comparisons refuse to
// mix corpora processed with different configurations.
struct CorpusArtifacts {
  std::string name;  // e.g. "2019"
  std::vector<Prediction> predictions;
  CorpusScores scores;
  std::vector<std::size_t> negation_counts;
  LinguisticStats linguistic;
  std::string model_fingerprint;
  std::string lexicon_fingerprint;
  std::string prep_settings;
};

struct DeltaRow {
  std::string metric;
  double value_a = 0.0;
  double value_b = 0.0;
  // Percentage delta is undefined when value_a == 0; such rows render "n/a".
  bool delta_defined = false;
  double delta = 0.0;
  TTestResult test;
};

struct DeltaReport {
  std::string name_a;
  std::string name_b;
  std::string config_fingerprint;  // hash over model + lexicon + prep settings
  std::vector<DeltaRow> rows;
};

// One row per indicator, dictionary category, motive/level marginal, and
// word statistic. Values for label-derived rows are argmax shares; the
// significance tests run on per-document probability masses (the classifier's
// confidence restricted to the row's label set). Dictionary and linguistic
// rows test the per-document percentage/count vectors directly.
DeltaReport compare_corpora(const CorpusArtifacts& a, const CorpusArtifacts& b);

enum class ReportFormat { tsv, markdown };

// Deterministic rendering; both formats carry identical numeric strings
// (shortest round-trip decimals).
std::string render_report(const DeltaReport& report, ReportFormat format);

}  // namespace motivescan
