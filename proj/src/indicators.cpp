#include "motivescan/indicators.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"
#include "motivescan/label.hpp"
#include "motivescan/textprep.hpp"

namespace motivescan {

namespace {

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Probability mass a prediction assigns to one motive (summed over levels).
double motive_mass(const Prediction& pred, int motive) {
  double mass = 0.0;
  for (int level = 0; level < kNumLevels; ++level)
    mass += pred.probs[motive * kNumLevels + level];
  return mass;
}

// Probability mass a prediction assigns to one level (summed over motives).
double level_mass(const Prediction& pred, int level) {
  double mass = 0.0;
  for (int motive = 0; motive < kNumMotives; ++motive)
    mass += pred.probs[motive * kNumLevels + level];
  return mass;
}

// Welch test over two per-document vectors. Two identical constant vectors
// are not an error here: the report renders them as t=0, p=1, flagged.
TTestResult row_test(const std::vector<double>& a,
                     const std::vector<double>& b) {
  SummaryStats sa = summarize(a);
  SummaryStats sb = summarize(b);
  if (sa.sd == 0.0 && sb.sd == 0.0 && sa.mean == sb.mean) {
    TTestResult r;
    r.t = 0.0;
    r.df = 0.0;
    r.p_two_sided = 1.0;
    r.stars = "";
    r.degenerate = true;
    return r;
  }
  return welch_t_test(sa, sb);
}

DeltaRow make_row(std::string metric, double value_a, double value_b,
                  const std::vector<double>& docs_a,
                  const std::vector<double>& docs_b) {
  DeltaRow row;
  row.metric = std::move(metric);
  row.value_a = value_a;
  row.value_b = value_b;
  row.delta_defined = value_a != 0.0;
  if (row.delta_defined) row.delta = pct_delta(value_a, value_b);
  row.test = row_test(docs_a, docs_b);
  return row;
}

void validate_artifacts(const CorpusArtifacts& art) {
  const std::size_t n = art.predictions.size();
  if (n == 0)
    throw MotiveError("corpus '" + art.name + "' has no documents");
  if (n < 2)
    throw MotiveError("corpus '" + art.name +
                      "' needs at least 2 documents for significance tests");
  if (art.scores.per_doc_pct.size() != n ||
      art.negation_counts.size() != n ||
      art.linguistic.words_per_doc.size() != n ||
      art.linguistic.long_word_pct_per_doc.size() != n) {
    throw MotiveError("corpus '" + art.name +
                      "': per-document artifact lengths disagree");
  }
}

std::optional<std::size_t> find_category(const CorpusScores& scores,
                                         const std::string& name) {
  for (std::size_t i = 0; i < scores.categories.size(); ++i)
    if (scores.categories[i] == name) return i;
  return std::nullopt;
}

std::string escape_markdown_stars(const std::string& stars) {
  std::string out;
  for (char c : stars) {
    out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

LinguisticStats linguistic_stats(
    const std::vector<std::vector<std::string>>& docs) {
  if (docs.empty()) throw MotiveError("cannot compute word statistics of an empty corpus");
  LinguisticStats stats;
  stats.words_per_doc.reserve(docs.size());
  stats.long_word_pct_per_doc.reserve(docs.size());
  for (const std::vector<std::string>& tokens : docs) {
    std::size_t long_words = 0;
    for (const std::string& token : tokens)
      if (utf8::decode(token).size() > 6) ++long_words;
    stats.words_per_doc.push_back(static_cast<double>(tokens.size()));
    stats.long_word_pct_per_doc.push_back(
        tokens.empty() ? 0.0
                       : 100.0 * static_cast<double>(long_words) /
                             static_cast<double>(tokens.size()));
  }
  stats.avg_words = mean_of(stats.words_per_doc);
  stats.long_word_pct = mean_of(stats.long_word_pct_per_doc);
  return stats;
}

IndicatorSet compute_indicators(
    const std::vector<Prediction>& predictions, const CorpusScores& scores,
    const std::vector<std::size_t>& negation_counts) {
  if (predictions.empty())
    throw MotiveError("cannot compute indicators of an empty corpus");
  if (scores.per_doc_pct.size() != predictions.size() ||
      negation_counts.size() != predictions.size()) {
    throw MotiveError("indicator inputs describe different document counts");
  }

  std::vector<Label> labels;
  labels.reserve(predictions.size());
  for (const Prediction& pred : predictions) labels.push_back(pred.argmax);

  IndicatorSet set;
  set.label_table = frequency_table(labels, GroupBy::full_label);
  set.motive_marginals = frequency_table(labels, GroupBy::motive);
  set.level_marginals = frequency_table(labels, GroupBy::level);

  set.activity_inhibition_motive =
      set.label_table
          .percentages[static_cast<std::size_t>(label_to_index(make_label('M', 4)))];

  double negation_sum = 0.0;
  for (std::size_t c : negation_counts) negation_sum += static_cast<double>(c);
  set.activity_inhibition_negation =
      negation_sum / static_cast<double>(negation_counts.size());

  set.lmp = set.motive_marginals
                .percentages[static_cast<std::size_t>(motive_index('M'))] -
            set.motive_marginals
                .percentages[static_cast<std::size_t>(motive_index('A'))];

  std::optional<std::size_t> family = find_category(scores, "family");
  std::optional<std::size_t> insight = find_category(scores, "insight");
  if (family && insight) {
    set.responsibility_proxy =
        0.5 * (scores.mean_pct[*family] + scores.mean_pct[*insight]);
  }
  return set;
}

DeltaReport compare_corpora(const CorpusArtifacts& a,
                            const CorpusArtifacts& b) {
  validate_artifacts(a);
  validate_artifacts(b);
  if (a.model_fingerprint != b.model_fingerprint)
    throw MotiveError("corpora were classified with different models: " +
                      a.model_fingerprint + " vs " + b.model_fingerprint);
  if (a.lexicon_fingerprint != b.lexicon_fingerprint)
    throw MotiveError("corpora were scored with different lexicons: " +
                      a.lexicon_fingerprint + " vs " + b.lexicon_fingerprint);
  if (a.prep_settings != b.prep_settings)
    throw MotiveError(
        "corpora were preprocessed with different settings: '" +
        a.prep_settings + "' vs '" + b.prep_settings + "'");
  if (a.scores.categories != b.scores.categories)
    throw MotiveError("corpora carry different dictionary categories");

  const IndicatorSet ind_a =
      compute_indicators(a.predictions, a.scores, a.negation_counts);
  const IndicatorSet ind_b =
      compute_indicators(b.predictions, b.scores, b.negation_counts);

  const std::size_t na = a.predictions.size();
  const std::size_t nb = b.predictions.size();

  // Per-document probability masses for one flat label index.
  auto full_mass = [](const std::vector<Prediction>& preds, int index) {
    std::vector<double> out;
    out.reserve(preds.size());
    for (const Prediction& p : preds) out.push_back(p.probs[index]);
    return out;
  };
  auto motive_masses = [](const std::vector<Prediction>& preds, int motive) {
    std::vector<double> out;
    out.reserve(preds.size());
    for (const Prediction& p : preds) out.push_back(motive_mass(p, motive));
    return out;
  };
  auto level_masses = [](const std::vector<Prediction>& preds, int level) {
    std::vector<double> out;
    out.reserve(preds.size());
    for (const Prediction& p : preds) out.push_back(level_mass(p, level));
    return out;
  };

  DeltaReport report;
  report.name_a = a.name;
  report.name_b = b.name;
  report.config_fingerprint = fingerprint_hex(
      fnv1a64(a.model_fingerprint + "\n" + a.lexicon_fingerprint + "\n" +
              a.prep_settings));

  // Indicator block.
  const int power4 = label_to_index(make_label('M', 4));
  report.rows.push_back(make_row(
      "activity_inhibition_power4", ind_a.activity_inhibition_motive,
      ind_b.activity_inhibition_motive, full_mass(a.predictions, power4),
      full_mass(b.predictions, power4)));

  std::vector<double> neg_a(na), neg_b(nb);
  for (std::size_t i = 0; i < na; ++i)
    neg_a[i] = static_cast<double>(a.negation_counts[i]);
  for (std::size_t i = 0; i < nb; ++i)
    neg_b[i] = static_cast<double>(b.negation_counts[i]);
  report.rows.push_back(make_row("activity_inhibition_negations",
                                 ind_a.activity_inhibition_negation,
                                 ind_b.activity_inhibition_negation, neg_a,
                                 neg_b));

  {
    const int m = motive_index('M');
    const int aff = motive_index('A');
    std::vector<double> lmp_a(na), lmp_b(nb);
    for (std::size_t i = 0; i < na; ++i)
      lmp_a[i] = motive_mass(a.predictions[i], m) -
                 motive_mass(a.predictions[i], aff);
    for (std::size_t i = 0; i < nb; ++i)
      lmp_b[i] = motive_mass(b.predictions[i], m) -
                 motive_mass(b.predictions[i], aff);
    report.rows.push_back(make_row("lmp", ind_a.lmp, ind_b.lmp, lmp_a, lmp_b));
  }

  if (ind_a.responsibility_proxy && ind_b.responsibility_proxy) {
    std::size_t family = *find_category(a.scores, "family");
    std::size_t insight = *find_category(a.scores, "insight");
    std::vector<double> resp_a(na), resp_b(nb);
    for (std::size_t i = 0; i < na; ++i)
      resp_a[i] = 0.5 * (a.scores.per_doc_pct[i][family] +
                         a.scores.per_doc_pct[i][insight]);
    for (std::size_t i = 0; i < nb; ++i)
      resp_b[i] = 0.5 * (b.scores.per_doc_pct[i][family] +
                         b.scores.per_doc_pct[i][insight]);
    report.rows.push_back(make_row("responsibility_proxy",
                                   *ind_a.responsibility_proxy,
                                   *ind_b.responsibility_proxy, resp_a,
                                   resp_b));
  }

  for (std::size_t c = 0; c < a.scores.categories.size(); ++c) {
    std::vector<double> pct_a(na), pct_b(nb);
    for (std::size_t i = 0; i < na; ++i) pct_a[i] = a.scores.per_doc_pct[i][c];
    for (std::size_t i = 0; i < nb; ++i) pct_b[i] = b.scores.per_doc_pct[i][c];
    report.rows.push_back(make_row("liwc_" + a.scores.categories[c],
                                   a.scores.mean_pct[c], b.scores.mean_pct[c],
                                   pct_a, pct_b));
  }

  // Motive marginals (0, A, F, L, M), then level marginals (0..5).
  for (int m = 0; m < kNumMotives; ++m) {
    report.rows.push_back(make_row(
        std::string("motive_") + kMotiveCodes[static_cast<std::size_t>(m)],
        ind_a.motive_marginals.percentages[static_cast<std::size_t>(m)],
        ind_b.motive_marginals.percentages[static_cast<std::size_t>(m)],
        motive_masses(a.predictions, m), motive_masses(b.predictions, m)));
  }
  for (int l = 0; l < kNumLevels; ++l) {
    report.rows.push_back(make_row(
        "level_" + std::to_string(l),
        ind_a.level_marginals.percentages[static_cast<std::size_t>(l)],
        ind_b.level_marginals.percentages[static_cast<std::size_t>(l)],
        level_masses(a.predictions, l), level_masses(b.predictions, l)));
  }

  report.rows.push_back(make_row("avg_words", a.linguistic.avg_words,
                                 b.linguistic.avg_words,
                                 a.linguistic.words_per_doc,
                                 b.linguistic.words_per_doc));
  report.rows.push_back(make_row("long_words_pct", a.linguistic.long_word_pct,
                                 b.linguistic.long_word_pct,
                                 a.linguistic.long_word_pct_per_doc,
                                 b.linguistic.long_word_pct_per_doc));
  return report;
}

std::string render_report(const DeltaReport& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::tsv) {
    out += "# corpus_a: " + report.name_a + "\n";
    out += "# corpus_b: " + report.name_b + "\n";
    out += "# config: " + report.config_fingerprint + "\n";
    out += "metric\tvalue_a\tvalue_b\tpct_delta\tt\tdf\tp\tstars\n";
    for (const DeltaRow& row : report.rows) {
      out += row.metric;
      out += '\t';
      out += format_double(row.value_a);
      out += '\t';
      out += format_double(row.value_b);
      out += '\t';
      out += row.delta_defined ? format_double(row.delta) : std::string("n/a");
      out += '\t';
      out += format_double(row.test.t);
      out += '\t';
      out += format_double(row.test.df);
      out += '\t';
      out += format_double(row.test.p_two_sided);
      out += '\t';
      out += row.test.stars;
      out += '\n';
    }
    return out;
  }

  // Markdown: same numeric strings, table layout, escaped stars.
  out += "# Corpus comparison: " + report.name_a + " vs " + report.name_b +
         "\n\n";
  out += "Config fingerprint: `" + report.config_fingerprint + "`\n\n";
  out += "| metric | value_a | value_b | pct_delta | t | df | p | stars |\n";
  out += "| --- | --- | --- | --- | --- | --- | --- | --- |\n";
  for (const DeltaRow& row : report.rows) {
    out += "| " + row.metric;
    out += " | " + format_double(row.value_a);
    out += " | " + format_double(row.value_b);
    out += " | " +
           (row.delta_defined ? format_double(row.delta) : std::string("n/a"));
    out += " | " + format_double(row.test.t);
    out += " | " + format_double(row.test.df);
    out += " | " + format_double(row.test.p_two_sided);
    out += " | " + escape_markdown_stars(row.test.stars) + " |\n";
  }
  return out;
}

}  // namespace motivescan
