#include "motivescan/synth.hpp"

#include <set>

#include "doctest.h"
#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"
#include "motivescan/textprep.hpp"

using namespace motivescan;

TEST_CASE("default_synth_spec: 30 classes, disjoint vocabularies") {
  SynthSpec spec = default_synth_spec(2, 15);
  REQUIRE(spec.classes.size() == 30);
  std::set<std::string> all;
  for (int k = 0; k < 30; ++k) {
    CHECK(spec.classes[k].label == index_to_label(k));
    CHECK(spec.classes[k].markers.size() == 2);
    for (const std::string& m : spec.classes[k].markers) {
      CHECK(starts_with(m, "xq"));
      CHECK(all.insert(m).second);
    }
  }
  for (const std::string& d : spec.distractors) {
    CHECK(starts_with(d, "zf"));
    CHECK(all.insert(d).second);
  }
  CHECK(spec.distractors.size() == 15);
  // Synthetic tokens survive the text pipeline untouched.
  for (const std::string& m : spec.classes[7].markers) {
    CHECK(normalize(m) == m);
    CHECK(tokenize(normalize(m)) == std::vector<std::string>{m});
  }
}

TEST_CASE("generate: structure of every instance") {
  SynthSpec spec = default_synth_spec();
  spec.seed = 99;
  spec.min_len = 4;
  spec.max_len = 9;
  SynthCorpus corpus = generate(spec, 400);
  REQUIRE(corpus.rows.size() == 400);
  CHECK(corpus.table.size() == 30);  // one vector per marker
  CHECK(corpus.table.dim() == spec.embed_dim);
  for (const RawLabeledDocument& row : corpus.rows) {
    std::vector<std::string> toks = split(row.text, ' ');
    CHECK(toks.size() >= 4);
    CHECK(toks.size() <= 9);
    // Exactly one marker, and the oracle recovers the gold label from it.
    std::size_t markers = 0;
    for (const std::string& t : toks) {
      if (starts_with(t, "xq")) ++markers;
    }
    CHECK(markers == 1);
    CHECK(oracle_classify(toks, spec) == row.label);
  }
}

TEST_CASE("generate: determinism and seed sensitivity") {
  SynthSpec spec = default_synth_spec();
  spec.seed = 1234;
  SynthCorpus a = generate(spec, 120);
  SynthCorpus b = generate(spec, 120);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].text == b.rows[k].text);
    CHECK(a.rows[k].label == b.rows[k].label);
  }
  CHECK(a.table.to_vec_text() == b.table.to_vec_text());

  spec.seed = 1235;
  SynthCorpus c = generate(spec, 120);
  bool any_diff = false;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    if (a.rows[k].text != c.rows[k].text) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("generate: marginals converge empirically") {
  SynthSpec spec;
  SynthClass a{make_label('M', 4), {"xqa"}};
  SynthClass b{make_label('A', 1), {"xqb"}};
  spec.classes = {a, b};
  spec.distractors = {"zfa", "zfb", "zfc"};
  spec.marginals = {0.5, 0.5};
  spec.seed = 7;
  SynthCorpus corpus = generate(spec, 1000);
  std::size_t first = 0;
  for (const RawLabeledDocument& row : corpus.rows) {
    if (row.label == a.label) ++first;
  }
  const double share = static_cast<double>(first) / 1000.0;
  CHECK(share > 0.45);
  CHECK(share < 0.55);

  // Skewed marginals skew the sample.
  spec.marginals = {0.9, 0.1};
  SynthCorpus skew = generate(spec, 1000);
  std::size_t first_skew = 0;
  for (const RawLabeledDocument& row : skew.rows) {
    if (row.label == a.label) ++first_skew;
  }
  CHECK(static_cast<double>(first_skew) / 1000.0 > 0.85);
}

TEST_CASE("generate: spec validation errors") {
  SynthSpec spec = default_synth_spec();
  CHECK_THROWS_AS(generate(spec, 0), MotiveError);

  SynthSpec overlap = default_synth_spec();
  overlap.classes[3].markers.push_back(overlap.classes[5].markers[0]);
  CHECK_THROWS_AS(generate(overlap, 10), MotiveError);

  SynthSpec cross = default_synth_spec();
  cross.distractors.push_back(cross.classes[0].markers[0]);
  CHECK_THROWS_WITH_AS(generate(cross, 10),
                       "token 'xqa' is both a marker and a distractor",
                       MotiveError);

  SynthSpec bad_marg = default_synth_spec();
  bad_marg.marginals.assign(30, 0.5);
  CHECK_THROWS_WITH_AS(generate(bad_marg, 10), "marginals must sum to 1",
                       MotiveError);
  bad_marg.marginals.assign(3, 1.0 / 3.0);
  CHECK_THROWS_WITH_AS(generate(bad_marg, 10),
                       "marginals must match the class count", MotiveError);

  SynthSpec no_distractors = default_synth_spec();
  no_distractors.distractors.clear();
  CHECK_THROWS_AS(generate(no_distractors, 10), MotiveError);

  SynthSpec bad_len = default_synth_spec();
  bad_len.min_len = 5;
  bad_len.max_len = 4;
  CHECK_THROWS_AS(generate(bad_len, 10), MotiveError);
}

TEST_CASE("oracle_classify: first marker wins, fallback, truncation") {
  SynthSpec spec = default_synth_spec();
  const std::string m_a = spec.classes[label_to_index(make_label('A', 2))].markers[0];
  const std::string m_m = spec.classes[label_to_index(make_label('M', 4))].markers[0];

  CHECK(oracle_classify({"zfa", m_a, "zfb", m_m}, spec) == make_label('A', 2));
  CHECK(oracle_classify({m_m, m_a}, spec) == make_label('M', 4));
  CHECK(oracle_classify({"zfa", "zfb"}, spec) == make_label('0', 0));
  CHECK(oracle_classify({}, spec) == make_label('0', 0));

  // A marker pushed past the primacy cap disappears under truncation.
  std::vector<std::string> tokens(25, "zfa");
  tokens[22] = m_m;
  TokenSequence capped = truncate_primacy(tokens, kDefaultMaxLen);
  CHECK(oracle_classify(capped.tokens, spec) == make_label('0', 0));
  CHECK(oracle_classify(tokens, spec) == make_label('M', 4));
}

TEST_CASE("generated corpus round trips through the training TSV") {
  SynthSpec spec = default_synth_spec();
  spec.seed = 31;
  SynthCorpus corpus = generate(spec, 50);
  const std::string tsv = dataset_to_tsv(corpus.rows);
  auto back = parse_train_tsv(tsv);
  REQUIRE(back.size() == 50);
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].text == corpus.rows[k].text);
    CHECK(back[k].label == corpus.rows[k].label);
  }
  // And preps into non-empty instances (markers are not stop words).
  StopWordList stop;
  PreparedDataset prepped = prep_dataset(back, stop);
  CHECK(prepped.instances.size() == 50);
  CHECK(prepped.dropped_empty == 0);
}
