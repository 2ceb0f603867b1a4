#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "motivescan/dataset.hpp"
#include "motivescan/embeddings.hpp"
#include "motivescan/label.hpp"

namespace motivescan {

// Synthetic labeled corpora with a controllable class signature: every
// instance carries exactly one marker token of its class at a uniformly
// random position among distractor tokens, so a brute-force oracle can label
// it perfectly and a working classifier must reach high accuracy.

struct SynthClass {
  Label label;
  std::vector<std::string> markers;  // lowercase ASCII, at least one
};

struct SynthSpec {
  std::vector<SynthClass> classes;
  std::vector<std::string> distractors;
  std::vector<double> marginals;  // empty = uniform; else one weight/class
  std::size_t min_len = 3;
  std::size_t max_len = 12;
  std::uint64_t seed = 0;
  Eigen::Index embed_dim = 16;
};

// The standard harness: all 30 labels, invented marker tokens ("xq" plus
// letters) and distractors ("zf" plus letters), uniform marginals.
SynthSpec default_synth_spec(std::size_t markers_per_class = 1,
                             std::size_t distractor_count = 40,
                             std::uint64_t seed = 0);

struct SynthCorpus {
  std::vector<RawLabeledDocument> rows;
  // Co-generated table: one random vector per marker, so distractors fall
  // back to the shared unknown vector and only markers are informative.
  EmbeddingTable table;
};

// Deterministic given (spec, n). Validates the spec: marker vocabularies
// pairwise disjoint and disjoint from the distractors, marginals summing to
// 1 within 1e-9.
SynthCorpus generate(const SynthSpec& spec, std::size_t n);

// Label of the first marker token in the sequence; (0,0) when none appears.
Label oracle_classify(const std::vector<std::string>& tokens,
                      const SynthSpec& spec);

}  // namespace motivescan
