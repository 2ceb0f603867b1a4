#include "motivescan/synth.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

#include "motivescan/error.hpp"
#include "motivescan/rng.hpp"

namespace motivescan {

namespace {

// xq/zf prefixes keep the invented vocabularies trivially disjoint; the
// base-26 suffix keeps tokens lowercase ASCII so text prep passes them
// through untouched.
std::string base26(std::size_t k) {
  std::string out;
  do {
    out.insert(out.begin(), static_cast<char>('a' + k % 26));
    k /= 26;
  } while (k > 0);
  return out;
}

std::unordered_map<std::string, Label> marker_map(const SynthSpec& spec) {
  std::unordered_map<std::string, Label> map;
  for (const SynthClass& cls : spec.classes) {
    for (const std::string& m : cls.markers) {
      map.emplace(m, cls.label);
    }
  }
  return map;
}

void validate_spec(const SynthSpec& spec) {
  if (spec.classes.empty()) {
    throw MotiveError("synthetic spec needs at least one class");
  }
  if (spec.min_len < 1 || spec.max_len < spec.min_len) {
    throw MotiveError("synthetic length range is invalid");
  }
  if (spec.embed_dim < 1) {
    throw MotiveError("synthetic embedding dim must be >= 1");
  }
  std::set<std::string> seen;
  std::size_t marker_count = 0;
  for (const SynthClass& cls : spec.classes) {
    if (cls.markers.empty()) {
      throw MotiveError("synthetic class " + label_to_string(cls.label) +
                        " has no marker tokens");
    }
    for (const std::string& m : cls.markers) {
      if (m.empty()) throw MotiveError("empty synthetic marker token");
      if (!seen.insert(m).second) {
        throw MotiveError("marker token '" + m +
                          "' appears in more than one class");
      }
      ++marker_count;
    }
  }
  (void)marker_count;
  for (const std::string& d : spec.distractors) {
    if (d.empty()) throw MotiveError("empty synthetic distractor token");
    if (seen.count(d)) {
      throw MotiveError("token '" + d +
                        "' is both a marker and a distractor");
    }
  }
  if (spec.max_len > 1 && spec.distractors.empty()) {
    throw MotiveError("instances longer than one token need distractors");
  }
  if (!spec.marginals.empty()) {
    if (spec.marginals.size() != spec.classes.size()) {
      throw MotiveError("marginals must match the class count");
    }
    double sum = 0.0;
    for (double w : spec.marginals) {
      if (w < 0.0) throw MotiveError("marginals must be non-negative");
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw MotiveError("marginals must sum to 1");
    }
  }
}

}  // namespace

SynthSpec default_synth_spec(std::size_t markers_per_class,
                             std::size_t distractor_count,
                             std::uint64_t seed) {
  if (markers_per_class < 1 || distractor_count < 1) {
    throw MotiveError("default synthetic spec needs at least one marker and "
                      "one distractor");
  }
  SynthSpec spec;
  spec.seed = seed;
  std::size_t next = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    SynthClass cls;
    cls.label = index_to_label(k);
    for (std::size_t m = 0; m < markers_per_class; ++m) {
      cls.markers.push_back("xq" + base26(next++));
    }
    spec.classes.push_back(std::move(cls));
  }
  for (std::size_t d = 0; d < distractor_count; ++d) {
    spec.distractors.push_back("zf" + base26(d));
  }
  return spec;
}

SynthCorpus generate(const SynthSpec& spec, std::size_t n) {
  validate_spec(spec);
  if (n < 1) throw MotiveError("synthetic corpus size must be >= 1");

  SplitMix64 rng(spec.seed);

  // Embedding table first: one vector per marker, in class order.
  std::vector<std::pair<std::string, Eigen::VectorXd>> entries;
  for (const SynthClass& cls : spec.classes) {
    for (const std::string& m : cls.markers) {
      Eigen::VectorXd vec(spec.embed_dim);
      for (Eigen::Index d = 0; d < spec.embed_dim; ++d) {
        vec[d] = rng.next_double(-1.0, 1.0);
      }
      entries.emplace_back(m, std::move(vec));
    }
  }

  SynthCorpus out;
  out.table = EmbeddingTable::from_vectors(spec.embed_dim, entries);

  // Cumulative marginals for class draws (uniform when unspecified).
  std::vector<double> cumulative(spec.classes.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < spec.classes.size(); ++k) {
    acc += spec.marginals.empty()
               ? 1.0 / static_cast<double>(spec.classes.size())
               : spec.marginals[k];
    cumulative[k] = acc;
  }
  cumulative.back() = 1.0;

  out.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_double();
    std::size_t cls_idx = 0;
    while (cls_idx + 1 < cumulative.size() && u >= cumulative[cls_idx]) {
      ++cls_idx;
    }
    const SynthClass& cls = spec.classes[cls_idx];
    const std::size_t len =
        spec.min_len +
        static_cast<std::size_t>(rng.next_below(spec.max_len - spec.min_len + 1));
    const std::size_t marker_pos =
        static_cast<std::size_t>(rng.next_below(len));
    const std::string& marker =
        cls.markers[static_cast<std::size_t>(rng.next_below(cls.markers.size()))];
    std::string text;
    for (std::size_t t = 0; t < len; ++t) {
      if (t > 0) text += ' ';
      if (t == marker_pos) {
        text += marker;
      } else {
        text += spec.distractors[static_cast<std::size_t>(
            rng.next_below(spec.distractors.size()))];
      }
    }
    RawLabeledDocument row;
    row.text = std::move(text);
    row.label = cls.label;
    row.source_line = i + 1;
    out.rows.push_back(std::move(row));
  }
  return out;
}

Label oracle_classify(const std::vector<std::string>& tokens,
                      const SynthSpec& spec) {
  const std::unordered_map<std::string, Label> map = marker_map(spec);
  for (const std::string& tok : tokens) {
    auto it = map.find(tok);
    if (it != map.end()) return it->second;
  }
  return make_label('0', 0);
}

}  // namespace motivescan
