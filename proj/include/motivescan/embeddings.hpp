#pragma once

#include <Eigen/Core>
#include <string>
#include <unordered_map>
#include <vector>

namespace motivescan {

// Pretrained word vectors in the standard text format: a "COUNT DIM" header
// line, then one "word v1 ... vDIM" line per word. Vectors are frozen inputs
// to the classifier; unknown tokens map to the component-wise mean of all
// loaded vectors (no subword reconstruction).
class EmbeddingTable {
public:
  static EmbeddingTable parse_vec_file(const std::string& path);

  // Builds a table directly (used by the synthetic data harness).
  static EmbeddingTable from_vectors(
      Eigen::Index dim,
      std::vector<std::pair<std::string, Eigen::VectorXd>> entries);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return order_.size(); }

  // Stored vector for known tokens, the mean vector otherwise. Total.
  const Eigen::VectorXd& lookup(const std::string& token) const;

  const Eigen::VectorXd& unk_vector() const { return unk_; }

  // Row t is the lookup of token t. Empty input is an error; callers route
  // empty documents to the zero-label fallback instead.
  Eigen::MatrixXd embed_sequence(const std::vector<std::string>& tokens) const;

  // Re-serialization in the input format with shortest round-trip decimals
  // and original word order; parse(to_vec_text(parse(f))) == parse(f).
  std::string to_vec_text() const;

private:
  Eigen::Index dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vocab_;
  std::vector<std::string> order_;  // insertion order, for serialization
  Eigen::VectorXd unk_;

  void finalize_unk();
};

}  // namespace motivescan
