#include "motivescan/embeddings.hpp"

#include <cstdio>

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"

namespace motivescan {

void EmbeddingTable::finalize_unk() {
  if (order_.empty())
    throw MotiveError("embedding table has no vectors");
  unk_ = Eigen::VectorXd::Zero(dim_);
  for (const std::string& word : order_) unk_ += vocab_.at(word);
  unk_ /= static_cast<double>(order_.size());
}

EmbeddingTable EmbeddingTable::parse_vec_file(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty())
    throw MotiveError("embedding file is empty: " + path);

  std::vector<std::string> header = split_whitespace(lines[0]);
  if (header.size() != 2)
    throw MotiveError("embedding header must be 'COUNT DIM', got: '" +
                      lines[0] + "'");
  long long declared_count = parse_int(header[0], "embedding count");
  long long dim = parse_int(header[1], "embedding dim");
  if (dim < 1) throw MotiveError("embedding dim must be >= 1");

  EmbeddingTable table;
  table.dim_ = static_cast<Eigen::Index>(dim);
  std::size_t duplicates = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> fields = split_whitespace(lines[i]);
    if (fields.size() != static_cast<std::size_t>(dim) + 1)
      throw MotiveError("embedding row at line " + std::to_string(i + 1) +
                        " has " + std::to_string(fields.size() - 1) +
                        " values, expected " + std::to_string(dim));
    const std::string& word = fields[0];
    if (table.vocab_.count(word)) {
      ++duplicates;  // first occurrence wins
      continue;
    }
    Eigen::VectorXd vec(dim);
    for (long long d = 0; d < dim; ++d)
      vec(d) = parse_double(fields[static_cast<std::size_t>(d) + 1],
                            "embedding value at line " + std::to_string(i + 1));
    table.vocab_.emplace(word, std::move(vec));
    table.order_.push_back(word);
  }
  if (table.order_.empty())
    throw MotiveError("embedding file has no vector rows: " + path);
  if (declared_count != static_cast<long long>(table.order_.size()))
    std::fprintf(stderr,
                 "warning: embedding header declares %lld words, file has %zu "
                 "unique rows%s\n",
                 declared_count, table.order_.size(),
                 duplicates ? (" (" + std::to_string(duplicates) +
                               " duplicates ignored)").c_str()
                            : "");
  table.finalize_unk();
  return table;
}

EmbeddingTable EmbeddingTable::from_vectors(
    Eigen::Index dim,
    std::vector<std::pair<std::string, Eigen::VectorXd>> entries) {
  EmbeddingTable table;
  table.dim_ = dim;
  for (auto& [word, vec] : entries) {
    if (vec.size() != dim)
      throw MotiveError("vector for '" + word + "' has wrong dimension");
    if (table.vocab_.count(word)) continue;
    table.order_.push_back(word);
    table.vocab_.emplace(word, std::move(vec));
  }
  table.finalize_unk();
  return table;
}

const Eigen::VectorXd& EmbeddingTable::lookup(const std::string& token) const {
  auto it = vocab_.find(token);
  return it == vocab_.end() ? unk_ : it->second;
}

Eigen::MatrixXd EmbeddingTable::embed_sequence(
    const std::vector<std::string>& tokens) const {
  if (tokens.empty())
    throw MotiveError("cannot embed an empty token sequence");
  Eigen::MatrixXd mat(static_cast<Eigen::Index>(tokens.size()), dim_);
  for (std::size_t t = 0; t < tokens.size(); ++t)
    mat.row(static_cast<Eigen::Index>(t)) = lookup(tokens[t]).transpose();
  return mat;
}

std::string EmbeddingTable::to_vec_text() const {
  std::string out = std::to_string(order_.size()) + " " +
                    std::to_string(dim_) + "\n";
  for (const std::string& word : order_) {
    out += word;
    const Eigen::VectorXd& vec = vocab_.at(word);
    for (Eigen::Index d = 0; d < dim_; ++d) {
      out += ' ';
      out += format_double(vec(d));
    }
    out += '\n';
  }
  return out;
}

}  // namespace motivescan
