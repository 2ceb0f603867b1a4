#include "motivescan/dataset.hpp"

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"

namespace motivescan {

std::vector<RawLabeledDocument> parse_train_tsv(const std::string& text) {
  std::vector<RawLabeledDocument> rows;
  std::size_t line_no = 0;
  for (const std::string& line : split(text, '\n')) {
    ++line_no;
    std::string body = line;
    if (!body.empty() && body.back() == '\r') body.pop_back();
    if (body.empty()) continue;
    std::vector<std::string> cols = split(body, '\t');
    if (cols.size() != 3) {
      throw MotiveError("training TSV line " + std::to_string(line_no) +
                        " has " + std::to_string(cols.size()) +
                        " columns, expected 3");
    }
    if (cols[0].empty()) {
      throw MotiveError("training TSV line " + std::to_string(line_no) +
                        " has empty text");
    }
    if (cols[1].size() != 1 || cols[2].size() != 1 || cols[2][0] < '0' ||
        cols[2][0] > '5') {
      throw MotiveError("training TSV line " + std::to_string(line_no) +
                        " has a malformed label '" + cols[1] + "\t" +
                        cols[2] + "'");
    }
    RawLabeledDocument row;
    row.text = cols[0];
    try {
      row.label = make_label(cols[1][0], cols[2][0] - '0');
    } catch (const MotiveError& e) {
      throw MotiveError("training TSV line " + std::to_string(line_no) +
                        ": " + e.what());
    }
    row.source_line = line_no;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw MotiveError("training TSV contains no usable rows");
  }
  return rows;
}

std::vector<RawLabeledDocument> load_train_tsv(const std::string& path) {
  return parse_train_tsv(read_file(path));
}

PreparedDataset prep_dataset(const std::vector<RawLabeledDocument>& raw,
                             const StopWordList& stop_words,
                             std::size_t max_len) {
  PreparedDataset out;
  out.instances.reserve(raw.size());
  for (const RawLabeledDocument& row : raw) {
    LabeledInstance inst;
    inst.tokens = prep_classifier_tokens(row.text, stop_words, max_len);
    inst.label = row.label;
    if (inst.tokens.tokens.empty()) {
      ++out.dropped_empty;
      continue;
    }
    out.instances.push_back(std::move(inst));
  }
  return out;
}

std::string dataset_to_tsv(const std::vector<RawLabeledDocument>& rows) {
  std::string out;
  for (const RawLabeledDocument& row : rows) {
    if (row.text.find('\t') != std::string::npos ||
        row.text.find('\n') != std::string::npos) {
      throw MotiveError("training text may not contain tabs or newlines");
    }
    (void)label_to_index(row.label);  // range-check before serializing
    out += row.text;
    out += '\t';
    out += kMotiveCodes[static_cast<std::size_t>(row.label.motive)];
    out += '\t';
    out += static_cast<char>('0' + row.label.level);
    out += '\n';
  }
  return out;
}

}  // namespace motivescan
