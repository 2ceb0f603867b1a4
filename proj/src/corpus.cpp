#include "motivescan/corpus.hpp"

#include <json.hpp>

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"
#include "motivescan/rng.hpp"

namespace motivescan {

Corpus parse_jsonl(const std::string& path) {
  Corpus corpus;
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) {
      ++corpus.skipped_malformed;
      continue;
    }
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() ||
        !record.contains("text") || !record["text"].is_string() ||
        record["text"].get<std::string>().empty()) {
      ++corpus.skipped_malformed;
      continue;
    }
    if (record.contains("lang") && record["lang"].is_string() &&
        record["lang"].get<std::string>() != "de") {
      ++corpus.skipped_language;
      continue;
    }
    Document doc;
    doc.text = record["text"].get<std::string>();
    if (record.contains("created_at") && record["created_at"].is_string())
      doc.timestamp = record["created_at"].get<std::string>();
    doc.source_line = i + 1;
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty())
    throw MotiveError("no usable records in " + path + " (" +
                      std::to_string(corpus.skipped_malformed) +
                      " malformed lines)");
  return corpus;
}

Corpus filter_documents(const Corpus& corpus, const StopWordList& stop,
                        std::size_t min_content_words) {
  Corpus out;
  out.label = corpus.label;
  out.skipped_malformed = corpus.skipped_malformed;
  out.skipped_language = corpus.skipped_language;
  for (const Document& doc : corpus.documents) {
    std::size_t content = 0;
    for (const std::string& tok : prep_full_tokens(doc.text))
      if (!stop.contains(tok)) ++content;
    if (content >= min_content_words) out.documents.push_back(doc);
  }
  return out;
}

Corpus sample(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n > corpus.documents.size())
    throw MotiveError("sample size " + std::to_string(n) +
                      " exceeds corpus size " +
                      std::to_string(corpus.documents.size()));
  Corpus out;
  out.label = corpus.label;
  out.skipped_malformed = corpus.skipped_malformed;
  out.skipped_language = corpus.skipped_language;
  out.documents = corpus.documents;
  SplitMix64 rng(seed);
  rng.shuffle(out.documents);
  out.documents.resize(n);
  return out;
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const Document& doc : corpus.documents) {
    nlohmann::json record;
    record["text"] = doc.text;
    if (!doc.timestamp.empty()) record["created_at"] = doc.timestamp;
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace motivescan
