// motivescan CLI: the pipeline as subcommands.
//
//   prep        parse + filter + sample a JSONL post corpus
//   train       train the motive/level classifier on a labeled TSV
//   classify    label a corpus with a trained checkpoint
//   score-liwc  dictionary category percentages per document
//   compare     two-corpus delta report with significance tests
//   synth       generate a synthetic labeled corpus + embedding table
//
// Conventions: outputs go to --out (stdout when omitted) and are written
// atomically, so a failed run never leaves a partial artifact; diagnostics go
// to stderr; all randomness of one invocation flows from --seed.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "motivescan/checkpoint.hpp"
#include "motivescan/corpus.hpp"
#include "motivescan/dataset.hpp"
#include "motivescan/embeddings.hpp"
#include "motivescan/error.hpp"
#include "motivescan/indicators.hpp"
#include "motivescan/io_util.hpp"
#include "motivescan/label.hpp"
#include "motivescan/lexicon.hpp"
#include "motivescan/model.hpp"
#include "motivescan/stats.hpp"
#include "motivescan/synth.hpp"
#include "motivescan/textprep.hpp"
#include "motivescan/train.hpp"

namespace {

using namespace motivescan;

// stdout when no path was given, atomic file write otherwise.
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
    return;
  }
  write_file_atomic(out_path, content);
}

StopWordList load_stop_optional(const std::string& path) {
  if (path.empty()) return StopWordList{};
  return load_stopwords(path);
}

// Canonical description of the classifier preprocessing; embedded in
// prediction files so compare can refuse mixed-settings corpora.
std::string prep_settings_string(const std::string& stopword_path,
                                 std::size_t max_len) {
  std::string stop_fp = "none";
  if (!stopword_path.empty())
    stop_fp = fingerprint_hex(fnv1a64(read_file(stopword_path)));
  return "max_len=" + std::to_string(max_len) + " stopwords=" + stop_fp;
}

// ---------------------------------------------------------------- prep ----

struct PrepArgs {
  std::string in_path;
  std::string out_path;
  std::string stopword_path;
  std::string label;
  std::size_t min_content_words = 3;
  std::size_t sample_n = 0;
  bool do_sample = false;
  std::uint64_t seed = 0;
};

void run_prep(const PrepArgs& args) {
  Corpus corpus = parse_jsonl(args.in_path);
  corpus.label = args.label;
  std::fprintf(stderr, "parsed %zu documents (%zu malformed, %zu wrong language skipped)\n",
               corpus.documents.size(), corpus.skipped_malformed,
               corpus.skipped_language);
  StopWordList stop = load_stop_optional(args.stopword_path);
  corpus = filter_documents(corpus, stop, args.min_content_words);
  std::fprintf(stderr, "%zu documents after the content-word filter\n",
               corpus.documents.size());
  if (args.do_sample) {
    corpus = sample(corpus, args.sample_n, args.seed);
    std::fprintf(stderr, "sampled %zu documents with seed %llu\n",
                 corpus.documents.size(),
                 static_cast<unsigned long long>(args.seed));
  }
  emit(args.out_path, corpus_to_jsonl(corpus));
}

// --------------------------------------------------------------- train ----

struct TrainArgs {
  std::string data_path;
  std::string embeddings_path;
  std::string model_path;
  std::string log_path;
  std::string stopword_path;
  std::size_t max_len = kDefaultMaxLen;
  TrainConfig config;
};

void run_train(const TrainArgs& args) {
  EmbeddingTable table = EmbeddingTable::parse_vec_file(args.embeddings_path);
  std::vector<RawLabeledDocument> rows = load_train_tsv(args.data_path);
  StopWordList stop = load_stop_optional(args.stopword_path);
  PreparedDataset data = prep_dataset(rows, stop, args.max_len);
  if (data.dropped_empty > 0)
    std::fprintf(stderr, "dropped %zu rows with no tokens after preprocessing\n",
                 data.dropped_empty);
  std::fprintf(stderr, "training on %zu instances\n", data.instances.size());

  TrainResult result = train(data.instances, args.config, table);
  save_model(result.params, args.model_path);
  if (!args.log_path.empty())
    write_file_atomic(args.log_path, train_log_to_tsv(result.log));
  std::fprintf(stderr, "best dev loss %s at epoch %d%s\n",
               format_double(result.best_dev_loss).c_str(), result.best_epoch,
               result.stopped_early ? " (stopped early)" : "");
  std::fprintf(stderr, "checkpoint %s written to %s\n",
               model_fingerprint(result.params).c_str(),
               args.model_path.c_str());
}

// ------------------------------------------------------------ classify ----

struct ClassifyArgs {
  std::string model_path;
  std::string data_path;
  std::string embeddings_path;
  std::string stopword_path;
  std::string out_path;
  std::size_t max_len = kDefaultMaxLen;
  bool no_probs = false;
};

void run_classify(const ClassifyArgs& args) {
  ModelParams params = load_model(args.model_path);
  EmbeddingTable table = EmbeddingTable::parse_vec_file(args.embeddings_path);
  if (table.dim() != params.hp.input_dim)
    throw MotiveError("embedding dimension " + std::to_string(table.dim()) +
                      " does not match the model input dimension " +
                      std::to_string(params.hp.input_dim));
  Corpus corpus = parse_jsonl(args.data_path);
  StopWordList stop = load_stop_optional(args.stopword_path);

  std::string out;
  out += "# model: " + model_fingerprint(params) + "\n";
  out += "# prep: " + prep_settings_string(args.stopword_path, args.max_len) + "\n";
  out += "index\tlabel\tconfidence";
  if (!args.no_probs)
    for (int i = 0; i < kNumClasses; ++i)
      out += "\tp_" + label_to_string(index_to_label(i));
  out += '\n';

  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    TokenSequence tokens =
        prep_classifier_tokens(corpus.documents[d].text, stop, args.max_len);
    Prediction pred = forward(tokens, table, params);
    out += std::to_string(d);
    out += '\t';
    out += label_to_string(pred.argmax);
    out += '\t';
    out += format_double(pred.confidence);
    if (!args.no_probs)
      for (int i = 0; i < kNumClasses; ++i)
        out += '\t' + format_double(pred.probs[i]);
    out += '\n';
  }
  emit(args.out_path, out);
  std::fprintf(stderr, "classified %zu documents\n", corpus.documents.size());
}

// ---------------------------------------------------------- score-liwc ----

struct ScoreArgs {
  std::string data_path;
  std::string lexicon_path;
  std::string out_path;
};

void run_score(const ScoreArgs& args) {
  Lexicon lexicon = Lexicon::parse_dic(args.lexicon_path);
  Corpus corpus = parse_jsonl(args.data_path);

  std::string out;
  out += "# lexicon: " + fingerprint_hex(lexicon.fingerprint()) + "\n";
  out += "index\ttokens\tlong_words_pct\tnegations";
  for (const std::string& cat : lexicon.categories()) out += '\t' + cat;
  out += '\n';
  if (lexicon.categories().empty()) {  // nothing to score: header only
    emit(args.out_path, out);
    return;
  }

  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.documents.size());
  for (const Document& doc : corpus.documents)
    docs.push_back(prep_full_tokens(doc.text));

  CorpusScores scores = score_corpus(docs, lexicon);
  LinguisticStats ling = linguistic_stats(docs);

  double negation_sum = 0.0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::size_t negations = negation_count(docs[d]);
    negation_sum += static_cast<double>(negations);
    out += std::to_string(d);
    out += '\t' + format_double(ling.words_per_doc[d]);
    out += '\t' + format_double(ling.long_word_pct_per_doc[d]);
    out += '\t' + std::to_string(negations);
    for (double pct : scores.per_doc_pct[d]) out += '\t' + format_double(pct);
    out += '\n';
  }
  out += "mean";
  out += '\t' + format_double(ling.avg_words);
  out += '\t' + format_double(ling.long_word_pct);
  out += '\t' +
         format_double(negation_sum / static_cast<double>(docs.size()));
  for (double pct : scores.mean_pct) out += '\t' + format_double(pct);
  out += '\n';
  emit(args.out_path, out);
  std::fprintf(stderr, "scored %zu documents against %zu categories\n",
               docs.size(), lexicon.categories().size());
}

// -------------------------------------------------------------- compare ----

struct CompareArgs {
  std::string preds_a, scores_a;
  std::string preds_b, scores_b;
  std::string label_a = "a", label_b = "b";
  std::string format = "tsv";
  std::string out_path;
};

struct PredictionFile {
  std::string model_fingerprint;
  std::string prep_settings;
  std::vector<Prediction> predictions;
};

PredictionFile parse_prediction_file(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 3 || !starts_with(lines[0], "# model: ") ||
      !starts_with(lines[1], "# prep: "))
    throw MotiveError("prediction file " + path +
                      " lacks the '# model:' / '# prep:' header");
  PredictionFile file;
  file.model_fingerprint = lines[0].substr(9);
  file.prep_settings = lines[1].substr(8);
  std::vector<std::string> header = split(lines[2], '\t');
  if (header.size() != 3 + static_cast<std::size_t>(kNumClasses))
    throw MotiveError(
        "prediction file " + path +
        " lacks the probability columns (written with --no-probs?)");

  for (std::size_t i = 3; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cells = split(lines[i], '\t');
    if (cells.size() != header.size())
      throw MotiveError("prediction file " + path + " row " +
                        std::to_string(i + 1) + ": wrong column count");
    const std::string what = "prediction row " + std::to_string(i + 1);
    if (parse_int(cells[0], what) !=
        static_cast<long long>(file.predictions.size()))
      throw MotiveError("prediction file " + path + " row " +
                        std::to_string(i + 1) + ": unexpected document index");
    Prediction pred;
    pred.probs = Eigen::VectorXd(kNumClasses);
    for (int c = 0; c < kNumClasses; ++c)
      pred.probs[c] = parse_double(cells[static_cast<std::size_t>(c) + 3], what);
    int argmax = 0;
    for (int c = 1; c < kNumClasses; ++c)
      if (pred.probs[c] > pred.probs[argmax]) argmax = c;
    pred.argmax = parse_label(cells[1]);
    pred.confidence = parse_double(cells[2], what);
    if (label_to_index(pred.argmax) != argmax ||
        pred.confidence != pred.probs[argmax])
      throw MotiveError("prediction file " + path + " row " +
                        std::to_string(i + 1) +
                        ": label disagrees with the probability columns");
    file.predictions.push_back(std::move(pred));
  }
  return file;
}

struct ScoreFile {
  std::string lexicon_fingerprint;
  CorpusScores scores;
  std::vector<std::size_t> negation_counts;
  LinguisticStats linguistic;
};

ScoreFile parse_score_file(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 2 || !starts_with(lines[0], "# lexicon: "))
    throw MotiveError("score file " + path + " lacks the '# lexicon:' header");
  ScoreFile file;
  file.lexicon_fingerprint = lines[0].substr(11);
  std::vector<std::string> header = split(lines[1], '\t');
  if (header.size() < 4 || header[0] != "index" || header[1] != "tokens" ||
      header[2] != "long_words_pct" || header[3] != "negations")
    throw MotiveError("score file " + path + ": unexpected header");
  file.scores.categories.assign(header.begin() + 4, header.end());

  bool saw_mean = false;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cells = split(lines[i], '\t');
    if (cells.size() != header.size())
      throw MotiveError("score file " + path + " row " + std::to_string(i + 1) +
                        ": wrong column count");
    const std::string what = "score row " + std::to_string(i + 1);
    if (cells[0] == "mean") {
      saw_mean = true;
      file.linguistic.avg_words = parse_double(cells[1], what);
      file.linguistic.long_word_pct = parse_double(cells[2], what);
      for (std::size_t c = 4; c < cells.size(); ++c)
        file.scores.mean_pct.push_back(parse_double(cells[c], what));
      continue;
    }
    if (saw_mean)
      throw MotiveError("score file " + path +
                        ": document rows after the mean row");
    if (parse_int(cells[0], what) !=
        static_cast<long long>(file.negation_counts.size()))
      throw MotiveError("score file " + path + " row " + std::to_string(i + 1) +
                        ": unexpected document index");
    file.linguistic.words_per_doc.push_back(parse_double(cells[1], what));
    file.linguistic.long_word_pct_per_doc.push_back(parse_double(cells[2], what));
    long long negations = parse_int(cells[3], what);
    if (negations < 0)
      throw MotiveError("score file " + path + " row " + std::to_string(i + 1) +
                        ": negative negation count");
    file.negation_counts.push_back(static_cast<std::size_t>(negations));
    std::vector<double> pct;
    for (std::size_t c = 4; c < cells.size(); ++c)
      pct.push_back(parse_double(cells[c], what));
    file.scores.per_doc_pct.push_back(std::move(pct));
  }
  if (!saw_mean)
    throw MotiveError("score file " + path + " lacks the mean row");
  return file;
}

CorpusArtifacts load_artifacts(const std::string& name,
                               const std::string& preds_path,
                               const std::string& scores_path) {
  PredictionFile preds = parse_prediction_file(preds_path);
  ScoreFile scores = parse_score_file(scores_path);
  if (preds.predictions.size() != scores.negation_counts.size())
    throw MotiveError("corpus '" + name + "': " + preds_path + " has " +
                      std::to_string(preds.predictions.size()) + " documents but " +
                      scores_path + " has " +
                      std::to_string(scores.negation_counts.size()));
  CorpusArtifacts art;
  art.name = name;
  art.predictions = std::move(preds.predictions);
  art.scores = std::move(scores.scores);
  art.negation_counts = std::move(scores.negation_counts);
  art.linguistic = std::move(scores.linguistic);
  art.model_fingerprint = preds.model_fingerprint;
  art.lexicon_fingerprint = scores.lexicon_fingerprint;
  art.prep_settings = preds.prep_settings;
  return art;
}

void run_compare(const CompareArgs& args) {
  CorpusArtifacts a = load_artifacts(args.label_a, args.preds_a, args.scores_a);
  CorpusArtifacts b = load_artifacts(args.label_b, args.preds_b, args.scores_b);
  DeltaReport report = compare_corpora(a, b);
  ReportFormat format =
      args.format == "markdown" ? ReportFormat::markdown : ReportFormat::tsv;
  emit(args.out_path, render_report(report, format));
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  std::string out_dir;
  std::size_t instances = 0;
  std::size_t markers_per_class = 1;
  std::size_t distractors = 40;
  long long embed_dim = 16;
  std::size_t min_len = 3;
  std::size_t max_len = 12;
  std::uint64_t seed = 0;
};

void run_synth(const SynthArgs& args) {
  SynthSpec spec =
      default_synth_spec(args.markers_per_class, args.distractors, args.seed);
  spec.embed_dim = static_cast<Eigen::Index>(args.embed_dim);
  spec.min_len = args.min_len;
  spec.max_len = args.max_len;
  SynthCorpus corpus = generate(spec, args.instances);

  std::filesystem::create_directories(args.out_dir);
  write_file_atomic(args.out_dir + "/train.tsv", dataset_to_tsv(corpus.rows));
  write_file_atomic(args.out_dir + "/embeddings.vec", corpus.table.to_vec_text());

  Corpus jsonl;
  for (const RawLabeledDocument& row : corpus.rows)
    jsonl.documents.push_back(Document{row.text, "", row.source_line});
  write_file_atomic(args.out_dir + "/corpus.jsonl", corpus_to_jsonl(jsonl));
  std::fprintf(stderr,
               "wrote %zu instances to %s/train.tsv (+ embeddings.vec, corpus.jsonl)\n",
               corpus.rows.size(), args.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"implicit-motive classifier and corpus comparison pipeline"};
  app.require_subcommand(1);

  PrepArgs prep_args;
  CLI::App* prep = app.add_subcommand(
      "prep", "parse, filter, and sample a JSONL post corpus");
  prep->add_option("--in", prep_args.in_path, "input JSONL file")->required();
  prep->add_option("--out", prep_args.out_path, "output path (default stdout)");
  prep->add_option("--stopwords", prep_args.stopword_path, "stop-word file");
  prep->add_option("--label", prep_args.label, "corpus tag, e.g. 2019");
  prep->add_option("--min-content-words", prep_args.min_content_words,
                   "drop documents with fewer content words")->capture_default_str();
  CLI::Option* sample_opt =
      prep->add_option("--sample", prep_args.sample_n, "sample size");
  prep->add_option("--seed", prep_args.seed, "sampling seed")->capture_default_str();
  prep->callback([&] {
    prep_args.do_sample = sample_opt->count() > 0;
    run_prep(prep_args);
  });

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand(
      "train", "train the motive/level classifier on a labeled TSV");
  train->add_option("--data", train_args.data_path, "training TSV")->required();
  train->add_option("--embeddings", train_args.embeddings_path,
                    "word vectors (.vec text format)")->required();
  train->add_option("--model", train_args.model_path, "checkpoint output path")
      ->required();
  train->add_option("--log", train_args.log_path, "training log TSV output");
  train->add_option("--stopwords", train_args.stopword_path, "stop-word file");
  train->add_option("--max-len", train_args.max_len, "token cap per instance")->capture_default_str();
  train->add_option("--batch", train_args.config.batch_size, "batch size")->capture_default_str();
  train->add_option("--epochs", train_args.config.max_epochs, "epoch cap")->capture_default_str();
  train->add_option("--lr", train_args.config.learning_rate, "learning rate")->capture_default_str();
  train->add_option("--dropout", train_args.config.dropout,
                    "dropout probability")->capture_default_str();
  train->add_option("--hidden", train_args.config.hidden,
                    "LSTM hidden units per direction")->capture_default_str();
  train->add_option("--attn", train_args.config.attn,
                    "attention size (0 = hidden)")->capture_default_str();
  train->add_option("--patience", train_args.config.patience,
                    "dev evaluations without improvement allowed")->capture_default_str();
  train->add_option("--dev-fraction", train_args.config.dev_fraction,
                    "share of data held out for early stopping")->capture_default_str();
  train->add_option("--eval-every", train_args.config.eval_every_batches,
                    "mid-epoch dev evaluation interval (0 = off)")->capture_default_str();
  train->add_flag("--sgd", train_args.config.plain_sgd,
                  "plain SGD instead of Adam");
  train->add_option("--seed", train_args.config.seed, "training seed")->capture_default_str();
  train->callback([&] { run_train(train_args); });

  ClassifyArgs classify_args;
  CLI::App* classify = app.add_subcommand(
      "classify", "label a JSONL corpus with a trained checkpoint");
  classify->add_option("--model", classify_args.model_path, "checkpoint path")
      ->required();
  classify->add_option("--data", classify_args.data_path, "corpus JSONL")
      ->required();
  classify->add_option("--embeddings", classify_args.embeddings_path,
                       "word vectors (.vec text format)")->required();
  classify->add_option("--stopwords", classify_args.stopword_path,
                       "stop-word file");
  classify->add_option("--max-len", classify_args.max_len,
                       "token cap per document")->capture_default_str();
  classify->add_option("--out", classify_args.out_path,
                       "output path (default stdout)");
  classify->add_flag("--no-probs", classify_args.no_probs,
                     "omit the per-class probability columns");
  classify->callback([&] { run_classify(classify_args); });

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand(
      "score-liwc", "dictionary category percentages per document");
  score->add_option("--data", score_args.data_path, "corpus JSONL")->required();
  score->add_option("--lexicon", score_args.lexicon_path,
                    "dictionary in %-delimited format")->required();
  score->add_option("--out", score_args.out_path, "output path (default stdout)");
  score->callback([&] { run_score(score_args); });

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "two-corpus indicator report with significance tests");
  compare->add_option("--preds-a", compare_args.preds_a,
                      "classify output of corpus A")->required();
  compare->add_option("--scores-a", compare_args.scores_a,
                      "score-liwc output of corpus A")->required();
  compare->add_option("--preds-b", compare_args.preds_b,
                      "classify output of corpus B")->required();
  compare->add_option("--scores-b", compare_args.scores_b,
                      "score-liwc output of corpus B")->required();
  compare->add_option("--label-a", compare_args.label_a, "corpus A name")->capture_default_str();
  compare->add_option("--label-b", compare_args.label_b, "corpus B name")->capture_default_str();
  compare->add_option("--format", compare_args.format, "tsv or markdown")->capture_default_str()
      ->check(CLI::IsMember({"tsv", "markdown"}));
  compare->add_option("--out", compare_args.out_path,
                      "output path (default stdout)");
  compare->callback([&] { run_compare(compare_args); });

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a synthetic labeled corpus and embedding table");
  synth->add_option("--out-dir", synth_args.out_dir, "output directory")
      ->required();
  synth->add_option("--instances", synth_args.instances, "number of instances")
      ->required();
  synth->add_option("--markers-per-class", synth_args.markers_per_class,
                    "marker tokens per class")->capture_default_str();
  synth->add_option("--distractors", synth_args.distractors,
                    "distractor vocabulary size")->capture_default_str();
  synth->add_option("--embed-dim", synth_args.embed_dim,
                    "embedding dimension")->capture_default_str();
  synth->add_option("--min-len", synth_args.min_len, "minimum tokens")->capture_default_str();
  synth->add_option("--max-len", synth_args.max_len, "maximum tokens")->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "generation seed")->capture_default_str();
  synth->callback([&] { run_synth(synth_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const MotiveError& e) {
    std::fprintf(stderr, "motivescan: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "motivescan: unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
