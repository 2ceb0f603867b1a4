#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "motivescan/dataset.hpp"
#include "motivescan/embeddings.hpp"
#include "motivescan/model.hpp"

namespace motivescan {

struct TrainConfig {
  std::size_t batch_size = 32;
  int max_epochs = 3;
  double dropout = 0.3;
  double learning_rate = 1e-3;  // 0 is allowed and makes training a no-op
  std::uint64_t seed = 0;
  int patience = 2;             // dev evaluations without improvement allowed
  double dev_fraction = 0.1;    // leading share of the seeded shuffle
  int eval_every_batches = 200; // extra mid-epoch dev checks; 0 disables
  bool plain_sgd = false;       // plain gradient descent instead of Adam
  Eigen::Index hidden = 128;
  Eigen::Index attn = 0;        // 0 means = hidden
};

struct TrainLogEntry {
  int epoch = 0;                // 1-based
  std::size_t batches_seen = 0; // cumulative optimizer steps
  double train_loss = 0.0;      // mean batch loss since the previous entry
  double dev_loss = 0.0;
  double dev_accuracy = 0.0;
  bool improved = false;
};

struct TrainResult {
  ModelParams params;  // parameters from the best dev evaluation
  std::vector<TrainLogEntry> log;
  double best_dev_loss = 0.0;
  int best_epoch = 0;
  bool stopped_early = false;
};

// Trains the classifier with Adam (beta1 .9, beta2 .999, eps 1e-8) or plain
// SGD on shuffled mini-batches. The dev split is the leading floor(f*n)
// slice of a seeded shuffle; dev loss is checked at every epoch end (plus
// every eval_every_batches steps), and training stops once it fails to
// improve `patience` consecutive evaluations. Fully deterministic for a
// fixed (data, config, table): the seed drives init, the split, batch
// order, and dropout, in that order. When the split leaves no dev
// instances, the full training set doubles as the dev set.
TrainResult train(const std::vector<LabeledInstance>& data,
                  const TrainConfig& config, const EmbeddingTable& table);

// Accuracy and macro F1 of a trained model over labeled instances.
double evaluate_accuracy(const ModelParams& params,
                         const EmbeddingTable& table,
                         const std::vector<LabeledInstance>& data);
double evaluate_macro_f1(const ModelParams& params,
                         const EmbeddingTable& table,
                         const std::vector<LabeledInstance>& data);

// Training log as TSV (header + one row per evaluation).
std::string train_log_to_tsv(const std::vector<TrainLogEntry>& log);

}  // namespace motivescan
