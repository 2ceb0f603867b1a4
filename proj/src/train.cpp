#include "motivescan/train.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"

namespace motivescan {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

struct Optimizer {
  bool plain_sgd;
  double lr;
  long long step = 0;
  ModelParams m, v;  // Adam moments (unused for SGD)

  Optimizer(const ModelHyperparams& hp, bool sgd, double lr_in)
      : plain_sgd(sgd),
        lr(lr_in),
        m(ModelParams::zeros(hp)),
        v(ModelParams::zeros(hp)) {}

  void apply(ModelParams& params, const ModelParams& grads) {
    ++step;
    auto pr = params.tensors();
    auto gr = grads.tensors();
    if (plain_sgd) {
      for (std::size_t t = 0; t < pr.size(); ++t) {
        for (Eigen::Index k = 0; k < pr[t].size(); ++k) {
          pr[t].data[k] -= lr * gr[t].data[k];
        }
      }
      return;
    }
    auto mr = m.tensors();
    auto vr = v.tensors();
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
    for (std::size_t t = 0; t < pr.size(); ++t) {
      for (Eigen::Index k = 0; k < pr[t].size(); ++k) {
        const double g = gr[t].data[k];
        double& mm = mr[t].data[k];
        double& vv = vr[t].data[k];
        mm = kBeta1 * mm + (1.0 - kBeta1) * g;
        vv = kBeta2 * vv + (1.0 - kBeta2) * g * g;
        const double mhat = mm / bc1;
        const double vhat = vv / bc2;
        pr[t].data[k] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
      }
    }
  }
};

struct DevMetrics {
  double loss;
  double accuracy;
};

DevMetrics evaluate_on(const ModelParams& params,
                       const std::vector<Eigen::MatrixXd>& embedded,
                       const std::vector<Label>& labels,
                       const std::vector<std::size_t>& idx) {
  double total = 0.0;
  std::size_t correct = 0;
  for (std::size_t k : idx) {
    Prediction pred = forward_embedded(embedded[k], params);
    total += -std::log(pred.probs[label_to_index(labels[k])]);
    if (pred.argmax == labels[k]) ++correct;
  }
  DevMetrics out;
  out.loss = total / static_cast<double>(idx.size());
  out.accuracy = static_cast<double>(correct) / static_cast<double>(idx.size());
  return out;
}

}  // namespace

TrainResult train(const std::vector<LabeledInstance>& data,
                  const TrainConfig& config, const EmbeddingTable& table) {
  if (data.empty()) throw MotiveError("training dataset is empty");
  if (config.batch_size < 1) throw MotiveError("batch size must be >= 1");
  if (config.max_epochs < 1) throw MotiveError("max epochs must be >= 1");
  if (config.learning_rate < 0.0) {
    throw MotiveError("learning rate must be >= 0");
  }
  if (config.dev_fraction < 0.0 || config.dev_fraction >= 1.0) {
    throw MotiveError("dev fraction must be in [0, 1)");
  }
  if (config.patience < 1) throw MotiveError("patience must be >= 1");

  std::set<int> distinct;
  for (const LabeledInstance& inst : data) {
    if (inst.tokens.tokens.empty()) {
      throw MotiveError("training instance has no tokens; prep the dataset "
                        "before training");
    }
    distinct.insert(label_to_index(inst.label));
  }
  if (distinct.size() < 2) {
    std::fprintf(stderr,
                 "warning: training data contains a single label; the "
                 "classifier can only learn a constant\n");
  }

  // Embeddings are frozen, so every instance embeds once up front.
  std::vector<Eigen::MatrixXd> embedded;
  std::vector<Label> labels;
  embedded.reserve(data.size());
  labels.reserve(data.size());
  for (const LabeledInstance& inst : data) {
    embedded.push_back(table.embed_sequence(inst.tokens.tokens).transpose());
    labels.push_back(inst.label);
  }

  ModelHyperparams hp;
  hp.input_dim = table.dim();
  hp.hidden = config.hidden;
  hp.attn = config.attn;
  hp.dropout = config.dropout;

  // One seeded stream drives, in order: init, the dev split, each epoch's
  // batch order, and the dropout masks inside the epoch.
  SplitMix64 rng(config.seed);
  ModelParams params = ModelParams::init(hp, rng);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const std::size_t dev_n = static_cast<std::size_t>(
      config.dev_fraction * static_cast<double>(data.size()));
  std::vector<std::size_t> dev_idx(order.begin(), order.begin() + dev_n);
  std::vector<std::size_t> train_idx(order.begin() + dev_n, order.end());
  if (train_idx.empty()) {
    throw MotiveError("dev split leaves no training instances");
  }
  if (dev_idx.empty()) dev_idx = train_idx;

  TrainResult result;
  result.params = params;
  result.best_dev_loss = std::numeric_limits<double>::infinity();
  Optimizer opt(hp, config.plain_sgd, config.learning_rate);

  std::size_t batches_seen = 0;
  int misses = 0;
  bool stop = false;
  double pending_loss_sum = 0.0;  // batch losses since the last log entry
  std::size_t pending_batches = 0;
  double last_train_loss = 0.0;

  auto run_eval = [&](int epoch) {
    DevMetrics dev = evaluate_on(params, embedded, labels, dev_idx);
    TrainLogEntry entry;
    entry.epoch = epoch;
    entry.batches_seen = batches_seen;
    if (pending_batches > 0) {
      last_train_loss = pending_loss_sum / static_cast<double>(pending_batches);
    }
    entry.train_loss = last_train_loss;
    entry.dev_loss = dev.loss;
    entry.dev_accuracy = dev.accuracy;
    entry.improved = dev.loss < result.best_dev_loss;
    pending_loss_sum = 0.0;
    pending_batches = 0;
    if (entry.improved) {
      result.best_dev_loss = dev.loss;
      result.best_epoch = epoch;
      result.params = params;
      misses = 0;
    } else if (++misses >= config.patience) {
      stop = true;
      result.stopped_early = true;
    }
    result.log.push_back(entry);
  };

  for (int epoch = 1; epoch <= config.max_epochs && !stop; ++epoch) {
    rng.shuffle(train_idx);
    for (std::size_t start = 0; start < train_idx.size() && !stop;
         start += config.batch_size) {
      const std::size_t end =
          std::min(start + config.batch_size, train_idx.size());
      const double inv_b = 1.0 / static_cast<double>(end - start);
      ModelParams grads = ModelParams::zeros(hp);
      double batch_sum = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t inst = train_idx[k];
        ForwardCache fc;
        Prediction pred = forward_embedded(embedded[inst], params,
                                           /*dropout_active=*/true, &rng, &fc);
        batch_sum += -std::log(pred.probs[label_to_index(labels[inst])]);
        backward_instance(fc, params, labels[inst], inv_b, grads);
      }
      opt.apply(params, grads);
      ++batches_seen;
      pending_loss_sum += batch_sum * inv_b;
      ++pending_batches;
      if (config.eval_every_batches > 0 &&
          batches_seen % static_cast<std::size_t>(
                             config.eval_every_batches) == 0) {
        run_eval(epoch);
      }
    }
    if (!stop) run_eval(epoch);
  }

  result.params.check_finite();
  return result;
}

double evaluate_accuracy(const ModelParams& params,
                         const EmbeddingTable& table,
                         const std::vector<LabeledInstance>& data) {
  if (data.empty()) throw MotiveError("evaluation set is empty");
  std::size_t correct = 0;
  for (const LabeledInstance& inst : data) {
    if (forward(inst.tokens, table, params).argmax == inst.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double evaluate_macro_f1(const ModelParams& params,
                         const EmbeddingTable& table,
                         const std::vector<LabeledInstance>& data) {
  if (data.empty()) throw MotiveError("evaluation set is empty");
  std::vector<Label> gold, pred;
  gold.reserve(data.size());
  pred.reserve(data.size());
  for (const LabeledInstance& inst : data) {
    gold.push_back(inst.label);
    pred.push_back(forward(inst.tokens, table, params).argmax);
  }
  return macro_f1(gold, pred);
}

std::string train_log_to_tsv(const std::vector<TrainLogEntry>& log) {
  std::string out = "epoch\tbatches\ttrain_loss\tdev_loss\tdev_accuracy\t"
                    "improved\n";
  for (const TrainLogEntry& e : log) {
    out += std::to_string(e.epoch);
    out += '\t';
    out += std::to_string(e.batches_seen);
    out += '\t';
    out += format_double(e.train_loss);
    out += '\t';
    out += format_double(e.dev_loss);
    out += '\t';
    out += format_double(e.dev_accuracy);
    out += '\t';
    out += e.improved ? "yes" : "no";
    out += '\n';
  }
  return out;
}

}  // namespace motivescan
