#include "motivescan/model.hpp"

#include <cmath>

#include "motivescan/error.hpp"

namespace motivescan {

namespace {

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) {
  return 1.0 / (1.0 + (-z).exp());
}

Eigen::Index layer_input_dim(const ModelHyperparams& hp, int layer) {
  return layer == 0 ? hp.input_dim : 2 * hp.hidden;
}

std::string tensor_name(int layer, int dir, const char* part) {
  return "layer" + std::to_string(layer + 1) + "." +
         (dir == 0 ? "fwd" : "bwd") + "." + part;
}

// Inverted-dropout mask: each entry is 1/(1-p) with probability 1-p, else 0.
// One rng call per entry, column by column, so a fixed seed reproduces the
// exact mask sequence.
Eigen::MatrixXd draw_mask(Eigen::Index rows, Eigen::Index cols, double p,
                          SplitMix64& rng) {
  Eigen::MatrixXd mask(rows, cols);
  const double scale = 1.0 / (1.0 - p);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      mask(r, c) = rng.next_double() < p ? 0.0 : scale;
    }
  }
  return mask;
}

}  // namespace

ModelParams ModelParams::zeros(const ModelHyperparams& hp) {
  if (hp.input_dim < 1 || hp.hidden < 1 || hp.attn_dim() < 1) {
    throw MotiveError("model dimensions must be positive");
  }
  if (hp.dropout < 0.0 || hp.dropout >= 1.0) {
    throw MotiveError("dropout must be in [0, 1)");
  }
  ModelParams p;
  p.hp = hp;
  const Eigen::Index h = hp.hidden;
  for (int l = 0; l < kNumLayers; ++l) {
    const Eigen::Index in = layer_input_dim(hp, l);
    for (int d = 0; d < kNumDirections; ++d) {
      p.layers[l][d].w_x = Eigen::MatrixXd::Zero(4 * h, in);
      p.layers[l][d].w_h = Eigen::MatrixXd::Zero(4 * h, h);
      p.layers[l][d].b = Eigen::VectorXd::Zero(4 * h);
    }
  }
  p.attn_w = Eigen::MatrixXd::Zero(hp.attn_dim(), 2 * h);
  p.attn_v = Eigen::VectorXd::Zero(hp.attn_dim());
  p.cls_w = Eigen::MatrixXd::Zero(kNumClasses, 2 * h);
  p.cls_b = Eigen::VectorXd::Zero(kNumClasses);
  return p;
}

ModelParams ModelParams::init(const ModelHyperparams& hp, SplitMix64& rng) {
  ModelParams p = zeros(hp);
  // Uniform(-r, r) with r = 1/sqrt(fan_in), filled in storage order.
  auto fill = [&rng](auto& m, Eigen::Index fan_in) {
    const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
    double* data = m.data();
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      data[k] = rng.next_double(-r, r);
    }
  };
  const Eigen::Index h = hp.hidden;
  for (int l = 0; l < kNumLayers; ++l) {
    for (int d = 0; d < kNumDirections; ++d) {
      fill(p.layers[l][d].w_x, layer_input_dim(hp, l));
      fill(p.layers[l][d].w_h, h);
      p.layers[l][d].b.segment(h, h).setConstant(1.0);  // forget-gate bias
    }
  }
  fill(p.attn_w, 2 * h);
  fill(p.attn_v, hp.attn_dim());
  fill(p.cls_w, 2 * h);
  return p;
}

std::vector<TensorRef> ModelParams::tensors() {
  std::vector<TensorRef> refs;
  for (int l = 0; l < kNumLayers; ++l) {
    for (int d = 0; d < kNumDirections; ++d) {
      LstmDirParams& dp = layers[l][d];
      refs.push_back({tensor_name(l, d, "w_x"), dp.w_x.data(), dp.w_x.rows(),
                      dp.w_x.cols()});
      refs.push_back({tensor_name(l, d, "w_h"), dp.w_h.data(), dp.w_h.rows(),
                      dp.w_h.cols()});
      refs.push_back({tensor_name(l, d, "b"), dp.b.data(), dp.b.size(), 1});
    }
  }
  refs.push_back({"attn.w", attn_w.data(), attn_w.rows(), attn_w.cols()});
  refs.push_back({"attn.v", attn_v.data(), attn_v.size(), 1});
  refs.push_back({"cls.w", cls_w.data(), cls_w.rows(), cls_w.cols()});
  refs.push_back({"cls.b", cls_b.data(), cls_b.size(), 1});
  return refs;
}

std::vector<TensorRef> ModelParams::tensors() const {
  // Same views; callers holding a const object must not write through them.
  return const_cast<ModelParams*>(this)->tensors();
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const TensorRef& t : tensors()) n += static_cast<std::size_t>(t.size());
  return n;
}

void ModelParams::check_finite() const {
  for (const TensorRef& t : tensors()) {
    for (Eigen::Index k = 0; k < t.size(); ++k) {
      if (!std::isfinite(t.data[k])) {
        throw MotiveError("non-finite value in model tensor " + t.name);
      }
    }
  }
}

LstmStep lstm_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                   const Eigen::VectorXd& c_prev, const LstmDirParams& p) {
  const Eigen::Index h = p.w_h.cols();
  if (p.w_x.rows() != 4 * h || p.w_h.rows() != 4 * h || p.b.size() != 4 * h) {
    throw MotiveError("lstm_cell: inconsistent parameter shapes");
  }
  if (x.size() != p.w_x.cols() || h_prev.size() != h || c_prev.size() != h) {
    throw MotiveError("lstm_cell: input dimensions do not match parameters");
  }
  Eigen::VectorXd z = p.w_x * x + p.w_h * h_prev + p.b;
  Eigen::ArrayXd gi = sigmoid(z.segment(0, h).array());
  Eigen::ArrayXd gf = sigmoid(z.segment(h, h).array());
  Eigen::ArrayXd gg = z.segment(2 * h, h).array().tanh();
  Eigen::ArrayXd go = sigmoid(z.segment(3 * h, h).array());
  LstmStep out;
  out.c = (gf * c_prev.array() + gi * gg).matrix();
  out.h = (go * out.c.array().tanh()).matrix();
  return out;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  if (z.size() == 0) throw MotiveError("softmax of an empty vector");
  Eigen::ArrayXd shifted = z.array() - z.maxCoeff();
  Eigen::ArrayXd e = shifted.exp();
  return (e / e.sum()).matrix();
}

namespace {

// One direction of one layer over `input` (in_dim x T). dir 0 scans
// left-to-right, dir 1 right-to-left; states land at their absolute time
// column either way.
void run_direction(const Eigen::MatrixXd& input, const LstmDirParams& p,
                   int dir, DirCache& dc) {
  const Eigen::Index h = p.w_h.cols();
  const Eigen::Index t_len = input.cols();
  dc.i.resize(h, t_len);
  dc.f.resize(h, t_len);
  dc.g.resize(h, t_len);
  dc.o.resize(h, t_len);
  dc.c.resize(h, t_len);
  dc.tanh_c.resize(h, t_len);
  dc.h.resize(h, t_len);
  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
  for (Eigen::Index k = 0; k < t_len; ++k) {
    const Eigen::Index t = dir == 0 ? k : t_len - 1 - k;
    Eigen::VectorXd z = p.w_x * input.col(t) + p.w_h * h_prev + p.b;
    Eigen::ArrayXd gi = sigmoid(z.segment(0, h).array());
    Eigen::ArrayXd gf = sigmoid(z.segment(h, h).array());
    Eigen::ArrayXd gg = z.segment(2 * h, h).array().tanh();
    Eigen::ArrayXd go = sigmoid(z.segment(3 * h, h).array());
    Eigen::ArrayXd c = gf * c_prev.array() + gi * gg;
    Eigen::ArrayXd tc = c.tanh();
    dc.i.col(t) = gi.matrix();
    dc.f.col(t) = gf.matrix();
    dc.g.col(t) = gg.matrix();
    dc.o.col(t) = go.matrix();
    dc.c.col(t) = c.matrix();
    dc.tanh_c.col(t) = tc.matrix();
    dc.h.col(t) = (go * tc).matrix();
    h_prev = dc.h.col(t);
    c_prev = dc.c.col(t);
  }
}

// The three stacked bidirectional layers, with inverted dropout on the
// inputs of layers 2 and 3 when active. Fills fc.layers.
void run_stack(const Eigen::MatrixXd& input, const ModelParams& params,
               bool drop, SplitMix64* rng, ForwardCache& fc) {
  const Eigen::Index h = params.hp.hidden;
  const Eigen::Index t_len = input.cols();
  Eigen::MatrixXd cur = input;
  for (int l = 0; l < kNumLayers; ++l) {
    LayerCache& lc = fc.layers[l];
    if (l > 0 && drop) {
      lc.mask = draw_mask(cur.rows(), t_len, params.hp.dropout, *rng);
      cur = lc.mask.cwiseProduct(cur);
    } else {
      lc.mask.resize(0, 0);
    }
    lc.input = cur;
    for (int d = 0; d < kNumDirections; ++d) {
      run_direction(lc.input, params.layers[l][d], d, lc.dir[d]);
    }
    lc.output.resize(2 * h, t_len);
    lc.output.topRows(h) = lc.dir[0].h;
    lc.output.bottomRows(h) = lc.dir[1].h;
    cur = lc.output;
  }
}

void validate_input(const Eigen::MatrixXd& input, const ModelParams& params,
                    bool dropout_active, const SplitMix64* rng) {
  if (input.rows() != params.hp.input_dim) {
    throw MotiveError("forward: input has " + std::to_string(input.rows()) +
                      " rows, expected " +
                      std::to_string(params.hp.input_dim));
  }
  if (input.cols() < 1) throw MotiveError("forward: empty input sequence");
  if (dropout_active && params.hp.dropout > 0.0 && rng == nullptr) {
    throw MotiveError("forward: dropout requested without an rng");
  }
}

}  // namespace

Prediction forward_embedded(const Eigen::MatrixXd& input,
                            const ModelParams& params, bool dropout_active,
                            SplitMix64* rng, ForwardCache* cache) {
  validate_input(input, params, dropout_active, rng);
  const bool drop = dropout_active && params.hp.dropout > 0.0;
  const Eigen::Index h = params.hp.hidden;

  ForwardCache local;
  ForwardCache& fc = cache ? *cache : local;
  run_stack(input, params, drop, rng, fc);

  const Eigen::MatrixXd& states = fc.layers[kNumLayers - 1].output;
  fc.attn_u = (params.attn_w * states).array().tanh().matrix();
  fc.scores = fc.attn_u.transpose() * params.attn_v;
  fc.weights = softmax(fc.scores);
  fc.context = states * fc.weights;
  if (drop) {
    fc.ctx_mask = draw_mask(2 * h, 1, params.hp.dropout, *rng).col(0);
    fc.ctx_in = fc.ctx_mask.cwiseProduct(fc.context);
  } else {
    fc.ctx_mask.resize(0);
    fc.ctx_in = fc.context;
  }
  fc.logits = params.cls_w * fc.ctx_in + params.cls_b;
  fc.probs = softmax(fc.logits);

  Prediction pred;
  pred.probs = fc.probs;
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (fc.probs[k] > fc.probs[best]) best = k;
  }
  pred.argmax = index_to_label(best);
  pred.confidence = fc.probs[best];
  return pred;
}

Eigen::MatrixXd bilstm_forward(const Eigen::MatrixXd& embeddings,
                               const ModelParams& params, bool dropout_active,
                               SplitMix64* rng) {
  Eigen::MatrixXd input = embeddings.transpose();
  validate_input(input, params, dropout_active, rng);
  ForwardCache fc;
  run_stack(input, params, dropout_active && params.hp.dropout > 0.0, rng, fc);
  return fc.layers[kNumLayers - 1].output.transpose();
}

AttentionResult attention(const Eigen::MatrixXd& states,
                          const ModelParams& params) {
  if (states.cols() != 2 * params.hp.hidden) {
    throw MotiveError("attention: states must have 2*hidden columns");
  }
  if (states.rows() < 1) throw MotiveError("attention: empty state sequence");
  Eigen::MatrixXd s = states.transpose();  // 2H x T
  Eigen::MatrixXd u = (params.attn_w * s).array().tanh().matrix();
  AttentionResult out;
  out.weights = softmax(u.transpose() * params.attn_v);
  out.context = s * out.weights;
  return out;
}

Prediction forward(const TokenSequence& seq, const EmbeddingTable& table,
                   const ModelParams& params) {
  if (seq.tokens.empty()) {
    Prediction pred;
    pred.probs = Eigen::VectorXd::Zero(kNumClasses);
    pred.probs[0] = 1.0;
    pred.argmax = make_label('0', 0);
    pred.confidence = 1.0;
    return pred;
  }
  Eigen::MatrixXd embedded = table.embed_sequence(seq.tokens).transpose();
  return forward_embedded(embedded, params);
}

double batch_loss(const std::vector<Prediction>& predictions,
                  const std::vector<Label>& gold) {
  if (predictions.empty() || predictions.size() != gold.size()) {
    throw MotiveError("batch_loss: predictions and labels must align");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    total += -std::log(predictions[k].probs[label_to_index(gold[k])]);
  }
  return total / static_cast<double>(predictions.size());
}

void backward_instance(const ForwardCache& cache, const ModelParams& params,
                       const Label& gold, double dlogit_scale,
                       ModelParams& grads) {
  const Eigen::Index h = params.hp.hidden;
  const Eigen::Index t_len = cache.layers[0].input.cols();

  // Softmax + cross-entropy seed.
  Eigen::VectorXd dlogits = cache.probs;
  dlogits[label_to_index(gold)] -= 1.0;
  dlogits *= dlogit_scale;

  grads.cls_w += dlogits * cache.ctx_in.transpose();
  grads.cls_b += dlogits;
  Eigen::VectorXd dctx = params.cls_w.transpose() * dlogits;
  if (cache.ctx_mask.size() > 0) {
    dctx = cache.ctx_mask.cwiseProduct(dctx);
  }

  // Attention: context = S * weights, weights = softmax(v . tanh(W S)).
  const Eigen::MatrixXd& states = cache.layers[kNumLayers - 1].output;
  Eigen::VectorXd dalpha = states.transpose() * dctx;
  Eigen::MatrixXd ds = dctx * cache.weights.transpose();  // 2H x T
  const double mix = cache.weights.dot(dalpha);
  Eigen::VectorXd dscores =
      (cache.weights.array() * (dalpha.array() - mix)).matrix();
  grads.attn_v += cache.attn_u * dscores;
  Eigen::MatrixXd dupre = ((params.attn_v * dscores.transpose()).array() *
                           (1.0 - cache.attn_u.array().square()))
                              .matrix();
  grads.attn_w += dupre * states.transpose();
  ds += params.attn_w.transpose() * dupre;

  // BPTT through the stacked layers, top down.
  Eigen::MatrixXd dout = ds;
  for (int l = kNumLayers - 1; l >= 0; --l) {
    const LayerCache& lc = cache.layers[l];
    Eigen::MatrixXd dinput = Eigen::MatrixXd::Zero(lc.input.rows(), t_len);
    for (int d = 0; d < kNumDirections; ++d) {
      const DirCache& dc = lc.dir[d];
      const LstmDirParams& p = params.layers[l][d];
      LstmDirParams& g = grads.layers[l][d];
      const Eigen::Index row_off = d == 0 ? 0 : h;
      Eigen::VectorXd dh_rec = Eigen::VectorXd::Zero(h);
      Eigen::VectorXd dc_rec = Eigen::VectorXd::Zero(h);
      // Walk the processing order backwards; "prev" is the previously
      // processed step (t-1 for the forward scan, t+1 for the backward one).
      for (Eigen::Index k = t_len - 1; k >= 0; --k) {
        const Eigen::Index t = d == 0 ? k : t_len - 1 - k;
        const Eigen::Index t_prev = d == 0 ? t - 1 : t + 1;
        const bool has_prev = k > 0;
        Eigen::ArrayXd dh =
            dout.col(t).segment(row_off, h).array() + dh_rec.array();
        Eigen::ArrayXd gi = dc.i.col(t).array();
        Eigen::ArrayXd gf = dc.f.col(t).array();
        Eigen::ArrayXd gg = dc.g.col(t).array();
        Eigen::ArrayXd go = dc.o.col(t).array();
        Eigen::ArrayXd tc = dc.tanh_c.col(t).array();
        Eigen::ArrayXd dcell = dh * go * (1.0 - tc.square()) + dc_rec.array();
        Eigen::ArrayXd c_prev = Eigen::ArrayXd::Zero(h);
        Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
        if (has_prev) {
          c_prev = dc.c.col(t_prev).array();
          h_prev = dc.h.col(t_prev);
        }
        Eigen::VectorXd dz(4 * h);
        dz.segment(0, h) = (dcell * gg * gi * (1.0 - gi)).matrix();
        dz.segment(h, h) = (dcell * c_prev * gf * (1.0 - gf)).matrix();
        dz.segment(2 * h, h) = (dcell * gi * (1.0 - gg.square())).matrix();
        dz.segment(3 * h, h) = (dh * tc * go * (1.0 - go)).matrix();
        g.w_x += dz * lc.input.col(t).transpose();
        g.w_h += dz * h_prev.transpose();
        g.b += dz;
        dinput.col(t) += p.w_x.transpose() * dz;
        dh_rec = p.w_h.transpose() * dz;
        dc_rec = (dcell * gf).matrix();
      }
    }
    if (l > 0) {
      // Undo this layer's input dropout, then hand the gradient to the
      // previous layer's output. Layer 1's input is the frozen embedding.
      if (lc.mask.size() > 0) {
        dout = lc.mask.cwiseProduct(dinput);
      } else {
        dout = dinput;
      }
    }
  }
}

double macro_f1(const std::vector<Label>& gold,
                const std::vector<Label>& predicted) {
  if (gold.empty() || gold.size() != predicted.size()) {
    throw MotiveError("macro_f1: gold and predicted labels must align");
  }
  std::array<int, kNumClasses> tp{}, fp{}, fn{};
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const int g = label_to_index(gold[k]);
    const int p = label_to_index(predicted[k]);
    if (g == p) {
      ++tp[g];
    } else {
      ++fn[g];
      ++fp[p];
    }
  }
  double sum = 0.0;
  int included = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    if (tp[k] + fp[k] + fn[k] == 0) continue;  // absent everywhere
    ++included;
    const double denom = 2.0 * tp[k] + fp[k] + fn[k];
    if (denom > 0.0) sum += 2.0 * tp[k] / denom;
  }
  if (included == 0) throw MotiveError("macro_f1: no labels present");
  return sum / included;
}

}  // namespace motivescan
