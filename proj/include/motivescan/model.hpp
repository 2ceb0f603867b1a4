#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "motivescan/embeddings.hpp"
#include "motivescan/label.hpp"
#include "motivescan/rng.hpp"
#include "motivescan/textprep.hpp"

namespace motivescan {

inline constexpr int kNumLayers = 3;
inline constexpr int kNumDirections = 2;  // 0 = forward, 1 = backward

struct ModelHyperparams {
  Eigen::Index input_dim = 300;
  Eigen::Index hidden = 128;  // LSTM state size per direction
  Eigen::Index attn = 0;      // attention projection size; 0 means = hidden
  double dropout = 0.3;

  Eigen::Index attn_dim() const { return attn > 0 ? attn : hidden; }
};

// One direction of one LSTM layer. Gate pre-activations are stacked row-wise
// as [input; forget; cell; output], each block `hidden` rows tall.
struct LstmDirParams {
  Eigen::MatrixXd w_x;  // 4H x layer-input-dim
  Eigen::MatrixXd w_h;  // 4H x H
  Eigen::VectorXd b;    // 4H
};

// Named view into one parameter tensor (contiguous storage, row count and
// column count as serialized). Drives the optimizer, serialization, and the
// finite-difference checks without per-tensor special cases.
struct TensorRef {
  std::string name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
};

struct ModelParams {
  ModelHyperparams hp;
  std::array<std::array<LstmDirParams, kNumDirections>, kNumLayers> layers;
  Eigen::MatrixXd attn_w;  // A x 2H
  Eigen::VectorXd attn_v;  // A
  Eigen::MatrixXd cls_w;   // 30 x 2H
  Eigen::VectorXd cls_b;   // 30

  // Correctly shaped, zero-filled parameter set (also used for gradients and
  // optimizer moments).
  static ModelParams zeros(const ModelHyperparams& hp);

  // Seeded initialization: every weight uniform in (-r, r) with
  // r = 1/sqrt(fan_in); biases zero except the forget-gate block at +1.
  static ModelParams init(const ModelHyperparams& hp, SplitMix64& rng);

  // All tensors in fixed declaration order.
  std::vector<TensorRef> tensors();
  std::vector<TensorRef> tensors() const;  // views are not written through

  std::size_t parameter_count() const;
  void check_finite() const;  // throws on NaN/Inf
};

struct Prediction {
  Eigen::VectorXd probs;  // 30, non-negative, sums to 1
  Label argmax;           // ties break toward the lowest flat index
  double confidence = 0.0;
};

// Everything the backward pass needs, cached per instance during forward.
// Time runs along columns; backward-direction states are stored at their
// absolute time index too.
struct DirCache {
  Eigen::MatrixXd i, f, g, o;   // gate activations, H x T
  Eigen::MatrixXd c, tanh_c, h; // cell/output states, H x T
};

struct LayerCache {
  Eigen::MatrixXd input;  // layer input after dropout, in_dim x T
  Eigen::MatrixXd mask;   // inverted-dropout mask on the input (empty if none)
  std::array<DirCache, kNumDirections> dir;
  Eigen::MatrixXd output; // fwd over bwd states stacked, 2H x T
};

struct ForwardCache {
  std::array<LayerCache, kNumLayers> layers;
  Eigen::MatrixXd attn_u;      // tanh(W S), A x T
  Eigen::VectorXd scores;      // T
  Eigen::VectorXd weights;     // softmax(scores), T
  Eigen::VectorXd context;     // 2H, before dropout
  Eigen::VectorXd ctx_mask;    // dropout mask on the context (empty if none)
  Eigen::VectorXd ctx_in;      // classifier input (context after dropout)
  Eigen::VectorXd logits;      // 30
  Eigen::VectorXd probs;       // 30
};

// One LSTM step (the textbook gate equations).
struct LstmStep {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
};
LstmStep lstm_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                   const Eigen::VectorXd& c_prev, const LstmDirParams& p);

// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& z);

// Full network over an embedded sequence (input_dim x T, T >= 1). With
// dropout_active an rng must be provided; masks are drawn column-by-column
// from it, so a fixed seed reproduces the run exactly. cache may be null for
// pure inference.
Prediction forward_embedded(const Eigen::MatrixXd& input,
                            const ModelParams& params,
                            bool dropout_active = false,
                            SplitMix64* rng = nullptr,
                            ForwardCache* cache = nullptr);

// Stacked Bi-LSTM states only, in row-per-timestep orientation (T x 2H).
Eigen::MatrixXd bilstm_forward(const Eigen::MatrixXd& embeddings,  // T x dim
                               const ModelParams& params,
                               bool dropout_active = false,
                               SplitMix64* rng = nullptr);

// Additive attention over precomputed states (T x 2H).
struct AttentionResult {
  Eigen::VectorXd context;  // 2H
  Eigen::VectorXd weights;  // T, non-negative, sums to 1
};
AttentionResult attention(const Eigen::MatrixXd& states,
                          const ModelParams& params);

// Token-level entry point: embeds, runs the network, handles the empty
// sequence with the deterministic zero-label fallback (probability 1 on
// label (0,0)).
Prediction forward(const TokenSequence& seq, const EmbeddingTable& table,
                   const ModelParams& params);

// Mean cross-entropy, -ln p(gold), over a batch.
double batch_loss(const std::vector<Prediction>& predictions,
                  const std::vector<Label>& gold);

// Accumulates analytic gradients for one instance into `grads` (shapes from
// ModelParams::zeros). dlogit_scale scales the cross-entropy seed; pass
// 1/batch_size so the sum over a batch matches the mean loss.
void backward_instance(const ForwardCache& cache, const ModelParams& params,
                       const Label& gold, double dlogit_scale,
                       ModelParams& grads);

// Macro F1 over the 30-label space: labels absent from both gold and
// prediction are excluded; one-sided-absent labels contribute 0.
double macro_f1(const std::vector<Label>& gold,
                const std::vector<Label>& predicted);

}  // namespace motivescan
