#include "motivescan/model.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "motivescan/error.hpp"
#include "oracles.hpp"

using namespace motivescan;

namespace {

// Scalar re-implementation of one LSTM step: plain loops and std::exp, no
// shared code with the production path.
void scalar_lstm_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                      const Eigen::VectorXd& c_prev, const LstmDirParams& p,
                      Eigen::VectorXd& h_out, Eigen::VectorXd& c_out) {
  const int hn = static_cast<int>(p.w_h.cols());
  const int in = static_cast<int>(p.w_x.cols());
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  h_out.resize(hn);
  c_out.resize(hn);
  for (int r = 0; r < hn; ++r) {
    double zi = p.b[r], zf = p.b[hn + r], zg = p.b[2 * hn + r],
           zo = p.b[3 * hn + r];
    for (int k = 0; k < in; ++k) {
      zi += p.w_x(r, k) * x[k];
      zf += p.w_x(hn + r, k) * x[k];
      zg += p.w_x(2 * hn + r, k) * x[k];
      zo += p.w_x(3 * hn + r, k) * x[k];
    }
    for (int k = 0; k < hn; ++k) {
      zi += p.w_h(r, k) * h_prev[k];
      zf += p.w_h(hn + r, k) * h_prev[k];
      zg += p.w_h(2 * hn + r, k) * h_prev[k];
      zo += p.w_h(3 * hn + r, k) * h_prev[k];
    }
    const double gi = sig(zi), gf = sig(zf), gg = std::tanh(zg),
                 go = sig(zo);
    c_out[r] = gf * c_prev[r] + gi * gg;
    h_out[r] = go * std::tanh(c_out[r]);
  }
}

ModelHyperparams tiny_hp(Eigen::Index dim, Eigen::Index hidden,
                         double dropout = 0.0) {
  ModelHyperparams hp;
  hp.input_dim = dim;
  hp.hidden = hidden;
  hp.attn = hidden;
  hp.dropout = dropout;
  return hp;
}

Eigen::MatrixXd random_input(Eigen::Index dim, Eigen::Index t_len,
                             SplitMix64& rng) {
  Eigen::MatrixXd m(dim, t_len);
  for (Eigen::Index c = 0; c < t_len; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      m(r, c) = rng.next_double(-1.5, 1.5);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("lstm_cell matches a scalar-loop oracle") {
  SplitMix64 rng(11);
  ModelParams p = ModelParams::init(tiny_hp(5, 4), rng);
  const LstmDirParams& cell = p.layers[0][0];
  for (int round = 0; round < 25; ++round) {
    Eigen::VectorXd x(5), h_prev(4), c_prev(4);
    for (int k = 0; k < 5; ++k) x[k] = rng.next_double(-2.0, 2.0);
    for (int k = 0; k < 4; ++k) h_prev[k] = rng.next_double(-1.0, 1.0);
    for (int k = 0; k < 4; ++k) c_prev[k] = rng.next_double(-2.0, 2.0);
    LstmStep got = lstm_cell(x, h_prev, c_prev, cell);
    Eigen::VectorXd h_ref, c_ref;
    scalar_lstm_step(x, h_prev, c_prev, cell, h_ref, c_ref);
    for (int k = 0; k < 4; ++k) {
      CHECK(got.h[k] == doctest::Approx(h_ref[k]).epsilon(1e-12));
      CHECK(got.c[k] == doctest::Approx(c_ref[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("lstm_cell rejects mismatched shapes") {
  SplitMix64 rng(3);
  ModelParams p = ModelParams::init(tiny_hp(5, 4), rng);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(6);  // wrong input size
  Eigen::VectorXd h = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(lstm_cell(x, h, c, p.layers[0][0]), MotiveError);
  Eigen::VectorXd x_ok = Eigen::VectorXd::Zero(5);
  Eigen::VectorXd h_bad = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(lstm_cell(x_ok, h_bad, c, p.layers[0][0]), MotiveError);
}

TEST_CASE("seeded init: ranges, forget-gate bias, determinism") {
  SplitMix64 rng_a(99);
  ModelParams a = ModelParams::init(tiny_hp(6, 4), rng_a);
  SplitMix64 rng_b(99);
  ModelParams b = ModelParams::init(tiny_hp(6, 4), rng_b);

  // Same seed, same parameters.
  auto ta = a.tensors();
  auto tb = b.tensors();
  REQUIRE(ta.size() == tb.size());
  for (std::size_t k = 0; k < ta.size(); ++k) {
    CHECK(ta[k].name == tb[k].name);
    REQUIRE(ta[k].size() == tb[k].size());
    for (Eigen::Index j = 0; j < ta[k].size(); ++j) {
      CHECK(ta[k].data[j] == tb[k].data[j]);
    }
  }

  // Weight magnitudes bounded by 1/sqrt(fan_in).
  const double r_wx = 1.0 / std::sqrt(6.0);
  CHECK(a.layers[0][0].w_x.cwiseAbs().maxCoeff() < r_wx);
  CHECK(a.layers[0][0].w_x.cwiseAbs().maxCoeff() > 0.0);
  const double r_wh = 1.0 / std::sqrt(4.0);
  CHECK(a.layers[2][1].w_h.cwiseAbs().maxCoeff() < r_wh);

  // Biases: zero except a +1 forget block.
  for (int l = 0; l < kNumLayers; ++l) {
    for (int d = 0; d < kNumDirections; ++d) {
      const Eigen::VectorXd& bias = a.layers[l][d].b;
      CHECK(bias.segment(0, 4).isZero());
      CHECK((bias.segment(4, 4).array() == 1.0).all());
      CHECK(bias.segment(8, 8).isZero());
    }
  }
  CHECK(a.cls_b.isZero());

  // A different seed changes the weights.
  SplitMix64 rng_c(100);
  ModelParams c = ModelParams::init(tiny_hp(6, 4), rng_c);
  CHECK(a.layers[0][0].w_x != c.layers[0][0].w_x);
}

TEST_CASE("tensor catalog covers every parameter exactly once") {
  SplitMix64 rng(5);
  ModelParams p = ModelParams::init(tiny_hp(6, 4), rng);
  auto refs = p.tensors();
  // 3 layers x 2 directions x 3 tensors + attention (2) + classifier (2).
  CHECK(refs.size() == 22);
  std::size_t total = 0;
  for (const auto& t : refs) total += static_cast<std::size_t>(t.size());
  CHECK(total == p.parameter_count());
  // Expected count: L1 2*(16*6+16*4+16), L2/L3 2*(16*8+16*4+16) each,
  // attn 4*8+4, cls 30*8+30.
  const std::size_t expect = 2 * (96 + 64 + 16) + 2 * 2 * (128 + 64 + 16) +
                             (32 + 4) + (240 + 30);
  CHECK(total == expect);
  CHECK_NOTHROW(p.check_finite());
  p.attn_v[0] = std::nan("");
  CHECK_THROWS_WITH_AS(p.check_finite(),
                       "non-finite value in model tensor attn.v", MotiveError);
}

TEST_CASE("softmax: normalization, stability, order") {
  Eigen::VectorXd z(4);
  z << 1.0, 2.0, 3.0, 4.0;
  Eigen::VectorXd s = softmax(z);
  CHECK(s.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[3] > s[2]);
  CHECK(s[0] > 0.0);
  // Huge logits must not overflow.
  Eigen::VectorXd big(3);
  big << 1e4, 1e4 - 5.0, -1e4;
  Eigen::VectorXd sb = softmax(big);
  CHECK(std::isfinite(sb.sum()));
  CHECK(sb.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sb[0] > sb[1]);
  CHECK(sb[2] == 0.0);
  // Shift invariance.
  Eigen::VectorXd shifted = softmax((z.array() + 123.0).matrix());
  for (int k = 0; k < 4; ++k) {
    CHECK(shifted[k] == doctest::Approx(s[k]).epsilon(1e-12));
  }
}

TEST_CASE("bilstm_forward: shape and reversal structure") {
  SplitMix64 rng(17);
  ModelHyperparams hp = tiny_hp(5, 3);
  ModelParams p = ModelParams::init(hp, rng);
  Eigen::MatrixXd x = random_input(5, 7, rng).transpose();  // T x dim
  Eigen::MatrixXd states = bilstm_forward(x, p);
  CHECK(states.rows() == 7);
  CHECK(states.cols() == 6);

  // Reversing the input while swapping the two directions' parameters must
  // produce the same states, time-reversed and with halves exchanged. Upper
  // layers consume the [fwd; bwd] concatenation, so their input weights'
  // column halves swap along with the directions.
  ModelParams swapped = p;
  for (int l = 0; l < kNumLayers; ++l) {
    std::swap(swapped.layers[l][0], swapped.layers[l][1]);
    if (l > 0) {
      for (int d = 0; d < kNumDirections; ++d) {
        Eigen::MatrixXd& wx = swapped.layers[l][d].w_x;
        Eigen::MatrixXd flipped(wx.rows(), wx.cols());
        flipped.leftCols(3) = wx.rightCols(3);
        flipped.rightCols(3) = wx.leftCols(3);
        wx = flipped;
      }
    }
  }
  Eigen::MatrixXd x_rev = x.colwise().reverse();
  Eigen::MatrixXd states_rev = bilstm_forward(x_rev, swapped);
  for (int t = 0; t < 7; ++t) {
    for (int k = 0; k < 3; ++k) {
      CHECK(states_rev(6 - t, k) ==
            doctest::Approx(states(t, 3 + k)).epsilon(1e-12));
      CHECK(states_rev(6 - t, 3 + k) ==
            doctest::Approx(states(t, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("palindromic input with fully tied directions mirrors its states") {
  SplitMix64 rng(19);
  ModelHyperparams hp = tiny_hp(4, 3);
  ModelParams p = ModelParams::init(hp, rng);
  // Tie the directions; upper layers additionally need input weights that
  // treat the two state halves identically.
  for (int l = 0; l < kNumLayers; ++l) {
    p.layers[l][1] = p.layers[l][0];
    if (l > 0) {
      for (int d = 0; d < kNumDirections; ++d) {
        p.layers[l][d].w_x.rightCols(3) = p.layers[l][d].w_x.leftCols(3);
      }
    }
  }
  Eigen::MatrixXd x(3, 4);  // T x dim, palindromic in time
  x.row(0) << 0.3, -0.8, 0.1, 0.5;
  x.row(1) << -0.2, 0.4, 0.9, -0.6;
  x.row(2) = x.row(0);
  Eigen::MatrixXd states = bilstm_forward(x, p);
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 3; ++k) {
      CHECK(states(t, k) ==
            doctest::Approx(states(2 - t, 3 + k)).epsilon(1e-12));
    }
  }
  // T=1: both directions see the single input from a zero state.
  Eigen::MatrixXd one = x.topRows(1);
  Eigen::MatrixXd s1 = bilstm_forward(one, p);
  REQUIRE(s1.rows() == 1);
  for (int k = 0; k < 3; ++k) {
    CHECK(s1(0, k) == doctest::Approx(s1(0, 3 + k)).epsilon(1e-12));
  }
}

TEST_CASE("attention: distribution properties and uniform case") {
  SplitMix64 rng(23);
  ModelHyperparams hp = tiny_hp(4, 3);
  ModelParams p = ModelParams::init(hp, rng);
  Eigen::MatrixXd states = random_input(6, 5, rng).transpose();  // 5 x 6
  AttentionResult att = attention(states, p);
  CHECK(att.weights.size() == 5);
  CHECK(att.context.size() == 6);
  CHECK(att.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(att.weights.minCoeff() > 0.0);

  // Zero scoring vector -> all scores equal -> uniform weights and the
  // context is the plain mean of the states.
  p.attn_v.setZero();
  AttentionResult uni = attention(states, p);
  for (int t = 0; t < 5; ++t) {
    CHECK(uni.weights[t] == doctest::Approx(0.2).epsilon(1e-12));
  }
  Eigen::VectorXd mean = states.colwise().mean();
  for (int k = 0; k < 6; ++k) {
    CHECK(uni.context[k] == doctest::Approx(mean[k]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(attention(Eigen::MatrixXd::Zero(4, 5), p), MotiveError);

  // Singleton sequence: the softmax of one score is exactly 1.
  AttentionResult single = attention(states.topRows(1), p);
  CHECK(single.weights.size() == 1);
  CHECK(single.weights[0] == 1.0);
  for (int k = 0; k < 6; ++k) {
    CHECK(single.context[k] == states(0, k));
  }

  // Identical states: symmetry forces uniform weights.
  Eigen::MatrixXd same = states.row(2).replicate(4, 1);
  AttentionResult sym = attention(same, p);
  for (int t = 0; t < 4; ++t) {
    CHECK(sym.weights[t] == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("forward_embedded: probabilities, argmax, determinism") {
  SplitMix64 rng(31);
  ModelHyperparams hp = tiny_hp(6, 4);
  ModelParams p = ModelParams::init(hp, rng);
  Eigen::MatrixXd x = random_input(6, 9, rng);
  Prediction a = forward_embedded(x, p);
  CHECK(a.probs.size() == kNumClasses);
  CHECK(a.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.probs.minCoeff() >= 0.0);
  CHECK(a.confidence == a.probs.maxCoeff());
  CHECK(a.probs[label_to_index(a.argmax)] == a.confidence);

  // Inference ignores any rng when dropout is off.
  SplitMix64 spare(1);
  Prediction b = forward_embedded(x, p, false, &spare);
  CHECK(a.probs == b.probs);

  // Wrong embedding width is rejected.
  CHECK_THROWS_AS(forward_embedded(random_input(5, 3, rng), p), MotiveError);
  CHECK_THROWS_AS(forward_embedded(Eigen::MatrixXd(6, 0), p), MotiveError);
  // Dropout without an rng is rejected.
  ModelParams pd = p;
  pd.hp.dropout = 0.5;
  CHECK_THROWS_AS(forward_embedded(x, pd, true, nullptr), MotiveError);
}

TEST_CASE("dropout: seeded masks reproduce, disabled path is mask-free") {
  SplitMix64 rng(41);
  ModelHyperparams hp = tiny_hp(5, 3, 0.4);
  ModelParams p = ModelParams::init(hp, rng);
  Eigen::MatrixXd x = random_input(5, 6, rng);

  SplitMix64 d1(77), d2(77), d3(78);
  ForwardCache c1, c2, c3;
  forward_embedded(x, p, true, &d1, &c1);
  forward_embedded(x, p, true, &d2, &c2);
  forward_embedded(x, p, true, &d3, &c3);
  CHECK(c1.probs == c2.probs);
  CHECK(c1.layers[1].mask == c2.layers[1].mask);
  CHECK(c1.layers[1].mask != c3.layers[1].mask);

  // Layer 1 never gets an input mask; layers 2 and 3 and the context do.
  CHECK(c1.layers[0].mask.size() == 0);
  CHECK(c1.layers[1].mask.size() == 3 * 2 * 6);
  CHECK(c1.layers[2].mask.size() == 3 * 2 * 6);
  CHECK(c1.ctx_mask.size() == 6);

  // Mask entries are exactly 0 or the inverted-dropout scale.
  const double scale = 1.0 / (1.0 - 0.4);
  const Eigen::MatrixXd& m = c1.layers[1].mask;
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const double v = m.data()[k];
    CHECK((v == 0.0 || v == doctest::Approx(scale).epsilon(1e-12)));
  }

  // With dropout disabled the same parameters run mask-free.
  ForwardCache c0;
  forward_embedded(x, p, false, nullptr, &c0);
  CHECK(c0.layers[1].mask.size() == 0);
  CHECK(c0.ctx_mask.size() == 0);
}

TEST_CASE("token-level forward: empty sequence falls back to the zero label") {
  Eigen::VectorXd va(3), vb(3);
  va << 0.1, 0.2, 0.3;
  vb << -0.4, 0.0, 0.2;
  EmbeddingTable table =
      EmbeddingTable::from_vectors(3, {{"alpha", va}, {"beta", vb}});
  SplitMix64 rng(9);
  ModelParams p = ModelParams::init(tiny_hp(3, 2), rng);

  TokenSequence empty;
  empty.original_length = 0;
  Prediction fallback = forward(empty, table, p);
  CHECK(fallback.argmax == make_label('0', 0));
  CHECK(fallback.confidence == 1.0);
  CHECK(fallback.probs[0] == 1.0);
  CHECK(fallback.probs.sum() == 1.0);

  TokenSequence seq;
  seq.tokens = {"alpha", "unknown-token", "beta"};
  seq.original_length = 3;
  Prediction real = forward(seq, table, p);
  CHECK(real.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(real.confidence < 1.0);
}

TEST_CASE("batch_loss: reference arithmetic") {
  Prediction a, b;
  a.probs = Eigen::VectorXd::Constant(kNumClasses, 1.0 / kNumClasses);
  b.probs = Eigen::VectorXd::Zero(kNumClasses);
  b.probs[7] = 0.5;
  b.probs[8] = 0.5;
  std::vector<Prediction> preds = {a, b};
  std::vector<Label> gold = {index_to_label(3), index_to_label(7)};
  const double expect = (std::log(30.0) + std::log(2.0)) / 2.0;
  CHECK(batch_loss(preds, gold) == doctest::Approx(expect).epsilon(1e-12));
  // Uniform alone is exactly ln 30; a perfect one-hot is exactly 0.
  CHECK(batch_loss({a}, {gold[0]}) ==
        doctest::Approx(std::log(30.0)).epsilon(1e-12));
  Prediction hot;
  hot.probs = Eigen::VectorXd::Zero(kNumClasses);
  hot.probs[3] = 1.0;
  CHECK(batch_loss({hot}, {index_to_label(3)}) == 0.0);
  CHECK_THROWS_AS(batch_loss({}, {}), MotiveError);
  CHECK_THROWS_AS(batch_loss(preds, {gold[0]}), MotiveError);
}

namespace {

// Loss of one instance as a pure function of the parameters, re-seeding the
// mask stream on every call so dropout becomes a fixed, differentiable
// transform.
double loss_at(const Eigen::MatrixXd& x, ModelParams& p, const Label& gold,
               bool drop, std::uint64_t mask_seed) {
  SplitMix64 rng(mask_seed);
  ForwardCache fc;
  Prediction pred =
      forward_embedded(x, p, drop, drop ? &rng : nullptr, &fc);
  return -std::log(pred.probs[label_to_index(gold)]);
}

// Central finite difference against the analytic gradient on a sample of
// coordinates spread over every tensor.
void check_gradients(ModelParams& p, const Eigen::MatrixXd& x,
                     const Label& gold, bool drop, std::uint64_t mask_seed,
                     int per_tensor, double tol) {
  ModelParams grads = ModelParams::zeros(p.hp);
  {
    SplitMix64 rng(mask_seed);
    ForwardCache fc;
    forward_embedded(x, p, drop, drop ? &rng : nullptr, &fc);
    backward_instance(fc, p, gold, 1.0, grads);
  }
  const double eps = 1e-5;
  auto pref = p.tensors();
  auto gref = grads.tensors();
  REQUIRE(pref.size() == gref.size());
  SplitMix64 pick(4242);
  for (std::size_t tk = 0; tk < pref.size(); ++tk) {
    for (int s = 0; s < per_tensor; ++s) {
      const Eigen::Index idx = static_cast<Eigen::Index>(
          pick.next_below(static_cast<std::uint64_t>(pref[tk].size())));
      double* slot = pref[tk].data + idx;
      const double saved = *slot;
      *slot = saved + eps;
      const double up = loss_at(x, p, gold, drop, mask_seed);
      *slot = saved - eps;
      const double dn = loss_at(x, p, gold, drop, mask_seed);
      *slot = saved;
      const double fd = (up - dn) / (2.0 * eps);
      const double an = gref[tk].data[idx];
      // The difference quotient carries ~1e-10 of round-off noise (loss is
      // O(1), eps is 1e-5), so near-zero gradients are held to absolute
      // agreement instead of relative.
      const double rel =
          std::fabs(fd - an) / std::max(1e-6, std::fabs(fd) + std::fabs(an));
      INFO("tensor ", pref[tk].name, " index ", idx, " fd ", fd, " an ", an);
      CHECK(rel < tol);
    }
  }
}

}  // namespace

TEST_CASE("analytic gradients match finite differences (no dropout)") {
  SplitMix64 rng(55);
  ModelHyperparams hp = tiny_hp(5, 3);
  ModelParams p = ModelParams::init(hp, rng);
  Eigen::MatrixXd x = random_input(5, 4, rng);
  check_gradients(p, x, index_to_label(13), false, 0, 4, 1e-4);
}

TEST_CASE("analytic gradients match finite differences (fixed dropout)") {
  SplitMix64 rng(56);
  ModelHyperparams hp = tiny_hp(5, 3, 0.5);
  ModelParams p = ModelParams::init(hp, rng);
  Eigen::MatrixXd x = random_input(5, 4, rng);
  check_gradients(p, x, index_to_label(2), true, 901, 3, 1e-4);
}

TEST_CASE("gradients on a length-1 sequence are also correct") {
  SplitMix64 rng(57);
  ModelParams p = ModelParams::init(tiny_hp(4, 2), rng);
  Eigen::MatrixXd x = random_input(4, 1, rng);
  check_gradients(p, x, index_to_label(29), false, 0, 3, 1e-4);
}

TEST_CASE("batch gradient equals the mean of per-instance gradients") {
  SplitMix64 rng(61);
  ModelHyperparams hp = tiny_hp(4, 3);
  ModelParams p = ModelParams::init(hp, rng);
  std::vector<Eigen::MatrixXd> xs;
  std::vector<Label> golds;
  for (int k = 0; k < 3; ++k) {
    xs.push_back(random_input(4, 3 + k, rng));
    golds.push_back(index_to_label(k * 9));
  }

  ModelParams batch = ModelParams::zeros(hp);
  for (int k = 0; k < 3; ++k) {
    ForwardCache fc;
    forward_embedded(xs[k], p, false, nullptr, &fc);
    backward_instance(fc, p, golds[k], 1.0 / 3.0, batch);
  }

  ModelParams summed = ModelParams::zeros(hp);
  for (int k = 0; k < 3; ++k) {
    ForwardCache fc;
    ModelParams single = ModelParams::zeros(hp);
    forward_embedded(xs[k], p, false, nullptr, &fc);
    backward_instance(fc, p, golds[k], 1.0, single);
    auto sr = summed.tensors();
    auto qr = single.tensors();
    for (std::size_t t = 0; t < sr.size(); ++t) {
      for (Eigen::Index j = 0; j < sr[t].size(); ++j) {
        sr[t].data[j] += qr[t].data[j] / 3.0;
      }
    }
  }

  auto br = batch.tensors();
  auto mr = summed.tensors();
  for (std::size_t t = 0; t < br.size(); ++t) {
    for (Eigen::Index j = 0; j < br[t].size(); ++j) {
      CHECK(br[t].data[j] == doctest::Approx(mr[t].data[j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("permuting batch order leaves the summed gradient unchanged") {
  SplitMix64 rng(71);
  ModelHyperparams hp = tiny_hp(4, 3);
  ModelParams p = ModelParams::init(hp, rng);
  std::vector<Eigen::MatrixXd> xs;
  std::vector<Label> golds;
  for (int k = 0; k < 4; ++k) {
    xs.push_back(random_input(4, 2 + k, rng));
    golds.push_back(index_to_label(7 * k));
  }
  auto accumulate = [&](const std::vector<int>& order) {
    ModelParams g = ModelParams::zeros(hp);
    for (int k : order) {
      ForwardCache fc;
      forward_embedded(xs[k], p, false, nullptr, &fc);
      backward_instance(fc, p, golds[k], 0.25, g);
    }
    return g;
  };
  ModelParams ga = accumulate({0, 1, 2, 3});
  ModelParams gb = accumulate({3, 1, 0, 2});
  auto ra = ga.tensors();
  auto rb = gb.tensors();
  for (std::size_t t = 0; t < ra.size(); ++t) {
    for (Eigen::Index j = 0; j < ra[t].size(); ++j) {
      CHECK(std::fabs(ra[t].data[j] - rb[t].data[j]) < 1e-12);
    }
  }
}

TEST_CASE("gradient norm vanishes as the prediction approaches the gold") {
  SplitMix64 rng(73);
  ModelHyperparams hp = tiny_hp(4, 3);
  ModelParams p = ModelParams::init(hp, rng);
  Eigen::MatrixXd x = random_input(4, 5, rng);
  const Label gold = index_to_label(11);
  auto grad_norm = [&](double boost) {
    ModelParams q = p;
    q.cls_b[label_to_index(gold)] = boost;
    ForwardCache fc;
    forward_embedded(x, q, false, nullptr, &fc);
    ModelParams g = ModelParams::zeros(hp);
    backward_instance(fc, q, gold, 1.0, g);
    double sq = 0.0;
    for (const TensorRef& t : g.tensors()) {
      for (Eigen::Index j = 0; j < t.size(); ++j) {
        sq += t.data[j] * t.data[j];
      }
    }
    return std::sqrt(sq);
  };
  double prev = grad_norm(0.0);
  for (double boost : {4.0, 8.0, 16.0, 32.0}) {
    const double cur = grad_norm(boost);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("macro_f1: reference cases") {
  auto lab = [](int k) { return index_to_label(k); };
  // Perfect agreement.
  std::vector<Label> g = {lab(0), lab(5), lab(12), lab(29)};
  CHECK(macro_f1(g, g) == doctest::Approx(1.0));

  // Constant predictor over a balanced two-class gold set: the predicted
  // class scores F1 = 2/3, the missed class 0, everything else is excluded.
  std::vector<Label> gold2 = {lab(1), lab(1), lab(2), lab(2)};
  std::vector<Label> pred2 = {lab(1), lab(1), lab(1), lab(1)};
  CHECK(macro_f1(gold2, pred2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // A label predicted but never gold still counts (as a 0) while absent
  // labels do not.
  std::vector<Label> gold3 = {lab(4), lab(4)};
  std::vector<Label> pred3 = {lab(4), lab(9)};
  // label 4: tp=1 fn=1 -> F1 = 2/3; label 9: fp=1 -> 0; mean = 1/3.
  CHECK(macro_f1(gold3, pred3) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(macro_f1({}, {}), MotiveError);
  CHECK_THROWS_AS(macro_f1(g, {lab(0)}), MotiveError);
}
