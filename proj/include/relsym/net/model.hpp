#pragma once

#include <Eigen/Dense>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "relsym/net/config.hpp"
#include "relsym/net/gumbel.hpp"
#include "relsym/sim/types.hpp"

namespace relsym::net {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
struct Linear {
  Mat<S> W;  // out x in
  Vec<S> b;  // out

  void init(int out, int in, std::mt19937_64& rng) {
    W.resize(out, in);
    b = Vec<S>::Zero(out);
    const double limit = std::sqrt(6.0 / in);
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index r = 0; r < W.rows(); ++r)
      for (Eigen::Index c = 0; c < W.cols(); ++c) W(r, c) = S(dist(rng));
  }
};

// in -> hidden -> hidden -> out with ReLU on the hidden layers. When
// `normalized_out` is set (layers feeding a Gumbel-Sigmoid), the final layer
// uses weight rows re-scaled to a fixed norm and re-scales its input likewise.
template <typename S>
struct Mlp3 {
  Linear<S> l1, l2, l3;
  bool normalized_out = false;

  void init(int in, int hidden, int out, bool norm, std::mt19937_64& rng) {
    l1.init(hidden, in, rng);
    l2.init(hidden, hidden, rng);
    l3.init(out, hidden, rng);
    normalized_out = norm;
  }
};

template <typename S>
struct RelationalNet {
  NetConfig cfg;
  Mlp3<S> encoder;
  std::vector<Mlp3<S>> qnet, knet;  // one per head
  Mlp3<S> agg;
  Mlp3<S> decoder;

  static RelationalNet make(const NetConfig& cfg, std::uint64_t seed);
};

struct TensorShape {
  std::string name;
  Eigen::Index rows = 0, cols = 0;
};

template <typename S>
struct TensorRef {
  TensorShape shape;
  S* data = nullptr;  // column-major storage of rows*cols values
  Eigen::Index size() const { return shape.rows * shape.cols; }
};

// Fixed enumeration order shared by init, Adam state, checkpoints, and the
// gradient checker.
template <typename S>
std::vector<TensorRef<S>> tensor_refs(RelationalNet<S>& net);

// Gradients mirror the parameter tensors.
template <typename S>
struct NetGrads {
  RelationalNet<S> store;  // same shapes, holds gradient values

  static NetGrads like(const RelationalNet<S>& net) {
    NetGrads g;
    g.store = net;
    g.zero();
    return g;
  }
  void zero() {
    for (auto& t : tensor_refs(store))
      Eigen::Map<Vec<S>>(t.data, t.size()).setZero();
  }
};

// One training batch: all objects of all samples stacked row-wise.
template <typename S>
struct Batch {
  Mat<S> X;  // n_rows x d_o, already input-scaled
  Mat<S> A;  // n_rows x d_a
  Mat<S> E;  // n_rows x d_o target effects, input-scaled
  std::vector<int> row_off;   // per-sample first row; size n_samples + 1
  std::vector<int> pair_off;  // per-sample first attention cell; size n_samples + 1

  int n_samples() const { return static_cast<int>(row_off.size()) - 1; }
  int n_rows() const { return row_off.empty() ? 0 : row_off.back(); }
  int rows_of(int s) const { return row_off[s + 1] - row_off[s]; }
};

template <typename S>
Batch<S> make_batch(std::span<const sim::Transition> transitions, const NetConfig& cfg);

template <typename S>
Batch<S> make_batch(const std::vector<sim::Transition>& all, std::span<const int> indices,
                    const NetConfig& cfg);

// Per-object action encoding: [is_pick, is_place, grasp one-hot, release one-hot].
std::vector<std::array<double, 8>> encode_action(const sim::ActionSpec& action,
                                                 const std::vector<sim::ObjectId>& ids);

template <typename S>
struct Workspace {
  // encoder
  Mat<S> enc_h1, enc_h2, enc_vhat, enc_logits, sp;
  Vec<S> enc_rn;
  Mat<S> enc_Wn;
  // attention nets, one entry per head
  std::vector<Mat<S>> q_h1, q_h2, q_vhat, Q, k_h1, k_h2, k_vhat, K;
  std::vector<Vec<S>> q_rn, k_rn;
  std::vector<Mat<S>> q_Wn, k_Wn;
  // per-head flattened n_s x n_s blocks, sample-major (Eigen-backed so the
  // base alignment, and therefore the arithmetic, is run-invariant)
  std::vector<Vec<S>> scores, alpha;
  // aggregation and decoder
  Mat<S> C, agg_h1, agg_h2, Z, H, dec_h1, dec_h2, ehat;
  // Gumbel noise (SampledSoft)
  Mat<S> noise_unary;
  std::vector<Vec<S>> noise_attn;

  S loss = S(0);  // sum over samples of per-sample loss
};

template <typename S>
void sample_gs_noise(Workspace<S>& ws, const Batch<S>& batch, const NetConfig& cfg,
                     std::mt19937_64& rng);

template <typename S>
void forward(const RelationalNet<S>& net, const Batch<S>& batch, GSMode mode,
             Workspace<S>& ws);

// Accumulates into `grads`; requires a preceding forward in SampledSoft mode
// with the noise still in place.
template <typename S>
void backward(const RelationalNet<S>& net, const Batch<S>& batch, GSMode mode,
              Workspace<S>& ws, NetGrads<S>& grads);

// Sum of squared differences; the per-sample training objective.
double prediction_loss(const std::vector<std::array<double, 6>>& predicted,
                       const std::vector<std::array<double, 6>>& observed);

// Inference entry points (hard-deterministic symbols).
template <typename S>
std::vector<std::vector<int>> encode_unary(const RelationalNet<S>& net,
                                           std::span<const std::array<double, 6>> features);

template <typename S>
std::vector<Eigen::MatrixXi> encode_relational(
    const RelationalNet<S>& net, std::span<const std::array<double, 6>> features);

// Predicted effects (centimeter units) for one transition context.
template <typename S>
std::vector<std::array<double, 6>> predict_effects(
    const RelationalNet<S>& net, std::span<const std::array<double, 6>> features,
    const sim::ActionSpec& action, const std::vector<sim::ObjectId>& ids);

extern template struct RelationalNet<float>;
extern template struct RelationalNet<double>;

}  // namespace relsym::net
