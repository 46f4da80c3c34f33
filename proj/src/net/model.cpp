#include "relsym/net/model.hpp"

#include <cmath>

namespace relsym::net {

namespace {

constexpr double kNormEps = 1e-8;

template <typename S>
void linear_forward(const Linear<S>& l, const Mat<S>& X, Mat<S>& Y) {
  Y.noalias() = X * l.W.transpose();
  Y.rowwise() += l.b.transpose();
}

template <typename S>
void relu_inplace(Mat<S>& X) {
  X = X.cwiseMax(S(0));
}

// Rows of W rescaled to norm `target`; rows with ~zero norm pass through.
template <typename S>
Mat<S> weight_normalized(const Mat<S>& W, S target) {
  Mat<S> Wn = W;
  for (Eigen::Index r = 0; r < W.rows(); ++r) {
    S n = W.row(r).norm();
    if (n > S(kNormEps)) Wn.row(r) *= target / n;
  }
  return Wn;
}

template <typename S>
void input_normalized(const Mat<S>& V, S target, Mat<S>& Vhat, Vec<S>& rn) {
  rn = V.rowwise().norm();
  Vhat = V;
  for (Eigen::Index r = 0; r < V.rows(); ++r)
    if (rn(r) > S(kNormEps)) Vhat.row(r) *= target / rn(r);
}

// Final (possibly normalized) layer of an Mlp3.
template <typename S>
void out_layer_forward(const Mlp3<S>& mlp, S norm_target, const Mat<S>& H2, Mat<S>& Vhat,
                       Vec<S>& rn, Mat<S>& Wn, Mat<S>& Out) {
  if (mlp.normalized_out && norm_target > S(0)) {
    input_normalized(H2, norm_target, Vhat, rn);
    Wn = weight_normalized(mlp.l3.W, norm_target);
    Out.noalias() = Vhat * Wn.transpose();
    Out.rowwise() += mlp.l3.b.transpose();
  } else {
    Vhat = H2;
    rn.resize(0);
    Wn = mlp.l3.W;
    linear_forward(mlp.l3, H2, Out);
  }
}

template <typename S>
void mlp_forward(const Mlp3<S>& mlp, S norm_target, const Mat<S>& X, Mat<S>& H1, Mat<S>& H2,
                 Mat<S>& Vhat, Vec<S>& rn, Mat<S>& Wn, Mat<S>& Out) {
  linear_forward(mlp.l1, X, H1);
  relu_inplace(H1);
  linear_forward(mlp.l2, H1, H2);
  relu_inplace(H2);
  out_layer_forward(mlp, norm_target, H2, Vhat, rn, Wn, Out);
}

template <typename S>
void linear_backward(const Linear<S>& l, const Mat<S>& Xin, const Mat<S>& gY, Linear<S>& gl,
                     Mat<S>* gX) {
  gl.W.noalias() += gY.transpose() * Xin;
  gl.b.noalias() += gY.colwise().sum().transpose();
  if (gX) gX->noalias() = gY * l.W;
}

// Backward through the normalized output layer. gH2 receives the gradient at
// the layer input (pre input-normalization).
template <typename S>
void out_layer_backward(const Mlp3<S>& mlp, S norm_target, const Mat<S>& H2,
                        const Mat<S>& Vhat, const Vec<S>& rn, const Mat<S>& Wn,
                        const Mat<S>& gOut, Mlp3<S>& gmlp, Mat<S>& gH2) {
  if (!(mlp.normalized_out && norm_target > S(0))) {
    linear_backward(mlp.l3, H2, gOut, gmlp.l3, &gH2);
    return;
  }
  gmlp.l3.b.noalias() += gOut.colwise().sum().transpose();
  Mat<S> gWn = gOut.transpose() * Vhat;
  for (Eigen::Index r = 0; r < mlp.l3.W.rows(); ++r) {
    S n = mlp.l3.W.row(r).norm();
    if (n > S(kNormEps)) {
      S dot = mlp.l3.W.row(r).dot(gWn.row(r));
      gmlp.l3.W.row(r) += (norm_target / n) * (gWn.row(r) - (dot / (n * n)) * mlp.l3.W.row(r));
    } else {
      gmlp.l3.W.row(r) += gWn.row(r);
    }
  }
  Mat<S> gVhat = gOut * Wn;
  gH2.resize(H2.rows(), H2.cols());
  for (Eigen::Index r = 0; r < H2.rows(); ++r) {
    if (rn(r) > S(kNormEps)) {
      S scale = norm_target / rn(r);
      S dot = H2.row(r).dot(gVhat.row(r));
      gH2.row(r) = scale * (gVhat.row(r) - (dot / (rn(r) * rn(r))) * H2.row(r));
    } else {
      gH2.row(r) = gVhat.row(r);
    }
  }
}

template <typename S>
void mlp_backward(const Mlp3<S>& mlp, S norm_target, const Mat<S>& X, const Mat<S>& H1,
                  const Mat<S>& H2, const Mat<S>& Vhat, const Vec<S>& rn, const Mat<S>& Wn,
                  const Mat<S>& gOut, Mlp3<S>& gmlp, Mat<S>* gX = nullptr) {
  Mat<S> gH2;
  out_layer_backward(mlp, norm_target, H2, Vhat, rn, Wn, gOut, gmlp, gH2);
  gH2.array() *= (H2.array() > S(0)).template cast<S>();
  Mat<S> gH1;
  linear_backward(mlp.l2, H1, gH2, gmlp.l2, &gH1);
  gH1.array() *= (H1.array() > S(0)).template cast<S>();
  linear_backward(mlp.l1, X, gH1, gmlp.l1, gX);
}

template <typename S>
using MapMat = Eigen::Map<Mat<S>>;
template <typename S>
using CMapMat = Eigen::Map<const Mat<S>>;

}  // namespace

template <typename S>
RelationalNet<S> RelationalNet<S>::make(const NetConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  RelationalNet net;
  net.cfg = cfg;
  std::mt19937_64 rng(seed);
  const bool norm = cfg.pre_gs_norm > 0;
  net.encoder.init(cfg.d_o, cfg.hidden, cfg.d_k, norm, rng);
  net.qnet.resize(cfg.n_heads);
  net.knet.resize(cfg.n_heads);
  for (int h = 0; h < cfg.n_heads; ++h) net.qnet[h].init(cfg.d_o, cfg.hidden, cfg.d_att, norm, rng);
  for (int h = 0; h < cfg.n_heads; ++h) net.knet[h].init(cfg.d_o, cfg.hidden, cfg.d_att, norm, rng);
  net.agg.init(cfg.d_k + cfg.d_a, cfg.hidden, cfg.d_z, false, rng);
  net.decoder.init(cfg.n_heads * cfg.d_z, cfg.hidden, cfg.d_o, false, rng);
  return net;
}

template <typename S>
std::vector<TensorRef<S>> tensor_refs(RelationalNet<S>& net) {
  std::vector<TensorRef<S>> refs;
  auto add_mlp = [&](const std::string& prefix, Mlp3<S>& m) {
    Linear<S>* layers[3] = {&m.l1, &m.l2, &m.l3};
    for (int i = 0; i < 3; ++i) {
      std::string base = prefix + ".l" + std::to_string(i + 1);
      refs.push_back({{base + ".W", layers[i]->W.rows(), layers[i]->W.cols()},
                      layers[i]->W.data()});
      refs.push_back({{base + ".b", layers[i]->b.size(), 1}, layers[i]->b.data()});
    }
  };
  add_mlp("encoder", net.encoder);
  for (int h = 0; h < net.cfg.n_heads; ++h) add_mlp("q" + std::to_string(h), net.qnet[h]);
  for (int h = 0; h < net.cfg.n_heads; ++h) add_mlp("k" + std::to_string(h), net.knet[h]);
  add_mlp("agg", net.agg);
  add_mlp("decoder", net.decoder);
  return refs;
}

std::vector<std::array<double, 8>> encode_action(const sim::ActionSpec& action,
                                                 const std::vector<sim::ObjectId>& ids) {
  std::vector<std::array<double, 8>> rows;
  rows.reserve(ids.size());
  for (sim::ObjectId id : ids) {
    std::array<double, 8> a{};
    a[0] = id == action.pick ? 1.0 : 0.0;
    a[1] = id == action.place ? 1.0 : 0.0;
    a[2 + static_cast<int>(action.grasp)] = 1.0;
    a[5 + static_cast<int>(action.release)] = 1.0;
    rows.push_back(a);
  }
  return rows;
}

namespace {

template <typename S, typename GetRecord>
Batch<S> build_batch(int count, GetRecord get, const NetConfig& cfg) {
  Batch<S> batch;
  batch.row_off.push_back(0);
  batch.pair_off.push_back(0);
  int rows = 0, pairs = 0;
  for (int s = 0; s < count; ++s) {
    const sim::Transition& t = get(s);
    rows += static_cast<int>(t.ids.size());
    pairs += static_cast<int>(t.ids.size() * t.ids.size());
    batch.row_off.push_back(rows);
    batch.pair_off.push_back(pairs);
  }
  batch.X.resize(rows, cfg.d_o);
  batch.A.resize(rows, cfg.d_a);
  batch.E.resize(rows, cfg.d_o);
  const S scale = S(cfg.input_scale);
  int r = 0;
  for (int s = 0; s < count; ++s) {
    const sim::Transition& t = get(s);
    auto arows = encode_action(t.action, t.ids);
    for (std::size_t i = 0; i < t.ids.size(); ++i, ++r) {
      for (int d = 0; d < cfg.d_o; ++d) {
        batch.X(r, d) = S(t.pre[i][d]) * scale;
        batch.E(r, d) = S(t.effects[i][d]) * scale;
      }
      for (int d = 0; d < cfg.d_a; ++d) batch.A(r, d) = S(arows[i][d]);
    }
  }
  return batch;
}

}  // namespace

template <typename S>
Batch<S> make_batch(std::span<const sim::Transition> transitions, const NetConfig& cfg) {
  return build_batch<S>(static_cast<int>(transitions.size()),
                        [&](int s) -> const sim::Transition& { return transitions[std::size_t(s)]; },
                        cfg);
}

template <typename S>
Batch<S> make_batch(const std::vector<sim::Transition>& all, std::span<const int> indices,
                    const NetConfig& cfg) {
  return build_batch<S>(static_cast<int>(indices.size()),
                        [&](int s) -> const sim::Transition& {
                          return all[std::size_t(indices[std::size_t(s)])];
                        },
                        cfg);
}

template <typename S>
void sample_gs_noise(Workspace<S>& ws, const Batch<S>& batch, const NetConfig& cfg,
                     std::mt19937_64& rng) {
  const int n = batch.n_rows();
  ws.noise_unary.resize(n, cfg.d_k);
  for (Eigen::Index r = 0; r < n; ++r)
    for (int c = 0; c < cfg.d_k; ++c) ws.noise_unary(r, c) = S(sample_logistic(rng));
  ws.noise_attn.assign(static_cast<std::size_t>(cfg.n_heads), Vec<S>());
  const int cells = batch.pair_off.back();
  for (int h = 0; h < cfg.n_heads; ++h) {
    ws.noise_attn[h].resize(cells);
    for (int c = 0; c < cells; ++c) ws.noise_attn[h](c) = S(sample_logistic(rng));
  }
}

namespace {

template <typename S>
void gs_apply(const Mat<S>& logits, const Mat<S>& noise, GSMode mode, S temperature,
              Mat<S>& out) {
  if (mode == GSMode::HardDeterministic) {
    out = (logits.array() > S(0)).template cast<S>();
  } else {
    out = (S(1) / (S(1) + (-(logits.array() + noise.array()) / temperature).exp())).matrix();
  }
}

}  // namespace

template <typename S>
void forward(const RelationalNet<S>& net, const Batch<S>& batch, GSMode mode,
             Workspace<S>& ws) {
  const NetConfig& cfg = net.cfg;
  const S norm = S(cfg.pre_gs_norm);
  const S temp = S(cfg.temperature);
  const int heads = cfg.n_heads;

  if (mode == GSMode::SampledSoft &&
      (ws.noise_unary.rows() != batch.n_rows() ||
       static_cast<int>(ws.noise_attn.size()) != heads))
    throw TrainingFault("forward: SampledSoft requires sampled noise matching the batch");

  mlp_forward(net.encoder, norm, batch.X, ws.enc_h1, ws.enc_h2, ws.enc_vhat, ws.enc_rn,
              ws.enc_Wn, ws.enc_logits);
  if (mode == GSMode::HardDeterministic)
    ws.sp = (ws.enc_logits.array() > S(0)).template cast<S>();
  else
    gs_apply(ws.enc_logits, ws.noise_unary, mode, temp, ws.sp);

  auto resize_heads = [&](auto& v) { v.resize(static_cast<std::size_t>(heads)); };
  resize_heads(ws.q_h1); resize_heads(ws.q_h2); resize_heads(ws.q_vhat); resize_heads(ws.Q);
  resize_heads(ws.k_h1); resize_heads(ws.k_h2); resize_heads(ws.k_vhat); resize_heads(ws.K);
  resize_heads(ws.q_rn); resize_heads(ws.k_rn); resize_heads(ws.q_Wn); resize_heads(ws.k_Wn);
  resize_heads(ws.scores); resize_heads(ws.alpha);

  const int cells = batch.pair_off.back();
  for (int h = 0; h < heads; ++h) {
    ws.scores[h].resize(cells);
    ws.alpha[h].resize(cells);
  }

  if (cfg.attention == AttentionMode::AllOnes) {
    for (int h = 0; h < heads; ++h) ws.alpha[h].setOnes();
  } else {
    for (int h = 0; h < heads; ++h) {
      mlp_forward(net.qnet[h], norm, batch.X, ws.q_h1[h], ws.q_h2[h], ws.q_vhat[h], ws.q_rn[h],
                  ws.q_Wn[h], ws.Q[h]);
      mlp_forward(net.knet[h], norm, batch.X, ws.k_h1[h], ws.k_h2[h], ws.k_vhat[h], ws.k_rn[h],
                  ws.k_Wn[h], ws.K[h]);
      for (int s = 0; s < batch.n_samples(); ++s) {
        const int r0 = batch.row_off[s], n = batch.rows_of(s);
        MapMat<S> sc(ws.scores[h].data() + batch.pair_off[s], n, n);
        sc.noalias() = ws.Q[h].middleRows(r0, n) * ws.K[h].middleRows(r0, n).transpose();
        MapMat<S> al(ws.alpha[h].data() + batch.pair_off[s], n, n);
        if (mode == GSMode::HardDeterministic) {
          al = (sc.array() > S(0)).template cast<S>();
        } else {
          CMapMat<S> nz(ws.noise_attn[h].data() + batch.pair_off[s], n, n);
          al = (S(1) / (S(1) + (-(sc.array() + nz.array()) / temp).exp())).matrix();
        }
      }
    }
  }

  ws.C.resize(batch.n_rows(), cfg.d_k + cfg.d_a);
  ws.C << ws.sp, batch.A;
  Vec<S> dummy_rn;
  Mat<S> dummy_vhat, dummy_Wn;
  mlp_forward(net.agg, S(0), ws.C, ws.agg_h1, ws.agg_h2, dummy_vhat, dummy_rn, dummy_Wn, ws.Z);

  ws.H.resize(batch.n_rows(), heads * cfg.d_z);
  for (int s = 0; s < batch.n_samples(); ++s) {
    const int r0 = batch.row_off[s], n = batch.rows_of(s);
    for (int h = 0; h < heads; ++h) {
      CMapMat<S> al(ws.alpha[h].data() + batch.pair_off[s], n, n);
      auto Hb = ws.H.block(r0, h * cfg.d_z, n, cfg.d_z);
      if (cfg.agg == AggVariant::SumSources) {
        Hb.noalias() = al * ws.Z.middleRows(r0, n);
      } else {
        Vec<S> rs = al.rowwise().sum();
        Hb.noalias() = rs.asDiagonal() * ws.Z.middleRows(r0, n);
      }
    }
  }

  mlp_forward(net.decoder, S(0), ws.H, ws.dec_h1, ws.dec_h2, dummy_vhat, dummy_rn, dummy_Wn,
              ws.ehat);
  ws.loss = (ws.ehat - batch.E).squaredNorm();
}

template <typename S>
void backward(const RelationalNet<S>& net, const Batch<S>& batch, GSMode mode,
              Workspace<S>& ws, NetGrads<S>& grads) {
  const NetConfig& cfg = net.cfg;
  const S norm = S(cfg.pre_gs_norm);
  const int heads = cfg.n_heads;
  GSConfig gs{cfg.temperature, mode};

  Mat<S> gEhat = S(2) * (ws.ehat - batch.E);
  Mat<S> gH;
  mlp_backward(net.decoder, S(0), ws.H, ws.dec_h1, ws.dec_h2, ws.dec_h2, Vec<S>(), Mat<S>(),
               gEhat, grads.store.decoder, &gH);

  Mat<S> gZ = Mat<S>::Zero(ws.Z.rows(), ws.Z.cols());
  std::vector<Vec<S>> galpha(static_cast<std::size_t>(heads));
  const bool relational = cfg.attention == AttentionMode::Relational;
  if (relational)
    for (int h = 0; h < heads; ++h) galpha[h] = Vec<S>::Zero(batch.pair_off.back());

  for (int s = 0; s < batch.n_samples(); ++s) {
    const int r0 = batch.row_off[s], n = batch.rows_of(s);
    for (int h = 0; h < heads; ++h) {
      CMapMat<S> al(ws.alpha[h].data() + batch.pair_off[s], n, n);
      auto gHb = gH.block(r0, h * cfg.d_z, n, cfg.d_z);
      if (cfg.agg == AggVariant::SumSources) {
        gZ.middleRows(r0, n).noalias() += al.transpose() * gHb;
        if (relational) {
          MapMat<S> ga(galpha[h].data() + batch.pair_off[s], n, n);
          ga.noalias() = gHb * ws.Z.middleRows(r0, n).transpose();
        }
      } else {
        Vec<S> rs = al.rowwise().sum();
        gZ.middleRows(r0, n).noalias() += rs.asDiagonal() * gHb;
        if (relational) {
          MapMat<S> ga(galpha[h].data() + batch.pair_off[s], n, n);
          Vec<S> growsum =
              (ws.Z.middleRows(r0, n).array() * gHb.array()).rowwise().sum().matrix();
          ga = growsum.replicate(1, n);
        }
      }
    }
  }

  if (relational) {
    for (int h = 0; h < heads; ++h) {
      Mat<S> gQ = Mat<S>::Zero(ws.Q[h].rows(), ws.Q[h].cols());
      Mat<S> gK = Mat<S>::Zero(ws.K[h].rows(), ws.K[h].cols());
      for (int s = 0; s < batch.n_samples(); ++s) {
        const int r0 = batch.row_off[s], n = batch.rows_of(s);
        CMapMat<S> al(ws.alpha[h].data() + batch.pair_off[s], n, n);
        MapMat<S> ga(galpha[h].data() + batch.pair_off[s], n, n);
        // d(alpha)/d(score)
        Mat<S> gs_grad(n, n);
        if (mode == GSMode::HardDeterministic)
          gs_grad.setOnes();  // straight-through
        else
          gs_grad = (al.array() * (S(1) - al.array()) / S(cfg.temperature)).matrix();
        Mat<S> gScores = ga.cwiseProduct(gs_grad);
        gQ.middleRows(r0, n).noalias() += gScores * ws.K[h].middleRows(r0, n);
        gK.middleRows(r0, n).noalias() += gScores.transpose() * ws.Q[h].middleRows(r0, n);
      }
      mlp_backward(net.qnet[h], norm, batch.X, ws.q_h1[h], ws.q_h2[h], ws.q_vhat[h], ws.q_rn[h],
                   ws.q_Wn[h], gQ, grads.store.qnet[h]);
      mlp_backward(net.knet[h], norm, batch.X, ws.k_h1[h], ws.k_h2[h], ws.k_vhat[h], ws.k_rn[h],
                   ws.k_Wn[h], gK, grads.store.knet[h]);
    }
  }

  Mat<S> gC;
  mlp_backward(net.agg, S(0), ws.C, ws.agg_h1, ws.agg_h2, ws.agg_h2, Vec<S>(), Mat<S>(), gZ,
               grads.store.agg, &gC);

  Mat<S> gSp = gC.leftCols(cfg.d_k);
  Mat<S> gLogits(gSp.rows(), gSp.cols());
  if (mode == GSMode::HardDeterministic)
    gLogits = gSp;  // straight-through
  else
    gLogits = gSp.array() * ws.sp.array() * (S(1) - ws.sp.array()) / S(cfg.temperature);
  mlp_backward(net.encoder, norm, batch.X, ws.enc_h1, ws.enc_h2, ws.enc_vhat, ws.enc_rn,
               ws.enc_Wn, gLogits, grads.store.encoder);
}

double prediction_loss(const std::vector<std::array<double, 6>>& predicted,
                       const std::vector<std::array<double, 6>>& observed) {
  if (predicted.size() != observed.size())
    throw sim::ContractViolation("prediction_loss: length mismatch");
  double total = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    for (int d = 0; d < 6; ++d) {
      double diff = predicted[i][d] - observed[i][d];
      total += diff * diff;
    }
  return total;
}

namespace {

// Single-state pseudo-transition so inference can reuse the batched forward.
template <typename S>
Batch<S> state_batch(std::span<const std::array<double, 6>> features, const NetConfig& cfg,
                     const sim::ActionSpec* action, const std::vector<sim::ObjectId>* ids) {
  const int n = static_cast<int>(features.size());
  Batch<S> batch;
  batch.row_off = {0, n};
  batch.pair_off = {0, n * n};
  batch.X.resize(n, cfg.d_o);
  batch.A = Mat<S>::Zero(n, cfg.d_a);
  batch.E = Mat<S>::Zero(n, cfg.d_o);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < cfg.d_o; ++d) batch.X(i, d) = S(features[i][d]) * S(cfg.input_scale);
  if (action) {
    auto arows = encode_action(*action, *ids);
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < cfg.d_a; ++d) batch.A(i, d) = S(arows[i][d]);
  }
  return batch;
}

}  // namespace

template <typename S>
std::vector<std::vector<int>> encode_unary(const RelationalNet<S>& net,
                                           std::span<const std::array<double, 6>> features) {
  Batch<S> batch = state_batch<S>(features, net.cfg, nullptr, nullptr);
  Workspace<S> ws;
  forward(net, batch, GSMode::HardDeterministic, ws);
  std::vector<std::vector<int>> bits(features.size(), std::vector<int>(net.cfg.d_k));
  for (std::size_t i = 0; i < features.size(); ++i)
    for (int d = 0; d < net.cfg.d_k; ++d)
      bits[i][d] = ws.sp(static_cast<Eigen::Index>(i), d) > S(0.5) ? 1 : 0;
  return bits;
}

template <typename S>
std::vector<Eigen::MatrixXi> encode_relational(
    const RelationalNet<S>& net, std::span<const std::array<double, 6>> features) {
  Batch<S> batch = state_batch<S>(features, net.cfg, nullptr, nullptr);
  Workspace<S> ws;
  forward(net, batch, GSMode::HardDeterministic, ws);
  const int n = static_cast<int>(features.size());
  std::vector<Eigen::MatrixXi> rel(static_cast<std::size_t>(net.cfg.n_heads));
  for (int h = 0; h < net.cfg.n_heads; ++h) {
    CMapMat<S> al(ws.alpha[h].data(), n, n);
    rel[h] = (al.array() > S(0.5)).template cast<int>();
  }
  return rel;
}

template <typename S>
std::vector<std::array<double, 6>> predict_effects(
    const RelationalNet<S>& net, std::span<const std::array<double, 6>> features,
    const sim::ActionSpec& action, const std::vector<sim::ObjectId>& ids) {
  Batch<S> batch = state_batch<S>(features, net.cfg, &action, &ids);
  Workspace<S> ws;
  forward(net, batch, GSMode::HardDeterministic, ws);
  std::vector<std::array<double, 6>> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    for (int d = 0; d < net.cfg.d_o; ++d)
      out[i][d] = double(ws.ehat(static_cast<Eigen::Index>(i), d)) / net.cfg.input_scale;
  return out;
}

template struct RelationalNet<float>;
template struct RelationalNet<double>;

template std::vector<TensorRef<float>> tensor_refs(RelationalNet<float>&);
template std::vector<TensorRef<double>> tensor_refs(RelationalNet<double>&);
template Batch<float> make_batch(std::span<const sim::Transition>, const NetConfig&);
template Batch<double> make_batch(std::span<const sim::Transition>, const NetConfig&);
template Batch<float> make_batch(const std::vector<sim::Transition>&, std::span<const int>,
                                 const NetConfig&);
template Batch<double> make_batch(const std::vector<sim::Transition>&, std::span<const int>,
                                  const NetConfig&);
template void sample_gs_noise(Workspace<float>&, const Batch<float>&, const NetConfig&,
                              std::mt19937_64&);
template void sample_gs_noise(Workspace<double>&, const Batch<double>&, const NetConfig&,
                              std::mt19937_64&);
template void forward(const RelationalNet<float>&, const Batch<float>&, GSMode,
                      Workspace<float>&);
template void forward(const RelationalNet<double>&, const Batch<double>&, GSMode,
                      Workspace<double>&);
template void backward(const RelationalNet<float>&, const Batch<float>&, GSMode,
                       Workspace<float>&, NetGrads<float>&);
template void backward(const RelationalNet<double>&, const Batch<double>&, GSMode,
                       Workspace<double>&, NetGrads<double>&);
template std::vector<std::vector<int>> encode_unary(const RelationalNet<float>&,
                                                    std::span<const std::array<double, 6>>);
template std::vector<std::vector<int>> encode_unary(const RelationalNet<double>&,
                                                    std::span<const std::array<double, 6>>);
template std::vector<Eigen::MatrixXi> encode_relational(
    const RelationalNet<float>&, std::span<const std::array<double, 6>>);
template std::vector<Eigen::MatrixXi> encode_relational(
    const RelationalNet<double>&, std::span<const std::array<double, 6>>);
template std::vector<std::array<double, 6>> predict_effects(
    const RelationalNet<float>&, std::span<const std::array<double, 6>>,
    const sim::ActionSpec&, const std::vector<sim::ObjectId>&);
template std::vector<std::array<double, 6>> predict_effects(
    const RelationalNet<double>&, std::span<const std::array<double, 6>>,
    const sim::ActionSpec&, const std::vector<sim::ObjectId>&);

}  // namespace relsym::net
