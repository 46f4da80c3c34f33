#include "relsym/net/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

namespace relsym::net {

namespace {

struct Adam {
  std::vector<Vec<float>> m, v;
  long step = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  void init(std::vector<TensorRef<float>>& refs) {
    m.resize(refs.size());
    v.resize(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
      m[i] = Vec<float>::Zero(refs[i].size());
      v[i] = Vec<float>::Zero(refs[i].size());
    }
  }

  void update(std::vector<TensorRef<float>>& params, std::vector<TensorRef<float>>& grads,
              double lr) {
    ++step;
    const float c1 = float(1.0 - std::pow(beta1, step));
    const float c2 = float(1.0 - std::pow(beta2, step));
    for (std::size_t i = 0; i < params.size(); ++i) {
      Eigen::Map<Vec<float>> p(params[i].data, params[i].size());
      Eigen::Map<Vec<float>> g(grads[i].data, grads[i].size());
      m[i] = float(beta1) * m[i] + float(1 - beta1) * g;
      v[i] = float(beta2) * v[i] + float(1 - beta2) * g.cwiseProduct(g);
      p.array() -= float(lr) * (m[i].array() / c1) /
                   ((v[i].array() / c2).sqrt() + float(eps));
    }
  }
};

// Scale all gradients so their global L2 norm is at most `clip`.
double clip_gradients(std::vector<TensorRef<float>>& grads, double clip) {
  double sq = 0;
  for (auto& t : grads) {
    Eigen::Map<Vec<float>> g(t.data, t.size());
    sq += double(g.squaredNorm());
  }
  double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) {
    for (auto& t : grads) {
      Eigen::Map<Vec<float>> g(t.data, t.size());
      if (!g.allFinite()) throw TrainingFault("non-finite gradient in " + t.shape.name);
    }
    throw TrainingFault("non-finite gradient norm");
  }
  if (clip > 0 && norm > clip) {
    float s = float(clip / norm);
    for (auto& t : grads) Eigen::Map<Vec<float>>(t.data, t.size()) *= s;
  }
  return norm;
}

double count_objects(const std::vector<sim::Transition>& set) {
  double n = 0;
  for (const auto& t : set) n += double(t.ids.size());
  return n;
}

}  // namespace

double evaluate_mse(const TrainNet& net, const std::vector<sim::Transition>& dataset) {
  if (dataset.empty()) return 0.0;
  Workspace<float> ws;
  double total = 0;
  const std::size_t chunk = 512;
  for (std::size_t i = 0; i < dataset.size(); i += chunk) {
    std::span<const sim::Transition> part(dataset.data() + i,
                                          std::min(chunk, dataset.size() - i));
    Batch<float> batch = make_batch<float>(part, net.cfg);
    forward(net, batch, GSMode::HardDeterministic, ws);
    total += double(ws.loss);
  }
  const double per_object = total / count_objects(dataset);
  return per_object / (net.cfg.input_scale * net.cfg.input_scale);  // back to cm^2
}

TrainResult train(const std::vector<sim::Transition>& train_set,
                  const std::vector<sim::Transition>& val_set, const NetConfig& net_cfg,
                  const TrainConfig& train_cfg) {
  net_cfg.validate();
  train_cfg.validate();
  if (train_set.empty()) throw sim::ContractViolation("train: empty dataset");

  TrainResult result;
  result.net = TrainNet::make(net_cfg, train_cfg.seed);
  auto params = tensor_refs(result.net);

  NetGrads<float> grads = NetGrads<float>::like(result.net);
  auto grad_refs = tensor_refs(grads.store);
  Adam adam;
  adam.init(params);

  std::mt19937_64 shuffle_rng(train_cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::mt19937_64 noise_rng(train_cfg.seed ^ 0xbf58476d1ce4e5b9ull);

  std::vector<int> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  result.metrics.push_back(
      {0, evaluate_mse(result.net, train_set), evaluate_mse(result.net, val_set)});

  Workspace<float> ws;
  TrainNet snapshot = result.net;
  const double inv_scale2 = 1.0 / (net_cfg.input_scale * net_cfg.input_scale);

  for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0;
    bool finite = true;
    for (std::size_t start = 0; start < order.size() && finite;
         start += std::size_t(train_cfg.batch_size)) {
      const std::size_t count = std::min(std::size_t(train_cfg.batch_size),
                                         order.size() - start);
      Batch<float> batch = make_batch<float>(
          train_set, std::span<const int>(order.data() + start, count), net_cfg);
      sample_gs_noise(ws, batch, net_cfg, noise_rng);
      forward(result.net, batch, GSMode::SampledSoft, ws);
      if (!std::isfinite(double(ws.loss))) {
        finite = false;
        break;
      }
      epoch_loss += double(ws.loss);
      grads.zero();
      backward(result.net, batch, GSMode::SampledSoft, ws, grads);
      clip_gradients(grad_refs, train_cfg.grad_clip_norm);
      adam.update(params, grad_refs, train_cfg.learning_rate);
    }
    if (!finite) {
      result.net = snapshot;  // last epoch that completed
      result.diverged = true;
      break;
    }
    snapshot = result.net;
    EpochMetrics em;
    em.epoch = epoch;
    em.train_mse = epoch_loss / count_objects(train_set) * inv_scale2;
    em.val_mse = evaluate_mse(result.net, val_set);
    result.metrics.push_back(em);
  }
  return result;
}

std::vector<double> rollout_error(const TrainNet& net,
                                  const std::vector<sim::Transition>& dataset, int horizon) {
  if (horizon < 1) throw sim::ContractViolation("rollout_error: horizon must be >= 1");

  // Rebuild episodes from the recorded bookkeeping.
  std::map<int, std::vector<const sim::Transition*>> episodes;
  for (const auto& t : dataset) episodes[t.episode].push_back(&t);
  for (auto& [ep, steps] : episodes)
    std::sort(steps.begin(), steps.end(),
              [](const auto* a, const auto* b) { return a->step < b->step; });

  std::vector<double> per_step(static_cast<std::size_t>(horizon), 0.0);
  int used = 0;
  for (const auto& [ep, steps] : episodes) {
    if (static_cast<int>(steps.size()) < horizon) continue;
    ++used;
    std::map<sim::ObjectId, std::array<double, 6>> running;
    for (int t = 0; t < horizon; ++t) {
      const sim::Transition& rec = *steps[std::size_t(t)];
      std::vector<std::array<double, 6>> inputs;
      for (std::size_t i = 0; i < rec.ids.size(); ++i) {
        auto it = running.find(rec.ids[i]);
        if (it == running.end()) it = running.emplace(rec.ids[i], rec.pre[i]).first;
        inputs.push_back(it->second);
      }
      auto predicted = predict_effects(net, inputs, rec.action, rec.ids);
      double err = 0;
      for (std::size_t i = 0; i < rec.ids.size(); ++i) {
        std::array<double, 6> next{};
        for (int d = 0; d < 6; ++d) {
          // True carry displacement comes from the record, not the model.
          double carry = rec.post[i][d] - rec.pre[i][d] - rec.effects[i][d];
          next[d] = inputs[i][d] + predicted[i][d] + carry;
          double diff = next[d] - rec.post[i][d];
          err += diff * diff;
        }
        running[rec.ids[i]] = next;
      }
      per_step[std::size_t(t)] += err;
    }
  }
  if (used == 0) throw sim::ContractViolation("rollout_error: no episode long enough");

  std::vector<double> cumulative(per_step.size());
  double acc = 0;
  for (std::size_t t = 0; t < per_step.size(); ++t) {
    acc += per_step[t] / used;
    cumulative[t] = acc;
  }
  return cumulative;
}

void save_metrics(const std::string& path, const std::vector<EpochMetrics>& metrics) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "epoch,train_mse,val_mse\n";
  char buf[128];
  for (const auto& m : metrics) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g\n", m.epoch, m.train_mse, m.val_mse);
    out << buf;
  }
}

std::vector<EpochMetrics> load_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<EpochMetrics> out;
  while (std::getline(in, line)) {
    EpochMetrics m;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf", &m.epoch, &m.train_mse, &m.val_mse) == 3)
      out.push_back(m);
  }
  return out;
}

}  // namespace relsym::net
