#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "relsym/net/config.hpp"

namespace relsym::net {

// Logistic noise L = log(u) - log(1 - u) for the concrete relaxation.
inline double sample_logistic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = std::clamp(dist(rng), 1e-9, 1.0 - 1e-9);
  return std::log(u) - std::log(1.0 - u);
}

template <typename S>
inline S gs_forward(S logit, S noise, const GSConfig& cfg) {
  if (cfg.mode == GSMode::HardDeterministic) return logit > S(0) ? S(1) : S(0);
  S x = (logit + noise) / S(cfg.temperature);
  return S(1) / (S(1) + std::exp(-x));
}

// d(out)/d(logit); straight-through identity when the forward was hard.
template <typename S>
inline S gs_backward(S out, const GSConfig& cfg) {
  if (cfg.mode == GSMode::HardDeterministic) return S(1);
  return out * (S(1) - out) / S(cfg.temperature);
}

// Scalar convenience entry matching the rest of the pipeline: samples its own
// noise from the given seed in SampledSoft mode.
inline double gumbel_sigmoid(double logit, const GSConfig& cfg, std::uint64_t noise_seed) {
  cfg.validate();
  if (cfg.mode == GSMode::HardDeterministic) return logit > 0.0 ? 1.0 : 0.0;
  std::mt19937_64 rng(noise_seed);
  return gs_forward(logit, sample_logistic(rng), cfg);
}

}  // namespace relsym::net
