#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace relsym::net {

enum class GSMode { SampledSoft, HardDeterministic };
enum class AttentionMode { Relational, AllOnes };
enum class AggVariant { SumSources, SumSelf };  // sum z_j over relations vs scale z_i

struct GSConfig {
  double temperature = 1.0;
  GSMode mode = GSMode::SampledSoft;

  void validate() const {
    if (temperature <= 0.0) throw std::invalid_argument("GSConfig: temperature must be > 0");
  }
};

// Architecture and fixed preprocessing; persisted in checkpoints.
struct NetConfig {
  int d_o = 6;      // object feature dimension
  int d_k = 1;      // unary symbol bits
  int n_heads = 3;  // relation types
  int d_att = 32;   // query/key dimension
  int d_z = 32;     // aggregated representation per head
  int d_a = 8;      // per-object action encoding
  int hidden = 128;
  double input_scale = 0.01;  // features and effects are scaled by this before the net
  double pre_gs_norm = 3.0;   // weight/input norm ahead of GS layers; <= 0 disables
  double temperature = 1.0;
  AggVariant agg = AggVariant::SumSources;
  AttentionMode attention = AttentionMode::Relational;

  void validate() const {
    if (d_o < 1 || d_k < 1 || n_heads < 1 || d_att < 1 || d_z < 1 || d_a < 1 || hidden < 1)
      throw std::invalid_argument("NetConfig: dimensions must be positive");
    if (temperature <= 0) throw std::invalid_argument("NetConfig: temperature must be > 0");
    if (input_scale <= 0) throw std::invalid_argument("NetConfig: input_scale must be > 0");
  }
};

struct TrainConfig {
  int epochs = 4000;
  int batch_size = 128;
  double learning_rate = 1e-4;
  double grad_clip_norm = 10.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (epochs < 1 || batch_size < 1) throw std::invalid_argument("TrainConfig: bad sizes");
    if (learning_rate <= 0) throw std::invalid_argument("TrainConfig: bad learning rate");
  }
};

struct TrainingFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace relsym::net
