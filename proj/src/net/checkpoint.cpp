#include "relsym/net/checkpoint.hpp"

#include <cstdint>
#include <fstream>

namespace relsym::net {

namespace {

constexpr char kMagic[8] = {'R', 'S', 'Y', 'M', 'C', 'K', 'P', '1'};

template <typename T>
void write_pod(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const RelationalNet<float>& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kMagic, sizeof kMagic);
  write_pod<std::int32_t>(out, 1);  // version
  const NetConfig& c = net.cfg;
  for (int v : {c.d_o, c.d_k, c.n_heads, c.d_att, c.d_z, c.d_a, c.hidden})
    write_pod<std::int32_t>(out, v);
  write_pod<double>(out, c.input_scale);
  write_pod<double>(out, c.pre_gs_norm);
  write_pod<double>(out, c.temperature);
  write_pod<std::uint8_t>(out, c.agg == AggVariant::SumSelf ? 1 : 0);
  write_pod<std::uint8_t>(out, c.attention == AttentionMode::AllOnes ? 1 : 0);

  auto refs = tensor_refs(const_cast<RelationalNet<float>&>(net));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(refs.size()));
  for (const auto& t : refs) {
    write_pod<std::uint16_t>(out, static_cast<std::uint16_t>(t.shape.name.size()));
    out.write(t.shape.name.data(), static_cast<std::streamsize>(t.shape.name.size()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.rows));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.cols));
    for (Eigen::Index i = 0; i < t.size(); ++i) write_pod<double>(out, double(t.data[i]));
  }
}

RelationalNet<float> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::string(magic, 8) != std::string(kMagic, 8))
    throw std::runtime_error("checkpoint: bad magic in " + path);
  auto version = read_pod<std::int32_t>(in);
  if (version != 1) throw std::runtime_error("checkpoint: unsupported version");

  NetConfig c;
  c.d_o = read_pod<std::int32_t>(in);
  c.d_k = read_pod<std::int32_t>(in);
  c.n_heads = read_pod<std::int32_t>(in);
  c.d_att = read_pod<std::int32_t>(in);
  c.d_z = read_pod<std::int32_t>(in);
  c.d_a = read_pod<std::int32_t>(in);
  c.hidden = read_pod<std::int32_t>(in);
  c.input_scale = read_pod<double>(in);
  c.pre_gs_norm = read_pod<double>(in);
  c.temperature = read_pod<double>(in);
  c.agg = read_pod<std::uint8_t>(in) ? AggVariant::SumSelf : AggVariant::SumSources;
  c.attention = read_pod<std::uint8_t>(in) ? AttentionMode::AllOnes : AttentionMode::Relational;
  c.validate();

  RelationalNet<float> net = RelationalNet<float>::make(c, 0);
  auto refs = tensor_refs(net);
  auto n_tensors = read_pod<std::uint32_t>(in);
  if (n_tensors != refs.size())
    throw std::runtime_error("checkpoint: tensor count mismatch (layer shapes inconsistent)");
  for (auto& t : refs) {
    auto name_len = read_pod<std::uint16_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    auto rows = read_pod<std::uint32_t>(in);
    auto cols = read_pod<std::uint32_t>(in);
    if (name != t.shape.name || rows != t.shape.rows || cols != t.shape.cols)
      throw std::runtime_error("checkpoint: tensor mismatch at " + t.shape.name + " vs " + name);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data[i] = float(read_pod<double>(in));
  }
  return net;
}

}  // namespace relsym::net
