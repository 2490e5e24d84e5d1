#include "sepsis/nn/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace sepsis::nn {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v), 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(b_.begin() + pos_, b_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw std::runtime_error("checkpoint truncated");
  }
  bool at_end() const { return pos_ == b_.size(); }

 private:
  std::uint64_t le(int n) {
    need(n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t(b_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'S', 'E', 'P', 'C'};

}  // namespace

const Network& PolicyCheckpoint::network(const std::string& name) const {
  for (const auto& n : networks) {
    if (n.name == name) return n.network;
  }
  throw std::out_of_range("checkpoint has no network '" + name + "'");
}

bool PolicyCheckpoint::has(const std::string& name) const {
  for (const auto& n : networks) {
    if (n.name == name) return true;
  }
  return false;
}

std::vector<std::uint8_t> checkpoint_bytes(const PolicyCheckpoint& ckpt) {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u16(kCheckpointVersion);
  w.u64(ckpt.config_hash);
  w.i64(ckpt.episode);
  w.u32(static_cast<std::uint32_t>(ckpt.networks.size()));
  for (const auto& [name, net] : ckpt.networks) {
    const NetworkSpec& s = net.spec();
    w.str(name);
    w.u32(static_cast<std::uint32_t>(s.layer_sizes.size()));
    for (int v : s.layer_sizes) w.u32(static_cast<std::uint32_t>(v));
    w.u8(static_cast<std::uint8_t>(s.hidden_activation));
    w.u8(static_cast<std::uint8_t>(s.output_activation));
    w.i32(s.action_injection_layer);
    w.i32(s.action_size);
  }
  const env::NormalizationSpec& n = ckpt.normalization;
  w.u32(static_cast<std::uint32_t>(n.size()));
  for (double v : n.offsets) w.f64(v);
  for (double v : n.scales) w.f64(v);
  w.str(n.provenance);
  w.i64(n.episodes);
  for (const auto& nn : ckpt.networks) nn.network.params().for_each([&](double v) { w.f64(v); });
  return w.take();
}

PolicyCheckpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) throw std::runtime_error("not a checkpoint file");
  }
  const std::uint16_t version = r.u16();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  PolicyCheckpoint ckpt;
  ckpt.config_hash = r.u64();
  ckpt.episode = r.i64();
  const std::uint32_t count = r.u32();
  if (count > 64) throw std::runtime_error("implausible network count");
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedNetwork nn;
    nn.name = r.str();
    NetworkSpec s;
    const std::uint32_t layers = r.u32();
    if (layers > 1024) throw std::runtime_error("implausible layer count");
    for (std::uint32_t k = 0; k < layers; ++k) s.layer_sizes.push_back(static_cast<int>(r.u32()));
    const std::uint8_t hidden = r.u8();
    const std::uint8_t output = r.u8();
    if (hidden > 2 || output > 2) throw std::runtime_error("bad activation code");
    s.hidden_activation = static_cast<Activation>(hidden);
    s.output_activation = static_cast<Activation>(output);
    s.action_injection_layer = r.i32();
    s.action_size = r.i32();
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("bad network spec: ") + e.what());
    }
    nn.network = Network(std::move(s));
    ckpt.networks.push_back(std::move(nn));
  }
  const std::uint32_t dim = r.u32();
  r.need(std::size_t(dim) * 16);
  ckpt.normalization.offsets.resize(dim);
  ckpt.normalization.scales.resize(dim);
  for (auto& v : ckpt.normalization.offsets) v = r.f64();
  for (auto& v : ckpt.normalization.scales) v = r.f64();
  ckpt.normalization.provenance = r.str();
  ckpt.normalization.episodes = r.i64();
  for (auto& nn : ckpt.networks) {
    r.need(nn.network.params().num_scalars() * 8);
    nn.network.params().for_each([&](double& v) { v = r.f64(); });
  }
  if (!r.at_end()) throw std::runtime_error("trailing bytes in checkpoint");
  return ckpt;
}

void save_checkpoint(const PolicyCheckpoint& ckpt, const std::string& path) {
  const auto bytes = checkpoint_bytes(ckpt);
  // Write then rename so an interrupted save never leaves a torn file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + tmp);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

PolicyCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace sepsis::nn
