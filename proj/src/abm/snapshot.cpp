#include <bit>
#include <cstring>
#include <fstream>

#include "sepsis/abm/simulation.hpp"

namespace sepsis::abm {
namespace {

class LeWriter {
 public:
  explicit LeWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  template <typename T>
  void uint(T v) {
    for (std::size_t b = 0; b < sizeof(T); ++b) out_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const char* s, std::size_t n) { out_.insert(out_.end(), s, s + n); }

 private:
  std::vector<std::uint8_t>& out_;
};

}  // namespace

std::vector<std::uint8_t> snapshot_bytes(const SimState& s) {
  std::vector<std::uint8_t> out;
  LeWriter w(out);
  const int n = s.side();
  w.bytes("IIRA", 4);
  w.uint<std::uint16_t>(kSnapshotVersion);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(n));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(n));
  w.uint<std::uint64_t>(static_cast<std::uint64_t>(s.frame_count));
  const Rng::State& rs = s.rng.state();
  for (auto v : rs.key) w.uint<std::uint32_t>(v);
  for (auto v : rs.counter) w.uint<std::uint32_t>(v);
  for (auto v : rs.block) w.uint<std::uint32_t>(v);
  w.uint<std::uint32_t>(rs.block_pos);
  w.uint<std::uint8_t>(rs.has_spare_normal ? 1 : 0);
  w.f64(rs.spare_normal);
  for (double v : s.current_intervention.values) w.f64(v);

  // Bucket leukocytes per grid point, keeping their global order.
  std::vector<std::vector<const CellAgent*>> buckets(s.num_cells());
  for (const CellAgent& a : s.leukocytes) {
    buckets[s.infection.index(a.x, a.y)].push_back(&a);
  }
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const std::size_t i = s.infection.index(x, y);
      for (int j = 0; j < kNumCytokines; ++j) w.f64(s.cytokines[j][i]);
      w.f64(s.infection[i]);
      w.f64(s.damage[i]);
      std::array<double, kNumReceptors> receptors{};
      for (const CellAgent* a : buckets[i]) {
        for (int r = 0; r < kNumReceptors; ++r) receptors[r] += a->receptor_state[r];
      }
      for (double v : receptors) w.f64(v);
      w.uint<std::uint8_t>(s.endothelial_active[i]);
      w.uint<std::uint32_t>(static_cast<std::uint32_t>(buckets[i].size()));
      for (const CellAgent* a : buckets[i]) {
        w.uint<std::uint8_t>(static_cast<std::uint8_t>(a->kind));
        w.uint<std::uint8_t>(static_cast<std::uint8_t>(a->lineage));
        w.uint<std::uint32_t>(a->age);
        w.uint<std::uint32_t>(a->lifespan);
        w.f64(a->activation);
        for (double v : a->receptor_state) w.f64(v);
        w.uint<std::uint8_t>(a->in_tissue ? 1 : 0);
      }
    }
  }
  return out;
}

void write_snapshot(const SimState& state, const std::string& path) {
  const auto bytes = snapshot_bytes(state);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace sepsis::abm
