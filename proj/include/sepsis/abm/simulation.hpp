#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sepsis/abm/field.hpp"
#include "sepsis/abm/params.hpp"
#include "sepsis/abm/rng.hpp"

namespace sepsis::abm {

using CytokineVector = std::array<double, kNumCytokines>;

// Per-cytokine intervention, each component in [-1, 1].
struct ActionVector {
  std::array<double, kNumCytokines> values{};

  static ActionVector zeros() { return {}; }
  bool is_zero() const;
  double l1_norm() const;
  ActionVector clamped() const;
  bool operator==(const ActionVector&) const = default;
};

enum class AgentKind : std::uint8_t {
  kEndothelial = 0,
  kMacrophage,
  kNeutrophil,
  kTh0,
  kTh1,
  kTh2,
  kProgenitor,
};
const char* agent_kind_name(AgentKind kind);

struct CellAgent {
  AgentKind kind = AgentKind::kEndothelial;
  AgentKind lineage = AgentKind::kEndothelial;  // what a progenitor spawns
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::uint32_t age = 0;
  std::uint32_t lifespan = 0;
  double activation = 0.0;
  std::array<double, kNumReceptors> receptor_state{};
  bool in_tissue = false;

  bool operator==(const CellAgent&) const = default;
};

struct SystemTotals {
  double total_damage_pct = 0.0;
  double total_infection_pct = 0.0;

  bool operator==(const SystemTotals&) const = default;
};

// Full grid state. Fields are stored per quantity; `cell()` assembles the
// per-point view.
struct SimState {
  SimulationParams params;
  std::array<Field, kNumCytokines> cytokines;
  Field infection;
  Field damage;
  std::vector<std::uint8_t> endothelial_active;
  std::vector<CellAgent> leukocytes;  // includes progenitors
  std::int64_t frame_count = 0;
  Rng rng;
  ActionVector current_intervention;

  int side() const { return params.grid_side; }
  std::size_t num_cells() const { return infection.size(); }
};

struct GridCell {
  CytokineVector cytokines{};
  std::array<double, kNumReceptors> receptor_concentrations{};
  double infection = 0.0;
  double damage = 0.0;
  CellAgent endothelial_agent;
  std::vector<CellAgent> leukocytes;
};
GridCell cell_view(const SimState& state, int x, int y);

class NumericalBlowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// f(x; a): 10^a x for a <= 0, x + (10^a - 1) for a >= 0.
double intervene(double x, double a);

// new c_i = max(0, intervene(lambda . [c; 1], a)).
double update_cytokine(const LambdaRow& lambda, const CytokineVector& c, double a);
// Dynamic-size form; `c_aug` must already carry the trailing 1. Both spans
// must have length 13, otherwise std::invalid_argument.
double update_cytokine(std::span<const double> lambda, std::span<const double> c_aug, double a);

SimState init_simulation(const SimulationParams& params, std::uint64_t seed,
                         std::uint64_t stream = 0);

// Advances one frame. Interventions must lie in [-1,1]^12. Throws
// NumericalBlowup if any field becomes non-finite.
SystemTotals step_frame(SimState& state, const ActionVector& interventions);

SystemTotals system_totals(const SimState& state);

enum class FrameOutcome { kContinue, kDeath };
inline constexpr double kDeathDamagePct = 80.0;
FrameOutcome check_outcome(const SystemTotals& totals, std::int64_t frame_count);

// Leukocyte counts in observation order: macrophage, neutrophil, Th0, Th1, Th2.
std::array<double, 5> leukocyte_counts(const SimState& state);
// Sum of receptor_state over all leukocytes.
std::array<double, kNumReceptors> receptor_totals(const SimState& state);

// Hook for the antibody mechanism, which has no published parameterization.
// Runs only when constants.antibody_enabled; currently leaves the state as is.
void administer_antibodies(SimState& state);

// Little-endian binary snapshot ("IIRA"); see README for the layout.
inline constexpr std::uint16_t kSnapshotVersion = 1;
std::vector<std::uint8_t> snapshot_bytes(const SimState& state);
void write_snapshot(const SimState& state, const std::string& path);

}  // namespace sepsis::abm
