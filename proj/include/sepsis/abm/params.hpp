#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace sepsis::abm {

inline constexpr int kNumCytokines = 12;
inline constexpr int kLambdaLength = kNumCytokines + 1;  // trailing constant term
inline constexpr int kNumReceptors = 2;
inline constexpr int kDefaultGridSide = 101;

// Cytokine roster. Indices 0..2 are fixed; the remaining labels only name
// the slots the mechanism tables refer to.
enum Cytokine : int {
  kPaf = 0,
  kIl1 = 1,
  kIfng = 2,
  kTnf = 3,
  kStnfr = 4,
  kSil1r = 5,
  kIl1ra = 6,
  kIl4 = 7,
  kIl8 = 8,
  kIl10 = 9,
  kIl12 = 10,
  kGcsf = 11,
};

// Receptor slots on leukocytes.
enum Receptor : int { kTnfReceptor = 0, kIl1Receptor = 1 };

using CytokineLabels = std::array<std::string, kNumCytokines>;
const CytokineLabels& default_cytokine_labels();
// Index of a label in `labels`; throws std::invalid_argument when absent.
int cytokine_index(const CytokineLabels& labels, const std::string& name);

// One regulatory row: 12 cytokine coefficients then the direct secretion term.
using LambdaRow = std::array<double, kLambdaLength>;

struct SecretionRule {
  int cytokine = 0;
  LambdaRow lambda{};
};

// Agent roles that secrete. Each role owns a list of lambda rows.
enum class SecretingRole : int {
  kEndothelialActive = 0,
  kNeutrophilActive,
  kMacrophageProInflammatory,
  kMacrophageAntiInflammatory,
  kTh1,
  kTh2,
  kCount
};
inline constexpr int kNumSecretingRoles = static_cast<int>(SecretingRole::kCount);
const char* role_name(SecretingRole role);

struct InfectionConstants {
  double initial_infection = 100.0;
  double initial_damage = 10.0;
  // Logistic growth rate per unit invasiveness.
  double growth_rate = 0.1;
  // Constant innate clearance per frame; small foci below the resulting
  // threshold die out.
  double innate_clearance = 0.0;
  double spread_threshold = 100.0;
  double spread_amount = 10.0;
  double toxin_damage_rate = 0.05;
};

struct EndothelialConstants {
  double tnf_weight = 1.0;
  double il1_weight = 1.0;
  double activation_threshold = 1.0;
  double damage_activation_threshold = 20.0;
  double tnf_damage_rate = 0.0;
  double tnf_damage_threshold = 0.0;
  double heal_rate = 1.0;
  double heal_infection_limit = 1.0;
  double regrow_probability = 0.1;
  // Dead endothelium keeps releasing activation signals at this scale.
  double necrotic_secretion_scale = 0.0;
};

struct RecurrentInjuryConstants {
  int period_frames = 50;
  double infection_amount = 20.0;
};

struct ReceptorConstants {
  double initial_level = 1.0;
  double binding_rate = 0.1;
  double upregulation = 0.1;
  double max_level = 5.0;
  double shedding_fraction = 0.1;
};

struct ProgenitorConstants {
  // Candidate sites; each is viable with `viability` at initialisation.
  int count = 10;
  double viability = 1.0;
  double spawn_base = 0.1;
  double spawn_gain = 0.0;
  int lifespan_min = 50;
  int lifespan_max = 100;
};

struct NeutrophilConstants {
  ProgenitorConstants progenitor;
  double adhesion_paf = 1.0;
  double chemotaxis_bias = 1.0;
  double infection_affinity = 0.0;
  double infection_weight = 1.0;
  double tnf_weight = 1.0;
  double il1_weight = 1.0;
  double paf_weight = 1.0;
  double il10_weight = 0.0;
  double activation_threshold = 1.0;
  double burst_kill = 5.0;
  double burst_damage = 1.0;
  double burst_paf_gain = 0.0;
  double burst_paf_half = 1.0;
  // Fraction of burst damage also dealt to each Moore neighbour.
  double burst_spill = 0.0;
  int tissue_lifespan = 20;
};

struct MacrophageConstants {
  ProgenitorConstants progenitor;
  double adhesion_paf = 1.0;
  double chemotaxis_bias = 1.0;
  double infection_affinity = 0.0;
  double infection_weight = 1.0;
  double tnf_weight = 1.0;
  double ifng_weight = 1.0;
  double il1_weight = 0.0;
  double paf_weight = 0.0;
  double il10_weight = 1.0;
  double il4_weight = 1.0;
  double activation_threshold = 1.0;
  double phagocytosis_kill = 5.0;
  double ifng_kill_gain = 0.0;
  int tissue_lifespan = 50;
};

struct HelperTConstants {
  ProgenitorConstants progenitor;
  // Th0 cells commit against systemic (lymphatic) signals. Th1 drive is
  // IFNg + il12_weight * IL-12, Th2 drive is IL-4 + il10_weight * IL-10.
  // Once their sum reaches signal_threshold a Th0 commits with
  // differentiation_probability per frame, choosing Th1 by its share.
  double differentiation_probability = 0.1;
  double signal_threshold = 0.1;
  double il12_weight = 1.0;
  double il10_weight = 1.0;
};

// Every mechanism coefficient. Loaded from the versioned constants table.
struct RuleConstants {
  std::string version;
  CytokineLabels labels = default_cytokine_labels();
  std::array<double, kNumCytokines> diffusion{};
  std::array<double, kNumCytokines> degradation{};
  InfectionConstants infection;
  EndothelialConstants endothelial;
  RecurrentInjuryConstants recurrent_injury;
  ReceptorConstants receptor;
  NeutrophilConstants neutrophil;
  MacrophageConstants macrophage;
  HelperTConstants helper_t;
  int max_leukocytes_per_cell_area = 1;  // cap = this * side^2
  bool antibody_enabled = false;
  std::array<std::vector<SecretionRule>, kNumSecretingRoles> secretion;

  const std::vector<SecretionRule>& rules(SecretingRole role) const {
    return secretion[static_cast<int>(role)];
  }
};

// One patient parameterization plus the rule constants it runs under.
struct SimulationParams {
  int initial_injury_size = 0;
  double microbial_invasiveness = 1.0;
  double microbial_toxigenesis = 1.0;
  double environmental_toxicity = 0.0;
  double host_resilience = 1.0;
  double frame_minutes = 28.0;
  int grid_side = kDefaultGridSide;
  RuleConstants constants;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

// Frames needed to cover `hours` of simulated time.
int frames_for_hours(double hours, double frame_minutes);

RuleConstants rule_constants_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RuleConstants& c);
RuleConstants load_rule_constants(const std::string& path);

// Patient fields only (the five parameters, frame length, grid side).
struct PatientParams {
  int initial_injury_size = 0;
  double microbial_invasiveness = 1.0;
  double microbial_toxigenesis = 1.0;
  double environmental_toxicity = 0.0;
  double host_resilience = 1.0;
};
PatientParams patient_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PatientParams& p);
SimulationParams make_params(const PatientParams& p, const RuleConstants& c, int grid_side,
                             double frame_minutes);
PatientParams patient_of(const SimulationParams& p);

}  // namespace sepsis::abm
