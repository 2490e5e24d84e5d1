#include "sepsis/abm/params.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sepsis::abm {
namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing key '") + key + "'");
  j.at(key).get_to(out);
}

void read_progenitor(const json& j, ProgenitorConstants& p) {
  read(j, "count", p.count);
  read(j, "viability", p.viability);
  read(j, "spawn_base", p.spawn_base);
  read(j, "spawn_gain", p.spawn_gain);
  read(j, "lifespan_min", p.lifespan_min);
  read(j, "lifespan_max", p.lifespan_max);
}

json write_progenitor(const ProgenitorConstants& p) {
  return {{"count", p.count},
          {"viability", p.viability},
          {"spawn_base", p.spawn_base},
          {"spawn_gain", p.spawn_gain},
          {"lifespan_min", p.lifespan_min},
          {"lifespan_max", p.lifespan_max}};
}

SecretingRole role_from_name(const std::string& name) {
  for (int r = 0; r < kNumSecretingRoles; ++r) {
    if (name == role_name(static_cast<SecretingRole>(r))) return static_cast<SecretingRole>(r);
  }
  throw std::invalid_argument("unknown secreting role '" + name + "'");
}

}  // namespace

const CytokineLabels& default_cytokine_labels() {
  static const CytokineLabels labels = {"PAF",   "IL1", "IFNg", "TNF", "sTNFr", "sIL1r",
                                        "IL1ra", "IL4", "IL8",  "IL10", "IL12", "GCSF"};
  return labels;
}

int cytokine_index(const CytokineLabels& labels, const std::string& name) {
  for (int i = 0; i < kNumCytokines; ++i) {
    if (labels[i] == name) return i;
  }
  throw std::invalid_argument("unknown cytokine '" + name + "'");
}

const char* role_name(SecretingRole role) {
  switch (role) {
    case SecretingRole::kEndothelialActive: return "endothelial_active";
    case SecretingRole::kNeutrophilActive: return "neutrophil_active";
    case SecretingRole::kMacrophageProInflammatory: return "macrophage_proinflammatory";
    case SecretingRole::kMacrophageAntiInflammatory: return "macrophage_antiinflammatory";
    case SecretingRole::kTh1: return "th1";
    case SecretingRole::kTh2: return "th2";
    case SecretingRole::kCount: break;
  }
  return "?";
}

void SimulationParams::validate() const {
  if (initial_injury_size < 0 || microbial_invasiveness < 0 || microbial_toxigenesis < 0 ||
      environmental_toxicity < 0 || host_resilience < 0) {
    throw std::invalid_argument("patient parameters must be nonnegative");
  }
  if (grid_side < 3) throw std::invalid_argument("grid side must be at least 3");
  if (2 * initial_injury_size >= grid_side) {
    throw std::invalid_argument("initial injury radius must be smaller than half the grid side");
  }
  if (!(frame_minutes > 0)) throw std::invalid_argument("frame_minutes must be positive");
  for (int i = 0; i < kNumCytokines; ++i) {
    if (constants.diffusion[i] < 0 || constants.diffusion[i] > 1 ||
        constants.degradation[i] < 0 || constants.degradation[i] > 1) {
      throw std::invalid_argument("diffusion/degradation coefficients must lie in [0,1]");
    }
  }
}

int frames_for_hours(double hours, double frame_minutes) {
  return static_cast<int>(std::ceil(hours * 60.0 / frame_minutes - 1e-9));
}

RuleConstants rule_constants_from_json(const json& j) {
  RuleConstants c;
  read(j, "version", c.version);
  if (j.contains("labels")) {
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    if (labels.size() != kNumCytokines) throw std::invalid_argument("labels must list 12 names");
    if (labels[0] != "PAF" || labels[1] != "IL1" || labels[2] != "IFNg") {
      throw std::invalid_argument("cytokine slots 0..2 are fixed to PAF, IL1, IFNg");
    }
    for (int i = 0; i < kNumCytokines; ++i) c.labels[i] = labels[i];
  }

  const json& field = j.at("cytokine_fields");
  for (int i = 0; i < kNumCytokines; ++i) {
    const json& entry = field.at(c.labels[i]);
    read(entry, "diffusion", c.diffusion[i]);
    read(entry, "degradation", c.degradation[i]);
  }

  const json& inf = j.at("infection");
  read(inf, "initial_infection", c.infection.initial_infection);
  read(inf, "initial_damage", c.infection.initial_damage);
  read(inf, "growth_rate", c.infection.growth_rate);
  read(inf, "spread_threshold", c.infection.spread_threshold);
  read(inf, "spread_amount", c.infection.spread_amount);
  read(inf, "toxin_damage_rate", c.infection.toxin_damage_rate);
  read(inf, "innate_clearance", c.infection.innate_clearance);

  const json& ec = j.at("endothelial");
  read(ec, "tnf_weight", c.endothelial.tnf_weight);
  read(ec, "il1_weight", c.endothelial.il1_weight);
  read(ec, "activation_threshold", c.endothelial.activation_threshold);
  read(ec, "damage_activation_threshold", c.endothelial.damage_activation_threshold);
  read(ec, "tnf_damage_rate", c.endothelial.tnf_damage_rate);
  read(ec, "tnf_damage_threshold", c.endothelial.tnf_damage_threshold);
  read(ec, "heal_rate", c.endothelial.heal_rate);
  read(ec, "heal_infection_limit", c.endothelial.heal_infection_limit);
  read(ec, "regrow_probability", c.endothelial.regrow_probability);
  read(ec, "necrotic_secretion_scale", c.endothelial.necrotic_secretion_scale);

  const json& ri = j.at("recurrent_injury");
  read(ri, "period_frames", c.recurrent_injury.period_frames);
  read(ri, "infection_amount", c.recurrent_injury.infection_amount);

  const json& rc = j.at("receptor");
  read(rc, "initial_level", c.receptor.initial_level);
  read(rc, "binding_rate", c.receptor.binding_rate);
  read(rc, "upregulation", c.receptor.upregulation);
  read(rc, "max_level", c.receptor.max_level);
  read(rc, "shedding_fraction", c.receptor.shedding_fraction);

  const json& pmn = j.at("neutrophil");
  read_progenitor(pmn.at("progenitor"), c.neutrophil.progenitor);
  read(pmn, "adhesion_paf", c.neutrophil.adhesion_paf);
  read(pmn, "chemotaxis_bias", c.neutrophil.chemotaxis_bias);
  read(pmn, "infection_affinity", c.neutrophil.infection_affinity);
  read(pmn, "infection_weight", c.neutrophil.infection_weight);
  read(pmn, "tnf_weight", c.neutrophil.tnf_weight);
  read(pmn, "il1_weight", c.neutrophil.il1_weight);
  read(pmn, "paf_weight", c.neutrophil.paf_weight);
  read(pmn, "il10_weight", c.neutrophil.il10_weight);
  read(pmn, "activation_threshold", c.neutrophil.activation_threshold);
  read(pmn, "burst_kill", c.neutrophil.burst_kill);
  read(pmn, "burst_damage", c.neutrophil.burst_damage);
  read(pmn, "burst_paf_gain", c.neutrophil.burst_paf_gain);
  read(pmn, "burst_paf_half", c.neutrophil.burst_paf_half);
  read(pmn, "burst_spill", c.neutrophil.burst_spill);
  read(pmn, "tissue_lifespan", c.neutrophil.tissue_lifespan);

  const json& mac = j.at("macrophage");
  read_progenitor(mac.at("progenitor"), c.macrophage.progenitor);
  read(mac, "adhesion_paf", c.macrophage.adhesion_paf);
  read(mac, "chemotaxis_bias", c.macrophage.chemotaxis_bias);
  read(mac, "infection_affinity", c.macrophage.infection_affinity);
  read(mac, "infection_weight", c.macrophage.infection_weight);
  read(mac, "tnf_weight", c.macrophage.tnf_weight);
  read(mac, "ifng_weight", c.macrophage.ifng_weight);
  read(mac, "il1_weight", c.macrophage.il1_weight);
  read(mac, "paf_weight", c.macrophage.paf_weight);
  read(mac, "il10_weight", c.macrophage.il10_weight);
  read(mac, "il4_weight", c.macrophage.il4_weight);
  read(mac, "activation_threshold", c.macrophage.activation_threshold);
  read(mac, "phagocytosis_kill", c.macrophage.phagocytosis_kill);
  read(mac, "ifng_kill_gain", c.macrophage.ifng_kill_gain);
  read(mac, "tissue_lifespan", c.macrophage.tissue_lifespan);

  const json& th = j.at("helper_t");
  read_progenitor(th.at("progenitor"), c.helper_t.progenitor);
  read(th, "differentiation_probability", c.helper_t.differentiation_probability);
  read(th, "signal_threshold", c.helper_t.signal_threshold);
  read(th, "il12_weight", c.helper_t.il12_weight);
  read(th, "il10_weight", c.helper_t.il10_weight);

  read(j, "max_leukocytes_per_cell_area", c.max_leukocytes_per_cell_area);
  read(j, "antibody_enabled", c.antibody_enabled);

  for (const auto& [role_key, rows] : j.at("secretion").items()) {
    const SecretingRole role = role_from_name(role_key);
    auto& out = c.secretion[static_cast<int>(role)];
    for (const auto& [target, coeffs] : rows.items()) {
      SecretionRule rule;
      rule.cytokine = cytokine_index(c.labels, target);
      rule.lambda.fill(0.0);
      for (const auto& [source, value] : coeffs.items()) {
        const double v = value.get<double>();
        if (source == "const") {
          rule.lambda[kNumCytokines] = v;
        } else {
          rule.lambda[cytokine_index(c.labels, source)] = v;
        }
      }
      out.push_back(rule);
    }
  }
  return c;
}

json to_json(const RuleConstants& c) {
  json j;
  j["version"] = c.version;
  j["labels"] = std::vector<std::string>(c.labels.begin(), c.labels.end());
  for (int i = 0; i < kNumCytokines; ++i) {
    j["cytokine_fields"][c.labels[i]] = {{"diffusion", c.diffusion[i]},
                                         {"degradation", c.degradation[i]}};
  }
  const auto& inf = c.infection;
  j["infection"] = {{"initial_infection", inf.initial_infection},
                    {"initial_damage", inf.initial_damage},
                    {"growth_rate", inf.growth_rate},
                    {"spread_threshold", inf.spread_threshold},
                    {"spread_amount", inf.spread_amount},
                    {"toxin_damage_rate", inf.toxin_damage_rate},
                    {"innate_clearance", inf.innate_clearance}};
  const auto& ec = c.endothelial;
  j["endothelial"] = {{"tnf_weight", ec.tnf_weight},
                      {"il1_weight", ec.il1_weight},
                      {"activation_threshold", ec.activation_threshold},
                      {"damage_activation_threshold", ec.damage_activation_threshold},
                      {"tnf_damage_rate", ec.tnf_damage_rate},
                      {"tnf_damage_threshold", ec.tnf_damage_threshold},
                      {"heal_rate", ec.heal_rate},
                      {"heal_infection_limit", ec.heal_infection_limit},
                      {"regrow_probability", ec.regrow_probability},
                      {"necrotic_secretion_scale", ec.necrotic_secretion_scale}};
  j["recurrent_injury"] = {{"period_frames", c.recurrent_injury.period_frames},
                           {"infection_amount", c.recurrent_injury.infection_amount}};
  const auto& rc = c.receptor;
  j["receptor"] = {{"initial_level", rc.initial_level},
                   {"binding_rate", rc.binding_rate},
                   {"upregulation", rc.upregulation},
                   {"max_level", rc.max_level},
                   {"shedding_fraction", rc.shedding_fraction}};
  const auto& pmn = c.neutrophil;
  j["neutrophil"] = {{"progenitor", write_progenitor(pmn.progenitor)},
                     {"adhesion_paf", pmn.adhesion_paf},
                     {"chemotaxis_bias", pmn.chemotaxis_bias},
                     {"infection_affinity", pmn.infection_affinity},
                     {"infection_weight", pmn.infection_weight},
                     {"tnf_weight", pmn.tnf_weight},
                     {"il1_weight", pmn.il1_weight},
                     {"paf_weight", pmn.paf_weight},
                     {"il10_weight", pmn.il10_weight},
                     {"activation_threshold", pmn.activation_threshold},
                     {"burst_kill", pmn.burst_kill},
                     {"burst_damage", pmn.burst_damage},
                     {"burst_paf_gain", pmn.burst_paf_gain},
                     {"burst_paf_half", pmn.burst_paf_half},
                     {"burst_spill", pmn.burst_spill},
                     {"tissue_lifespan", pmn.tissue_lifespan}};
  const auto& mac = c.macrophage;
  j["macrophage"] = {{"progenitor", write_progenitor(mac.progenitor)},
                     {"adhesion_paf", mac.adhesion_paf},
                     {"chemotaxis_bias", mac.chemotaxis_bias},
                     {"infection_affinity", mac.infection_affinity},
                     {"infection_weight", mac.infection_weight},
                     {"tnf_weight", mac.tnf_weight},
                     {"ifng_weight", mac.ifng_weight},
                     {"il1_weight", mac.il1_weight},
                     {"paf_weight", mac.paf_weight},
                     {"il10_weight", mac.il10_weight},
                     {"il4_weight", mac.il4_weight},
                     {"activation_threshold", mac.activation_threshold},
                     {"phagocytosis_kill", mac.phagocytosis_kill},
                     {"ifng_kill_gain", mac.ifng_kill_gain},
                     {"tissue_lifespan", mac.tissue_lifespan}};
  const auto& th = c.helper_t;
  j["helper_t"] = {{"progenitor", write_progenitor(th.progenitor)},
                   {"differentiation_probability", th.differentiation_probability},
                   {"signal_threshold", th.signal_threshold},
                   {"il12_weight", th.il12_weight},
                   {"il10_weight", th.il10_weight}};
  j["max_leukocytes_per_cell_area"] = c.max_leukocytes_per_cell_area;
  j["antibody_enabled"] = c.antibody_enabled;
  json sec = json::object();
  for (int r = 0; r < kNumSecretingRoles; ++r) {
    json rows = json::object();
    for (const auto& rule : c.secretion[r]) {
      json coeffs = json::object();
      for (int k = 0; k < kNumCytokines; ++k) {
        if (rule.lambda[k] != 0.0) coeffs[c.labels[k]] = rule.lambda[k];
      }
      coeffs["const"] = rule.lambda[kNumCytokines];
      rows[c.labels[rule.cytokine]] = coeffs;
    }
    sec[role_name(static_cast<SecretingRole>(r))] = rows;
  }
  j["secretion"] = sec;
  return j;
}

RuleConstants load_rule_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open constants table '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed constants table '" + path + "': " + e.what());
  }
  return rule_constants_from_json(j);
}

PatientParams patient_from_json(const json& j) {
  PatientParams p;
  read(j, "initial_injury_size", p.initial_injury_size);
  read(j, "microbial_invasiveness", p.microbial_invasiveness);
  read(j, "microbial_toxigenesis", p.microbial_toxigenesis);
  read(j, "environmental_toxicity", p.environmental_toxicity);
  read(j, "host_resilience", p.host_resilience);
  return p;
}

json to_json(const PatientParams& p) {
  return {{"initial_injury_size", p.initial_injury_size},
          {"microbial_invasiveness", p.microbial_invasiveness},
          {"microbial_toxigenesis", p.microbial_toxigenesis},
          {"environmental_toxicity", p.environmental_toxicity},
          {"host_resilience", p.host_resilience}};
}

SimulationParams make_params(const PatientParams& p, const RuleConstants& c, int grid_side,
                             double frame_minutes) {
  SimulationParams s;
  s.initial_injury_size = p.initial_injury_size;
  s.microbial_invasiveness = p.microbial_invasiveness;
  s.microbial_toxigenesis = p.microbial_toxigenesis;
  s.environmental_toxicity = p.environmental_toxicity;
  s.host_resilience = p.host_resilience;
  s.grid_side = grid_side;
  s.frame_minutes = frame_minutes;
  s.constants = c;
  return s;
}

PatientParams patient_of(const SimulationParams& s) {
  return {s.initial_injury_size, s.microbial_invasiveness, s.microbial_toxigenesis,
          s.environmental_toxicity, s.host_resilience};
}

}  // namespace sepsis::abm
