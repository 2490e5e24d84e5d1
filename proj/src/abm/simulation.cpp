#include "sepsis/abm/simulation.hpp"

#include <algorithm>
#include <cmath>

namespace sepsis::abm {
namespace {

constexpr double kMaxLevel = 100.0;  // infection/damage ceiling per grid point
constexpr int kReferenceSide = kDefaultGridSide;

constexpr int kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

inline int wrap(int v, int n) { return v < 0 ? v + n : (v >= n ? v - n : v); }

struct FrameContext {
  SimState& s;
  const RuleConstants& k;
  const ActionVector& a;
  int n;
  std::array<double, kNumCytokines> systemic_mean{};

  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * n + x; }

  CytokineVector cytokines_at(std::size_t i) const {
    CytokineVector c;
    for (int j = 0; j < kNumCytokines; ++j) c[j] = s.cytokines[j][i];
    return c;
  }

  // Applies every lambda row of `role` at grid point i, in table order.
  void secrete(SecretingRole role, std::size_t i, double scale = 1.0) {
    for (const auto& rule : k.rules(role)) {
      CytokineVector c = cytokines_at(i);
      LambdaRow lambda = rule.lambda;
      lambda[kNumCytokines] *= scale;
      s.cytokines[rule.cytokine][i] = update_cytokine(lambda, c, a.values[rule.cytokine]);
    }
  }

  void add_damage(std::size_t i, double amount) {
    s.damage[i] = std::min(kMaxLevel, s.damage[i] + amount);
  }

  // Random Moore neighbour of (x, y).
  void random_step(CellAgent& agent) {
    const int d = static_cast<int>(s.rng.uniform_int(8));
    agent.x = wrap(agent.x + kDx[d], n);
    agent.y = wrap(agent.y + kDy[d], n);
  }

  // With probability `bias`, moves toward the Moore neighbour with the
  // largest attractant (field + affinity * infection); otherwise, or when no
  // neighbour exceeds the current point, takes a random step.
  void chemotaxis(CellAgent& agent, const Field& field, double bias, double affinity) {
    if (!s.rng.bernoulli(bias)) {
      random_step(agent);
      return;
    }
    auto attractant = [&](std::size_t i) { return field[i] + affinity * s.infection[i]; };
    const double here = attractant(idx(agent.x, agent.y));
    const int start = static_cast<int>(s.rng.uniform_int(8));
    int best = -1;
    double best_value = here;
    for (int t = 0; t < 8; ++t) {
      const int d = (start + t) & 7;
      const double v = attractant(idx(wrap(agent.x + kDx[d], n), wrap(agent.y + kDy[d], n)));
      if (v > best_value) {
        best_value = v;
        best = d;
      }
    }
    if (best < 0) {
      random_step(agent);
      return;
    }
    agent.x = wrap(agent.x + kDx[best], n);
    agent.y = wrap(agent.y + kDy[best], n);
  }
};

int scaled_count(int count, int side) {
  if (count <= 0) return 0;
  const double scale = static_cast<double>(side) * side / (kReferenceSide * kReferenceSide);
  return std::max(1, static_cast<int>(std::lround(count * scale)));
}

const ProgenitorConstants& progenitor_constants(const RuleConstants& k, AgentKind lineage) {
  switch (lineage) {
    case AgentKind::kNeutrophil: return k.neutrophil.progenitor;
    case AgentKind::kMacrophage: return k.macrophage.progenitor;
    default: return k.helper_t.progenitor;
  }
}

CellAgent make_leukocyte(AgentKind kind, int x, int y, Rng& rng, const RuleConstants& k) {
  const ProgenitorConstants& pc = progenitor_constants(k, kind);
  CellAgent agent;
  agent.kind = kind;
  agent.lineage = kind;
  agent.x = x;
  agent.y = y;
  const int span = std::max(0, pc.lifespan_max - pc.lifespan_min);
  agent.lifespan = static_cast<std::uint32_t>(pc.lifespan_min) +
                   rng.uniform_int(static_cast<std::uint32_t>(span + 1));
  if (kind == AgentKind::kNeutrophil || kind == AgentKind::kMacrophage) {
    agent.receptor_state = {k.receptor.initial_level, k.receptor.initial_level};
  } else {
    // Helper T cells act in tissue directly.
    agent.in_tissue = true;
  }
  return agent;
}

void recurrent_injury(FrameContext& ctx) {
  const SimulationParams& p = ctx.s.params;
  const int period = ctx.k.recurrent_injury.period_frames;
  if (p.environmental_toxicity <= 0.0 || period <= 0) return;
  if (ctx.s.frame_count == 0 || ctx.s.frame_count % period != 0) return;
  const int sites = static_cast<int>(std::lround(p.environmental_toxicity));
  for (int site = 0; site < sites; ++site) {
    const int x = static_cast<int>(ctx.s.rng.uniform_int(ctx.n));
    const int y = static_cast<int>(ctx.s.rng.uniform_int(ctx.n));
    const std::size_t i = ctx.idx(x, y);
    ctx.s.infection[i] =
        std::min(kMaxLevel, ctx.s.infection[i] + ctx.k.recurrent_injury.infection_amount);
  }
}

void infection_step(FrameContext& ctx, Field& spread) {
  const SimulationParams& p = ctx.s.params;
  const InfectionConstants& ic = ctx.k.infection;
  std::fill(spread.values().begin(), spread.values().end(), 0.0);
  const double growth = p.microbial_invasiveness * ic.growth_rate;
  const double spread_amount = p.microbial_invasiveness * ic.spread_amount;
  const double toxin = p.microbial_toxigenesis * ic.toxin_damage_rate / kMaxLevel;
  for (int y = 0; y < ctx.n; ++y) {
    for (int x = 0; x < ctx.n; ++x) {
      const std::size_t i = ctx.idx(x, y);
      double& inf = ctx.s.infection[i];
      if (inf <= 0.0) continue;
      inf += growth * inf * (1.0 - inf / kMaxLevel) - ic.innate_clearance;
      inf = std::clamp(inf, 0.0, kMaxLevel);
      if (inf <= 0.0) continue;
      if (inf >= ic.spread_threshold) {
        const int d = static_cast<int>(ctx.s.rng.uniform_int(8));
        spread[ctx.idx(wrap(x + kDx[d], ctx.n), wrap(y + kDy[d], ctx.n))] += spread_amount;
      }
      ctx.add_damage(i, toxin * inf);
    }
  }
  for (std::size_t i = 0; i < spread.size(); ++i) {
    if (spread[i] > 0.0) ctx.s.infection[i] = std::min(kMaxLevel, ctx.s.infection[i] + spread[i]);
  }
}

bool has_living_neighbour(const FrameContext& ctx, int x, int y) {
  for (int d = 0; d < 8; ++d) {
    if (ctx.s.damage[ctx.idx(wrap(x + kDx[d], ctx.n), wrap(y + kDy[d], ctx.n))] < kMaxLevel) {
      return true;
    }
  }
  return false;
}

void endothelial_step(FrameContext& ctx) {
  const EndothelialConstants& ec = ctx.k.endothelial;
  const double heal = ctx.s.params.host_resilience * ec.heal_rate;
  for (int y = 0; y < ctx.n; ++y) {
    for (int x = 0; x < ctx.n; ++x) {
      const std::size_t i = ctx.idx(x, y);
      if (ctx.s.damage[i] >= kMaxLevel) {
        // Dead endothelium regrows only from a living neighbour.
        ctx.s.endothelial_active[i] = 0;
        if (ec.necrotic_secretion_scale > 0.0) {
          ctx.secrete(SecretingRole::kEndothelialActive, i, ec.necrotic_secretion_scale);
        }
        if (ctx.s.infection[i] < ec.heal_infection_limit &&
            ctx.s.rng.bernoulli(ec.regrow_probability * ctx.s.params.host_resilience) &&
            has_living_neighbour(ctx, x, y)) {
          ctx.s.damage[i] = kMaxLevel - 1.0;
        }
        continue;
      }
      const double tnf = ctx.s.cytokines[kTnf][i];
      const double signal = ec.tnf_weight * tnf + ec.il1_weight * ctx.s.cytokines[kIl1][i];
      const bool active = ctx.s.infection[i] > 0.0 || signal >= ec.activation_threshold ||
                          ctx.s.damage[i] >= ec.damage_activation_threshold;
      ctx.s.endothelial_active[i] = active ? 1 : 0;
      if (active) ctx.secrete(SecretingRole::kEndothelialActive, i);
      const double free_tnf = std::max(0.0, tnf - ctx.s.cytokines[kStnfr][i]);
      if (free_tnf > ec.tnf_damage_threshold) {
        ctx.add_damage(i, ec.tnf_damage_rate * (free_tnf - ec.tnf_damage_threshold));
      }
      if (ctx.s.infection[i] < ec.heal_infection_limit) {
        ctx.s.damage[i] = std::max(0.0, ctx.s.damage[i] - heal);
      }
    }
  }
}

void spawn_from_progenitors(FrameContext& ctx) {
  const std::size_t cap =
      static_cast<std::size_t>(ctx.k.max_leukocytes_per_cell_area) * ctx.s.num_cells();
  const std::size_t existing = ctx.s.leukocytes.size();
  for (std::size_t p = 0; p < existing; ++p) {
    const CellAgent& prog = ctx.s.leukocytes[p];
    if (prog.kind != AgentKind::kProgenitor) continue;
    const ProgenitorConstants& pc = progenitor_constants(ctx.k, prog.lineage);
    double drive = 0.0;
    switch (prog.lineage) {
      case AgentKind::kNeutrophil: drive = ctx.systemic_mean[kGcsf]; break;
      case AgentKind::kMacrophage: drive = ctx.systemic_mean[kIl1]; break;
      default: drive = ctx.systemic_mean[kIl12]; break;
    }
    // Expected output per frame; the fractional part is a Bernoulli draw.
    const double rate = pc.spawn_base + pc.spawn_gain * drive;
    const double whole = std::floor(rate);
    const int births = static_cast<int>(whole) + (ctx.s.rng.bernoulli(rate - whole) ? 1 : 0);
    const AgentKind lineage = prog.lineage;
    for (int b = 0; b < births; ++b) {
      if (ctx.s.leukocytes.size() >= cap) return;
      const int x = static_cast<int>(ctx.s.rng.uniform_int(ctx.n));
      const int y = static_cast<int>(ctx.s.rng.uniform_int(ctx.n));
      ctx.s.leukocytes.push_back(make_leukocyte(lineage, x, y, ctx.s.rng, ctx.k));
    }
  }
}

// Ligand binding, receptor up-regulation and shedding. Returns the amounts
// of TNF and IL-1 bound this frame.
std::array<double, 2> receptor_trafficking(FrameContext& ctx, CellAgent& agent, std::size_t i) {
  const ReceptorConstants& rc = ctx.k.receptor;
  auto& c = ctx.s.cytokines;
  const double free_tnf = std::max(0.0, c[kTnf][i] - c[kStnfr][i]);
  const double free_il1 = std::max(0.0, c[kIl1][i] - c[kIl1ra][i] - c[kSil1r][i]);
  const double bound_tnf = std::min(free_tnf, rc.binding_rate * agent.receptor_state[kTnfReceptor]);
  const double bound_il1 = std::min(free_il1, rc.binding_rate * agent.receptor_state[kIl1Receptor]);
  c[kTnf][i] -= bound_tnf;
  c[kIl1][i] -= bound_il1;
  agent.receptor_state[kTnfReceptor] =
      std::min(rc.max_level, agent.receptor_state[kTnfReceptor] + rc.upregulation * bound_tnf);
  agent.receptor_state[kIl1Receptor] =
      std::min(rc.max_level, agent.receptor_state[kIl1Receptor] + rc.upregulation * bound_il1);
  return {bound_tnf, bound_il1};
}

void shed_receptors(FrameContext& ctx, CellAgent& agent, std::size_t i) {
  const double f = ctx.k.receptor.shedding_fraction;
  const double tnfr = f * agent.receptor_state[kTnfReceptor];
  const double il1r = f * agent.receptor_state[kIl1Receptor];
  agent.receptor_state[kTnfReceptor] -= tnfr;
  agent.receptor_state[kIl1Receptor] -= il1r;
  ctx.s.cytokines[kStnfr][i] += tnfr;
  ctx.s.cytokines[kSil1r][i] += il1r;
}

bool try_extravasate(FrameContext& ctx, CellAgent& agent, double adhesion_paf,
                     int tissue_lifespan) {
  const std::size_t i = ctx.idx(agent.x, agent.y);
  if (ctx.s.endothelial_active[i] && ctx.s.cytokines[kPaf][i] >= adhesion_paf) {
    agent.in_tissue = true;
    agent.lifespan = agent.age + static_cast<std::uint32_t>(tissue_lifespan);
    return true;
  }
  return false;
}

void neutrophil_step(FrameContext& ctx, CellAgent& agent) {
  const NeutrophilConstants& nc = ctx.k.neutrophil;
  if (!agent.in_tissue) {
    if (!try_extravasate(ctx, agent, nc.adhesion_paf, nc.tissue_lifespan)) ctx.random_step(agent);
    return;
  }
  const std::size_t i = ctx.idx(agent.x, agent.y);
  const auto bound = receptor_trafficking(ctx, agent, i);
  const double paf = ctx.s.cytokines[kPaf][i];
  agent.activation = nc.infection_weight * ctx.s.infection[i] + nc.tnf_weight * bound[0] +
                     nc.il1_weight * bound[1] + nc.paf_weight * paf -
                     nc.il10_weight * ctx.s.cytokines[kIl10][i];
  if (agent.activation >= nc.activation_threshold) {
    // Respiratory burst: kills microbes, injures the local endothelium.
    ctx.s.infection[i] = std::max(0.0, ctx.s.infection[i] - nc.burst_kill);
    const double burst =
        nc.burst_damage * (1.0 + nc.burst_paf_gain * paf / (paf + nc.burst_paf_half));
    ctx.add_damage(i, burst);
    if (nc.burst_spill > 0.0) {
      for (int d = 0; d < 8; ++d) {
        ctx.add_damage(ctx.idx(wrap(agent.x + kDx[d], ctx.n), wrap(agent.y + kDy[d], ctx.n)),
                       nc.burst_spill * burst);
      }
    }
    ctx.secrete(SecretingRole::kNeutrophilActive, i);
    shed_receptors(ctx, agent, i);
  }
  ctx.chemotaxis(agent, ctx.s.cytokines[kIl8], nc.chemotaxis_bias, nc.infection_affinity);
}

void macrophage_step(FrameContext& ctx, CellAgent& agent) {
  const MacrophageConstants& mc = ctx.k.macrophage;
  if (!agent.in_tissue) {
    if (!try_extravasate(ctx, agent, mc.adhesion_paf, mc.tissue_lifespan)) ctx.random_step(agent);
    return;
  }
  const std::size_t i = ctx.idx(agent.x, agent.y);
  const auto bound = receptor_trafficking(ctx, agent, i);
  const auto& c = ctx.s.cytokines;
  const double ifng = c[kIfng][i];
  const double pro = mc.infection_weight * ctx.s.infection[i] + mc.tnf_weight * bound[0] +
                     mc.ifng_weight * ifng + mc.il1_weight * bound[1] + mc.paf_weight * c[kPaf][i];
  const double anti = mc.il10_weight * c[kIl10][i] + mc.il4_weight * c[kIl4][i];
  agent.activation = pro - anti;
  if (agent.activation >= mc.activation_threshold) {
    const double kill = mc.phagocytosis_kill * (1.0 + mc.ifng_kill_gain * ifng / (ifng + 1.0));
    ctx.s.infection[i] = std::max(0.0, ctx.s.infection[i] - kill);
    ctx.secrete(SecretingRole::kMacrophageProInflammatory, i);
    shed_receptors(ctx, agent, i);
  } else if (-agent.activation >= mc.activation_threshold) {
    ctx.secrete(SecretingRole::kMacrophageAntiInflammatory, i);
  }
  ctx.chemotaxis(agent, ctx.s.cytokines[kPaf], mc.chemotaxis_bias, mc.infection_affinity);
}

void helper_t_step(FrameContext& ctx, CellAgent& agent) {
  const HelperTConstants& hc = ctx.k.helper_t;
  const std::size_t i = ctx.idx(agent.x, agent.y);
  switch (agent.kind) {
    case AgentKind::kTh0: {
      const auto& m = ctx.systemic_mean;
      const double th1 = m[kIfng] + hc.il12_weight * m[kIl12];
      const double th2 = m[kIl4] + hc.il10_weight * m[kIl10];
      agent.activation = th1 - th2;
      if (th1 + th2 >= hc.signal_threshold && ctx.s.rng.bernoulli(hc.differentiation_probability)) {
        agent.kind = ctx.s.rng.bernoulli(th1 / (th1 + th2)) ? AgentKind::kTh1 : AgentKind::kTh2;
      }
      break;
    }
    case AgentKind::kTh1: ctx.secrete(SecretingRole::kTh1, i); break;
    case AgentKind::kTh2: ctx.secrete(SecretingRole::kTh2, i); break;
    default: break;
  }
  ctx.random_step(agent);
}

void leukocyte_step(FrameContext& ctx) {
  const std::size_t count = ctx.s.leukocytes.size();
  for (std::size_t a = 0; a < count; ++a) {
    CellAgent& agent = ctx.s.leukocytes[a];
    if (agent.kind == AgentKind::kProgenitor) continue;
    switch (agent.kind) {
      case AgentKind::kNeutrophil: neutrophil_step(ctx, agent); break;
      case AgentKind::kMacrophage: macrophage_step(ctx, agent); break;
      default: helper_t_step(ctx, agent); break;
    }
    ++agent.age;
  }
  std::erase_if(ctx.s.leukocytes, [](const CellAgent& agent) {
    return agent.kind != AgentKind::kProgenitor && agent.age >= agent.lifespan;
  });
}

void check_finite(const SimState& s) {
  auto finite = [](const Field& f) {
    return std::all_of(f.values().begin(), f.values().end(),
                       [](double v) { return std::isfinite(v); });
  };
  for (int j = 0; j < kNumCytokines; ++j) {
    if (!finite(s.cytokines[j])) {
      throw NumericalBlowup("non-finite cytokine " + s.params.constants.labels[j] + " at frame " +
                            std::to_string(s.frame_count));
    }
  }
  if (!finite(s.infection) || !finite(s.damage)) {
    throw NumericalBlowup("non-finite infection/damage at frame " + std::to_string(s.frame_count));
  }
}

}  // namespace

bool ActionVector::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

double ActionVector::l1_norm() const {
  double s = 0.0;
  for (double v : values) s += std::abs(v);
  return s;
}

ActionVector ActionVector::clamped() const {
  ActionVector out;
  for (int i = 0; i < kNumCytokines; ++i) {
    // NaN maps to 0 (no intervention).
    out.values[i] = std::isnan(values[i]) ? 0.0 : std::clamp(values[i], -1.0, 1.0);
  }
  return out;
}

const char* agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kEndothelial: return "endothelial";
    case AgentKind::kMacrophage: return "macrophage";
    case AgentKind::kNeutrophil: return "neutrophil";
    case AgentKind::kTh0: return "Th0";
    case AgentKind::kTh1: return "Th1";
    case AgentKind::kTh2: return "Th2";
    case AgentKind::kProgenitor: return "progenitor";
  }
  return "?";
}

double intervene(double x, double a) {
  if (a <= 0.0) return std::pow(10.0, a) * x;
  return x + (std::pow(10.0, a) - 1.0);
}

double update_cytokine(const LambdaRow& lambda, const CytokineVector& c, double a) {
  double dot = lambda[kNumCytokines];
  for (int j = 0; j < kNumCytokines; ++j) dot += lambda[j] * c[j];
  return std::max(0.0, intervene(dot, a));
}

double update_cytokine(std::span<const double> lambda, std::span<const double> c_aug, double a) {
  if (lambda.size() != kLambdaLength || c_aug.size() != kLambdaLength) {
    throw std::invalid_argument("update_cytokine expects 13-element lambda and augmented c");
  }
  double dot = 0.0;
  for (int j = 0; j < kLambdaLength; ++j) dot += lambda[j] * c_aug[j];
  return std::max(0.0, intervene(dot, a));
}

SimState init_simulation(const SimulationParams& params, std::uint64_t seed, std::uint64_t stream) {
  params.validate();
  SimState s;
  s.params = params;
  const int n = params.grid_side;
  for (auto& f : s.cytokines) f = Field(n);
  s.infection = Field(n);
  s.damage = Field(n);
  s.endothelial_active.assign(static_cast<std::size_t>(n) * n, 0);
  s.rng = Rng(seed, stream);

  const RuleConstants& k = params.constants;
  const int r = params.initial_injury_size;
  const int cx = n / 2;
  const int cy = n / 2;
  if (r > 0) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy > r * r) continue;
        const std::size_t i = s.infection.index(cx + dx, cy + dy);
        s.infection[i] = k.infection.initial_infection;
        s.damage[i] = k.infection.initial_damage;
      }
    }
  }

  // Progenitors sit at fixed random positions; each starts with a resting
  // population of circulating offspring at random ages.
  const std::pair<AgentKind, const ProgenitorConstants*> lineages[] = {
      {AgentKind::kNeutrophil, &k.neutrophil.progenitor},
      {AgentKind::kMacrophage, &k.macrophage.progenitor},
      {AgentKind::kTh0, &k.helper_t.progenitor},
  };
  for (const auto& [lineage, pc] : lineages) {
    const int count = scaled_count(pc->count, n);
    const double mean_life = 0.5 * (pc->lifespan_min + pc->lifespan_max);
    const int resting = static_cast<int>(std::floor(pc->spawn_base * mean_life));
    for (int p = 0; p < count; ++p) {
      if (!s.rng.bernoulli(pc->viability)) continue;
      CellAgent prog;
      prog.kind = AgentKind::kProgenitor;
      prog.lineage = lineage;
      prog.x = static_cast<int>(s.rng.uniform_int(n));
      prog.y = static_cast<int>(s.rng.uniform_int(n));
      s.leukocytes.push_back(prog);
      for (int c = 0; c < resting; ++c) {
        const int x = static_cast<int>(s.rng.uniform_int(n));
        const int y = static_cast<int>(s.rng.uniform_int(n));
        CellAgent cell = make_leukocyte(lineage, x, y, s.rng, k);
        cell.age = s.rng.uniform_int(std::max<std::uint32_t>(1, cell.lifespan));
        s.leukocytes.push_back(cell);
      }
    }
  }
  return s;
}

SystemTotals step_frame(SimState& state, const ActionVector& interventions) {
  for (double v : interventions.values) {
    if (!(v >= -1.0 && v <= 1.0)) throw std::invalid_argument("intervention outside [-1,1]");
  }
  state.current_intervention = interventions;
  FrameContext ctx{state, state.params.constants, state.current_intervention, state.side()};
  const double cells = static_cast<double>(state.num_cells());
  for (int j = 0; j < kNumCytokines; ++j) ctx.systemic_mean[j] = state.cytokines[j].sum() / cells;

  thread_local Field scratch;
  if (scratch.side() != ctx.n) scratch = Field(ctx.n);

  recurrent_injury(ctx);
  infection_step(ctx, scratch);
  endothelial_step(ctx);
  spawn_from_progenitors(ctx);
  leukocyte_step(ctx);
  if (ctx.k.antibody_enabled) administer_antibodies(state);

  for (int j = 0; j < kNumCytokines; ++j) {
    diffuse_field(state.cytokines[j], ctx.k.diffusion[j], scratch);
    degrade_field(state.cytokines[j], ctx.k.degradation[j]);
  }
  check_finite(state);
  ++state.frame_count;
  return system_totals(state);
}

SystemTotals system_totals(const SimState& state) {
  const double max_total = kMaxLevel * static_cast<double>(state.num_cells());
  SystemTotals t;
  t.total_damage_pct = std::clamp(100.0 * state.damage.sum() / max_total, 0.0, 100.0);
  t.total_infection_pct = std::clamp(100.0 * state.infection.sum() / max_total, 0.0, 100.0);
  return t;
}

FrameOutcome check_outcome(const SystemTotals& totals, std::int64_t /*frame_count*/) {
  return totals.total_damage_pct > kDeathDamagePct ? FrameOutcome::kDeath
                                                   : FrameOutcome::kContinue;
}

std::array<double, 5> leukocyte_counts(const SimState& state) {
  std::array<double, 5> counts{};
  for (const CellAgent& a : state.leukocytes) {
    switch (a.kind) {
      case AgentKind::kMacrophage: counts[0] += 1; break;
      case AgentKind::kNeutrophil: counts[1] += 1; break;
      case AgentKind::kTh0: counts[2] += 1; break;
      case AgentKind::kTh1: counts[3] += 1; break;
      case AgentKind::kTh2: counts[4] += 1; break;
      default: break;
    }
  }
  return counts;
}

std::array<double, kNumReceptors> receptor_totals(const SimState& state) {
  std::array<double, kNumReceptors> totals{};
  for (const CellAgent& a : state.leukocytes) {
    for (int r = 0; r < kNumReceptors; ++r) totals[r] += a.receptor_state[r];
  }
  return totals;
}

void administer_antibodies(SimState& /*state*/) {}

GridCell cell_view(const SimState& state, int x, int y) {
  GridCell cell;
  const std::size_t i = state.infection.index(x, y);
  for (int j = 0; j < kNumCytokines; ++j) cell.cytokines[j] = state.cytokines[j][i];
  cell.infection = state.infection[i];
  cell.damage = state.damage[i];
  cell.endothelial_agent.kind = AgentKind::kEndothelial;
  cell.endothelial_agent.x = x;
  cell.endothelial_agent.y = y;
  cell.endothelial_agent.age = static_cast<std::uint32_t>(state.frame_count);
  cell.endothelial_agent.activation = state.endothelial_active[i];
  for (const CellAgent& a : state.leukocytes) {
    if (a.x != x || a.y != y) continue;
    cell.leukocytes.push_back(a);
    for (int r = 0; r < kNumReceptors; ++r) cell.receptor_concentrations[r] += a.receptor_state[r];
  }
  return cell;
}

}  // namespace sepsis::abm
