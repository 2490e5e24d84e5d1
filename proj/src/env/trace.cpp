#include "sepsis/env/trace.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sepsis::env {

std::string trace_header() {
  std::string h = "frame";
  for (const auto& label : observation_labels()) h += "," + label;
  for (int k = 0; k < kActionSize; ++k) h += ",a_" + abm::default_cytokine_labels()[k];
  h += ",reward,outcome";
  return h;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << trace_header() << '\n';
  os << std::setprecision(17);
  for (const TraceRow& r : rows) {
    os << r.frame;
    for (double v : r.raw) os << ',' << v;
    for (double v : r.action) os << ',' << v;
    os << ',' << r.reward << ',' << outcome_name(r.outcome) << '\n';
  }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows,
                     const std::string& comment) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  if (!comment.empty()) os << "# " << comment << '\n';
  write_trace_csv(os, rows);
}

TraceRow trace_row(const SepsisEnv& env, const StepResult* step) {
  TraceRow r;
  r.frame = env.state().frame_count;
  r.raw = env.raw_observation();
  if (step) {
    for (int k = 0; k < kActionSize; ++k) r.action[k] = step->applied_action[k];
    r.reward = step->reward;
    r.outcome = step->outcome;
  }
  return r;
}

}  // namespace sepsis::env
