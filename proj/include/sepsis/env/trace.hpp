#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sepsis/env/environment.hpp"
#include "sepsis/env/sepsis_env.hpp"

namespace sepsis::env {

// One row per step: frame index, raw 21-vector after the step, applied
// action, reward and outcome. Row 0 is the post-reset state with a zero
// action and reward.
struct TraceRow {
  std::int64_t frame = 0;
  RawObservation raw{};
  std::array<double, kActionSize> action{};
  double reward = 0.0;
  Outcome outcome = Outcome::kOngoing;
};

std::string trace_header();
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows,
                     const std::string& comment = {});

TraceRow trace_row(const SepsisEnv& env, const StepResult* step);

}  // namespace sepsis::env
