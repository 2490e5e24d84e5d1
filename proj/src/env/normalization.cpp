#include "sepsis/env/normalization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sepsis::env {

NormalizationSpec NormalizationSpec::identity(std::size_t dim) {
  NormalizationSpec s;
  s.offsets.assign(dim, 0.0);
  s.scales.assign(dim, 1.0);
  s.provenance = "identity";
  return s;
}

void NormalizationSpec::validate() const {
  if (offsets.size() != scales.size()) {
    throw std::invalid_argument("normalization offsets/scales size mismatch");
  }
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("normalization scale must be positive and finite");
    }
  }
}

std::vector<double> normalize(std::span<const double> raw, const NormalizationSpec& spec) {
  if (raw.size() != spec.size()) throw std::invalid_argument("normalize: dimension mismatch");
  std::vector<double> out(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    out[k] = (raw[k] - spec.offsets[k]) / spec.scales[k];
  }
  return out;
}

std::vector<double> denormalize(std::span<const double> obs, const NormalizationSpec& spec) {
  if (obs.size() != spec.size()) throw std::invalid_argument("denormalize: dimension mismatch");
  std::vector<double> out(obs.size());
  for (std::size_t k = 0; k < obs.size(); ++k) out[k] = obs[k] * spec.scales[k] + spec.offsets[k];
  return out;
}

RangeTracker::RangeTracker(std::size_t dim)
    : lo_(dim, std::numeric_limits<double>::infinity()),
      hi_(dim, -std::numeric_limits<double>::infinity()) {}

void RangeTracker::observe(std::span<const double> raw) {
  if (raw.size() != lo_.size()) throw std::invalid_argument("RangeTracker: dimension mismatch");
  for (std::size_t k = 0; k < raw.size(); ++k) {
    lo_[k] = std::min(lo_[k], raw[k]);
    hi_[k] = std::max(hi_[k], raw[k]);
  }
  ++samples_;
}

NormalizationSpec RangeTracker::finish(std::vector<std::size_t>* degenerate) const {
  if (samples_ == 0) throw std::logic_error("RangeTracker: no samples");
  NormalizationSpec s;
  s.offsets.resize(lo_.size());
  s.scales.resize(lo_.size());
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    s.offsets[k] = 0.5 * (lo_[k] + hi_[k]);
    const double half = 0.5 * (hi_[k] - lo_[k]);
    if (half > 0.0) {
      s.scales[k] = half;
    } else {
      s.scales[k] = 1.0;
      if (degenerate) degenerate->push_back(k);
    }
  }
  return s;
}

nlohmann::json to_json(const NormalizationSpec& spec) {
  return {{"offsets", spec.offsets},
          {"scales", spec.scales},
          {"provenance", spec.provenance},
          {"episodes", spec.episodes}};
}

NormalizationSpec normalization_from_json(const nlohmann::json& j) {
  NormalizationSpec s;
  s.offsets = j.at("offsets").get<std::vector<double>>();
  s.scales = j.at("scales").get<std::vector<double>>();
  s.provenance = j.at("provenance").get<std::string>();
  s.episodes = j.at("episodes").get<std::int64_t>();
  s.validate();
  return s;
}

}  // namespace sepsis::env
