#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace sepsis::env {

// Affine input transform: out = (raw - offset) / scale.
struct NormalizationSpec {
  std::vector<double> offsets;
  std::vector<double> scales;
  std::string provenance;  // parameterization id used for calibration
  std::int64_t episodes = 0;

  static NormalizationSpec identity(std::size_t dim);
  std::size_t size() const { return offsets.size(); }
  // Throws std::invalid_argument on size mismatch or a non-positive scale.
  void validate() const;
  bool operator==(const NormalizationSpec&) const = default;
};

std::vector<double> normalize(std::span<const double> raw, const NormalizationSpec& spec);
std::vector<double> denormalize(std::span<const double> obs, const NormalizationSpec& spec);

// Running per-dimension min/max, turned into a spec at the end.
class RangeTracker {
 public:
  explicit RangeTracker(std::size_t dim);
  void observe(std::span<const double> raw);
  std::size_t samples() const { return samples_; }
  // offset = (min + max) / 2, scale = (max - min) / 2, or 1 for a constant
  // dimension. Indices of such dimensions are appended to `degenerate`.
  NormalizationSpec finish(std::vector<std::size_t>* degenerate = nullptr) const;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::size_t samples_ = 0;
};

nlohmann::json to_json(const NormalizationSpec& spec);
NormalizationSpec normalization_from_json(const nlohmann::json& j);

}  // namespace sepsis::env
