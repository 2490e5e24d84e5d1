#include "sepsis/abm/field.hpp"

#include <numeric>
#include <stdexcept>

namespace sepsis::abm {

double Field::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

void diffuse_field(Field& field, double coefficient, Field& scratch) {
  if (coefficient < 0.0 || coefficient > 1.0) {
    throw std::invalid_argument("diffusion coefficient must lie in [0,1]");
  }
  if (coefficient == 0.0) return;
  const int n = field.side();
  if (scratch.side() != n) scratch = Field(n);
  const double keep = 1.0 - coefficient;
  const double share = coefficient / 8.0;
  const double* f = field.values().data();
  double* out = scratch.values().data();
  for (int y = 0; y < n; ++y) {
    const double* up = f + static_cast<std::size_t>((y + n - 1) % n) * n;
    const double* mid = f + static_cast<std::size_t>(y) * n;
    const double* down = f + static_cast<std::size_t>((y + 1) % n) * n;
    double* row = out + static_cast<std::size_t>(y) * n;
    for (int x = 0; x < n; ++x) {
      const int l = x == 0 ? n - 1 : x - 1;
      const int r = x == n - 1 ? 0 : x + 1;
      const double ring = up[l] + up[x] + up[r] + mid[l] + mid[r] + down[l] + down[x] + down[r];
      row[x] = keep * mid[x] + share * ring;
    }
  }
  std::swap(field.values(), scratch.values());
}

Field diffuse_field(const Field& field, double coefficient) {
  Field out = field;
  Field scratch(field.side());
  diffuse_field(out, coefficient, scratch);
  return out;
}

void degrade_field(Field& field, double rate) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("degradation rate must lie in [0,1]");
  const double keep = 1.0 - rate;
  for (double& v : field.values()) v *= keep;
}

}  // namespace sepsis::abm
