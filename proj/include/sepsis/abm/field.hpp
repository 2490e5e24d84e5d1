#pragma once

#include <cstddef>
#include <vector>

namespace sepsis::abm {

// Square scalar field over a toroidal grid, row-major.
class Field {
 public:
  Field() = default;
  explicit Field(int side, double value = 0.0)
      : side_(side), data_(static_cast<std::size_t>(side) * side, value) {}

  int side() const { return side_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(int x, int y) { return data_[index(x, y)]; }
  double at(int x, int y) const { return data_[index(x, y)]; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * side_ + static_cast<std::size_t>(x);
  }

  double sum() const;
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  bool operator==(const Field&) const = default;

 private:
  int side_ = 0;
  std::vector<double> data_;
};

// Each cell keeps (1 - coefficient) of its value and sends coefficient/8 to
// each Moore neighbour, wrapping at the edges. Conserves the field sum.
// `scratch` is reused between calls to avoid reallocation.
void diffuse_field(Field& field, double coefficient, Field& scratch);
Field diffuse_field(const Field& field, double coefficient);

// Multiplies every entry by (1 - rate).
void degrade_field(Field& field, double rate);

}  // namespace sepsis::abm
