#pragma once
// field.hpp — a real periodic function sampled on a Grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cfks/grid.hpp"

namespace cfks {

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(Grid g) : grid(std::move(g)) {
    values.assign(static_cast<std::size_t>(grid.n()), 0.0);
  }
  Field(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n())
      throw std::invalid_argument("Field: value count does not match grid");
  }
};

inline Field make_field(const Grid& g, const std::function<double(double)>& fn) {
  Field f(g);
  for (int j = 0; j < g.n(); ++j)
    f.values[static_cast<std::size_t>(j)] = fn(g.points()[static_cast<std::size_t>(j)]);
  return f;
}

inline Field constant_field(const Grid& g, double c) {
  Field f(g);
  std::fill(f.values.begin(), f.values.end(), c);
  return f;
}

inline double mean(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s / static_cast<double>(f.values.size());
}

inline double sup_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

inline bool all_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

// Zero-mean tag check: |sample mean| <= 1e-12 * (1 + max|values|).
inline bool is_zero_mean(const Field& f, double tol = 1e-12) {
  return std::abs(mean(f)) <= tol * (1.0 + sup_norm(f));
}

inline Field& operator+=(Field& a, const Field& b) {
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
  return a;
}

inline Field& operator-=(Field& a, const Field& b) {
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] -= b.values[i];
  return a;
}

inline Field& operator*=(Field& a, double c) {
  for (double& v : a.values) v *= c;
  return a;
}

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double c, Field a) { return a *= c; }

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace cfks
