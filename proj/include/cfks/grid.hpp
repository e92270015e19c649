#pragma once
// grid.hpp — periodic sample layout shared by every field.
//
// A Grid describes the torus [-L, L] sampled at n equispaced points
// x_j = -L + 2Lj/n together with the wavenumber table xi_k = pi k / L for
// the retained modes k = -n/2+1 ... n/2 (stored in FFT index order). The
// data block, including the FFT plan, is immutable after construction and
// shared by handle, so grids are cheap to copy and safe to use from many
// threads at once.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cfks/fft.hpp"

namespace cfks {

class Grid {
 public:
  Grid() = default;

  int n() const { return d_->n; }
  double half_length() const { return d_->half_length; }
  double dx() const { return 2.0 * d_->half_length / d_->n; }
  const std::vector<double>& points() const { return d_->points; }
  const std::vector<double>& wavenumbers() const { return d_->wavenumbers; }

  // Signed mode index for FFT array position i: 0..n/2 then negative.
  int mode_of(int i) const { return i <= d_->n / 2 ? i : i - d_->n; }
  double wavenumber(int i) const { return d_->wavenumbers[static_cast<std::size_t>(i)]; }

  const FftPlan& plan() const { return d_->plan; }

  bool valid() const { return static_cast<bool>(d_); }
  // Two handles are the same grid iff they share the data block.
  friend bool same_grid(const Grid& a, const Grid& b) { return a.d_ == b.d_; }

 private:
  struct Data {
    int n;
    double half_length;
    std::vector<double> points;
    std::vector<double> wavenumbers;
    FftPlan plan;

    Data(int n_, double L) : n(n_), half_length(L), plan(static_cast<std::size_t>(n_)) {
      points.resize(static_cast<std::size_t>(n));
      wavenumbers.resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        points[static_cast<std::size_t>(j)] = -L + 2.0 * L * j / n;
      // Ratio-first form keeps xi_k = k exact when L = pi.
      double unit = detail::kPi / L;
      for (int i = 0; i < n; ++i) {
        int k = i <= n / 2 ? i : i - n;
        wavenumbers[static_cast<std::size_t>(i)] = unit * k;
      }
    }
  };

  explicit Grid(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  friend Grid make_grid(int n, double half_length);

  std::shared_ptr<const Data> d_;
};

inline Grid make_grid(int n, double half_length) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("make_grid: n must be even and >= 8");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("make_grid: half_length must be positive");
  return Grid(std::make_shared<const Grid::Data>(n, half_length));
}

}  // namespace cfks
