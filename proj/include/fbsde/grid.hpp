#ifndef FBSDE_GRID_HPP
#define FBSDE_GRID_HPP

#include <cmath>
#include <cstddef>

#include "fbsde/errors.hpp"

namespace fbsde {

/// Uniform partition of [t0, T]; node i sits at t0 + i*dt().
class TimeGrid {
 public:
  TimeGrid(double t0, double horizon, std::size_t n_steps)
      : t0_(t0), horizon_(horizon), n_steps_(n_steps) {
    if (!(t0 < horizon)) throw InvalidWindow("TimeGrid: t0 must precede T");
    if (n_steps < 1) throw InvalidWindow("TimeGrid: need at least one step");
  }

  double t0() const { return t0_; }
  double horizon() const { return horizon_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t n_nodes() const { return n_steps_ + 1; }
  double dt() const { return (horizon_ - t0_) / static_cast<double>(n_steps_); }

  double node(std::size_t i) const {
    // Endpoints exact by construction.
    if (i == 0) return t0_;
    if (i == n_steps_) return horizon_;
    return t0_ + static_cast<double>(i) * dt();
  }

  // Nearest node index for a time expected to lie on the grid.
  std::size_t index_of(double t) const {
    const double raw = (t - t0_) / dt();
    const auto i = static_cast<std::size_t>(std::llround(raw));
    if (i > n_steps_ || std::abs(raw - static_cast<double>(i)) > 1e-9)
      throw InvalidWindow("TimeGrid: time is not a grid node");
    return i;
  }

  /// Sub-grid covering [node(i_from), T] with the same step size.
  TimeGrid tail_from(std::size_t i_from) const {
    if (i_from >= n_steps_)
      throw InvalidWindow("TimeGrid: tail must keep at least one step");
    return TimeGrid(node(i_from), horizon_, n_steps_ - i_from);
  }

  bool operator==(const TimeGrid& other) const {
    return t0_ == other.t0_ && horizon_ == other.horizon_ &&
           n_steps_ == other.n_steps_;
  }

 private:
  double t0_;
  double horizon_;
  std::size_t n_steps_;
};

}  // namespace fbsde

#endif  // FBSDE_GRID_HPP
