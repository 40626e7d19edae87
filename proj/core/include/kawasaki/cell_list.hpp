#pragma once

#include <cstddef>
#include <vector>

#include "kawasaki/configuration.hpp"
#include "kawasaki/torus.hpp"

namespace kawasaki {

/// Spatial hash of particle indices into cubic cells of side >= min_side.
/// With fewer than three cells along an axis the whole axis becomes one
/// cell, so a neighbourhood query never visits a cell twice.
class CellList {
 public:
  CellList(const TorusDomain& domain, double min_side, int max_cells_per_axis = 256);

  void rebuild(const Configuration& config);
  /// Particle `index` moved from `from` to `to`.
  void move(std::size_t index, const Point& from, const Point& to);

  /// Calls fn(index) for every particle in the 3^d block of cells around p.
  template <typename Fn>
  void for_each_near(const Point& p, Fn&& fn) const {
    const auto c = coords(p);
    const int rx = cells_per_axis_ > 1 ? 1 : 0;
    const int ry = (dim_ > 1 && cells_per_axis_ > 1) ? 1 : 0;
    const int rz = (dim_ > 2 && cells_per_axis_ > 1) ? 1 : 0;
    for (int dz = -rz; dz <= rz; ++dz) {
      for (int dy = -ry; dy <= ry; ++dy) {
        for (int dx = -rx; dx <= rx; ++dx) {
          for (std::size_t idx : cells_[flat(c[0] + dx, c[1] + dy, c[2] + dz)]) fn(idx);
        }
      }
    }
  }

  [[nodiscard]] int cells_per_axis() const noexcept { return cells_per_axis_; }
  [[nodiscard]] std::size_t cell_count() const noexcept { return cells_.size(); }
  [[nodiscard]] std::size_t cell_of(const Point& p) const noexcept;
  /// True if every particle index appears exactly once, in the cell of its position.
  [[nodiscard]] bool consistent_with(const Configuration& config) const;

 private:
  [[nodiscard]] std::array<int, 3> coords(const Point& p) const noexcept;
  [[nodiscard]] std::size_t flat(int x, int y, int z) const noexcept;

  int dim_;
  int cells_per_axis_;
  double cell_side_;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace kawasaki
