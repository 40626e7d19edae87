#include "kawasaki/cell_list.hpp"

#include <algorithm>
#include <cmath>

namespace kawasaki {

CellList::CellList(const TorusDomain& domain, double min_side, int max_cells_per_axis) : dim_(domain.dimension()) {
  const double L = domain.side_length();
  int m = min_side > 0.0 ? static_cast<int>(std::floor(L / min_side)) : max_cells_per_axis;
  m = std::clamp(m, 1, max_cells_per_axis);
  if (m < 3) m = 1;
  cells_per_axis_ = m;
  cell_side_ = L / m;
  std::size_t total = 1;
  for (int c = 0; c < dim_; ++c) total *= static_cast<std::size_t>(m);
  cells_.assign(total, {});
}

std::array<int, 3> CellList::coords(const Point& p) const noexcept {
  std::array<int, 3> c{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    c[k] = std::min(static_cast<int>(p[k] / cell_side_), cells_per_axis_ - 1);
  }
  return c;
}

std::size_t CellList::flat(int x, int y, int z) const noexcept {
  const int m = cells_per_axis_;
  auto wrap = [m](int i) { return ((i % m) + m) % m; };
  std::size_t idx = static_cast<std::size_t>(wrap(x));
  if (dim_ > 1) idx += static_cast<std::size_t>(m) * static_cast<std::size_t>(wrap(y));
  if (dim_ > 2) idx += static_cast<std::size_t>(m) * static_cast<std::size_t>(m) * static_cast<std::size_t>(wrap(z));
  return idx;
}

std::size_t CellList::cell_of(const Point& p) const noexcept {
  const auto c = coords(p);
  return flat(c[0], c[1], c[2]);
}

void CellList::rebuild(const Configuration& config) {
  for (auto& cell : cells_) cell.clear();
  for (std::size_t i = 0; i < config.size(); ++i) cells_[cell_of(config[i].position)].push_back(i);
}

void CellList::move(std::size_t index, const Point& from, const Point& to) {
  const std::size_t a = cell_of(from);
  const std::size_t b = cell_of(to);
  if (a == b) return;
  auto& src = cells_[a];
  auto it = std::find(src.begin(), src.end(), index);
  if (it != src.end()) {
    *it = src.back();
    src.pop_back();
  }
  cells_[b].push_back(index);
}

bool CellList::consistent_with(const Configuration& config) const {
  std::vector<int> seen(config.size(), 0);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (std::size_t idx : cells_[c]) {
      if (idx >= config.size() || cell_of(config[idx].position) != c) return false;
      ++seen[idx];
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

}  // namespace kawasaki
