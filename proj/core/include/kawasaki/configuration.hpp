#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kawasaki/torus.hpp"

namespace kawasaki {

using ParticleId = std::uint64_t;

struct Particle {
  ParticleId id;
  Point position;

  friend bool operator==(const Particle&, const Particle&) = default;
};

/// Finite point configuration on a torus. Particle order is stable and
/// identifiers are unique; positions are kept in [0, L)^d by the owner.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Particle> particles);
  /// Assigns identifiers 0, 1, ... in order.
  static Configuration from_positions(std::span<const Point> positions);

  [[nodiscard]] std::size_t size() const noexcept { return particles_.size(); }
  [[nodiscard]] bool empty() const noexcept { return particles_.empty(); }
  [[nodiscard]] const std::vector<Particle>& particles() const noexcept { return particles_; }
  [[nodiscard]] const Particle& operator[](std::size_t i) const noexcept { return particles_[i]; }

  [[nodiscard]] std::optional<std::size_t> index_of(ParticleId id) const noexcept;
  void move(std::size_t index, const Point& to) noexcept { particles_[index].position = to; }
  void add(Particle p);

  /// Throws std::invalid_argument if a coordinate leaves the domain or an id repeats.
  void validate(const TorusDomain& domain) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Particle> particles_;
};

}  // namespace kawasaki
