#include "kawasaki/configuration.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace kawasaki {

Configuration::Configuration(std::vector<Particle> particles) : particles_(std::move(particles)) {}

Configuration Configuration::from_positions(std::span<const Point> positions) {
  std::vector<Particle> ps;
  ps.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) ps.push_back({static_cast<ParticleId>(i), positions[i]});
  return Configuration(std::move(ps));
}

std::optional<std::size_t> Configuration::index_of(ParticleId id) const noexcept {
  // ids are usually 0..n-1 in order
  if (id < particles_.size() && particles_[id].id == id) return static_cast<std::size_t>(id);
  auto it = std::find_if(particles_.begin(), particles_.end(), [id](const Particle& p) { return p.id == id; });
  if (it == particles_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - particles_.begin());
}

void Configuration::add(Particle p) { particles_.push_back(p); }

void Configuration::validate(const TorusDomain& domain) const {
  std::unordered_set<ParticleId> seen;
  seen.reserve(particles_.size());
  for (const auto& p : particles_) {
    if (!domain.contains(p.position)) {
      throw std::invalid_argument("particle " + std::to_string(p.id) + " lies outside the torus");
    }
    if (!seen.insert(p.id).second) throw std::invalid_argument("duplicate particle id " + std::to_string(p.id));
  }
}

}  // namespace kawasaki
