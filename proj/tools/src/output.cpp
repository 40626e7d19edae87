#include "output.hpp"

#include <stdexcept>

namespace kawasaki::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view header) : out_(path), path_(path) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << header << '\n';
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed for " + path_.string());
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json to_json(const Certificate& c) {
  json j;
  j["valid"] = c.valid;
  j["operator"] = c.free_operator ? "Lbar" : "Ldelta";
  j["theta_low"] = c.theta_low;
  j["theta_high"] = c.theta_high;
  j["t"] = c.t;
  j["horizon"] = c.horizon;
  j["ratio"] = c.ratio;
  j["norm_bound"] = c.valid ? json(c.norm_bound) : json("inf");
  j["single_application_bound"] = c.single_application_bound;
  j["per_factor_bounds"] = c.per_factor_bounds;
  return j;
}

json to_json(const RadialProfile& p) {
  return json{{"family", std::string(to_string(p.family()))},
              {"amplitude", p.amplitude()},
              {"scale", p.scale()},
              {"cutoff", p.cutoff()},
              {"tail_fraction", p.tail_fraction()},
              {"integral", p.integral()}};
}

json to_json(const KernelSpec& k) {
  return json{{"jump", to_json(k.a)},
              {"potential", to_json(k.phi)},
              {"alpha", k.alpha},
              {"mean_phi", k.mean_phi},
              {"sup_phi", k.sup_phi},
              {"cutoff_radius", k.cutoff_radius},
              {"exclude_self_term", k.exclude_self_term}};
}

}  // namespace kawasaki::cli
