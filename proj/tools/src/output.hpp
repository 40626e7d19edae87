#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include <kawasaki/kernels.hpp>
#include <kawasaki/scheduler.hpp>

namespace kawasaki::cli {

using json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip every double.
inline std::string num(double v) { return fmt::format("{:.17g}", v); }

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view header);
  void row(std::initializer_list<std::string> cells);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

void write_json(const std::filesystem::path& path, const json& doc);

json to_json(const Certificate& c);
json to_json(const RadialProfile& p);
json to_json(const KernelSpec& k);

}  // namespace kawasaki::cli
