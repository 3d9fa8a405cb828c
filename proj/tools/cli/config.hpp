#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "vjm/linkage.hpp"

namespace vjm::cli {

inline constexpr const char* kUnitsTag = "mm-N-rad";

/// On-disk model description. See docs/config_format.md.
struct ModelConfig {
  double L = 0.0;
  double d = 0.0;
  Matrix6 Kb = Matrix6::Zero();
  std::optional<std::array<Matrix6, 2>> Ktheta;
  std::string units = kUnitsTag;

  ParallelogramModel to_model(double reference_angle = 0.0) const;
  static ModelConfig from_model(const ParallelogramModel& model);
};

/// Throws ConfigError on malformed input or a wrong units tag. Does not check
/// the model invariants; `to_model` does.
ModelConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ModelConfig& config);

/// Reads, parses and validates. Invariant violations surface as
/// InvalidArgument with a message naming the invariant.
ParallelogramModel load_config(const std::filesystem::path& path, double reference_angle = 0.0);

void save_config(const ParallelogramModel& model, const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace vjm::cli
