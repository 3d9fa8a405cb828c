#include "cli/config.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "vjm/error.hpp"

namespace vjm::cli {

namespace {

using nlohmann::json;

double number_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Matrix6 matrix_field(const json& value, const std::string& name) {
  Matrix6 K;
  if (value.is_array() && value.size() == 36) {
    for (int k = 0; k < 36; ++k) {
      if (!value[k].is_number()) throw ConfigError(name + " entries must be numbers");
      K(k / 6, k % 6) = value[k].get<double>();
    }
    return K;
  }
  if (!value.is_array() || value.size() != 6)
    throw ConfigError(name + " must be 6 rows of 6 numbers (or 36 numbers row-major)");
  for (int r = 0; r < 6; ++r) {
    const json& row = value[r];
    if (!row.is_array() || row.size() != 6) throw ConfigError(name + " row " + std::to_string(r + 1) + " must have 6 numbers");
    for (int c = 0; c < 6; ++c) {
      if (!row[c].is_number()) throw ConfigError(name + " entries must be numbers");
      K(r, c) = row[c].get<double>();
    }
  }
  return K;
}

json matrix_json(const Matrix6& K) {
  json rows = json::array();
  for (int r = 0; r < 6; ++r) {
    json row = json::array();
    for (int c = 0; c < 6; ++c) row.push_back(K(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

ParallelogramModel ModelConfig::to_model(double reference_angle) const {
  if (units != kUnitsTag) throw ConfigError("units must be \"" + std::string(kUnitsTag) + "\", got \"" + units + "\"");
  ParallelogramModel m;
  m.L = L;
  m.d = d;
  m.Kb = Kb;
  m.Ktheta = Ktheta.value_or(std::array<Matrix6, 2>{Kb, Kb});
  m.reference_angle = reference_angle;
  m.validate();
  return m;
}

ModelConfig ModelConfig::from_model(const ParallelogramModel& model) {
  ModelConfig c;
  c.L = model.L;
  c.d = model.d;
  c.Kb = model.Kb;
  if (model.Ktheta[0] != model.Kb || model.Ktheta[1] != model.Kb) c.Ktheta = model.Ktheta;
  return c;
}

ModelConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  ModelConfig c;
  if (!j.contains("units") || !j.at("units").is_string())
    throw ConfigError("missing mandatory string field 'units' (expected \"" + std::string(kUnitsTag) + "\")");
  c.units = j.at("units").get<std::string>();
  if (c.units != kUnitsTag)
    throw ConfigError("units must be \"" + std::string(kUnitsTag) + "\", got \"" + c.units + "\"");
  c.L = number_field(j, "L");
  c.d = number_field(j, "d");
  if (!j.contains("Kb")) throw ConfigError("missing field 'Kb'");
  c.Kb = matrix_field(j.at("Kb"), "Kb");
  if (j.contains("Ktheta")) {
    const json& kt = j.at("Ktheta");
    if (!kt.is_array() || kt.size() != 2) throw ConfigError("Ktheta must be a list of two 6x6 matrices");
    c.Ktheta = std::array<Matrix6, 2>{matrix_field(kt[0], "Ktheta[1]"), matrix_field(kt[1], "Ktheta[2]")};
  }
  return c;
}

nlohmann::json to_json(const ModelConfig& config) {
  json j;
  j["units"] = config.units;
  j["L"] = config.L;
  j["d"] = config.d;
  j["Kb"] = matrix_json(config.Kb);
  if (config.Ktheta) j["Ktheta"] = json::array({matrix_json((*config.Ktheta)[0]), matrix_json((*config.Ktheta)[1])});
  return j;
}

ParallelogramModel load_config(const std::filesystem::path& path, double reference_angle) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_config(j).to_model(reference_angle);
}

void save_config(const ParallelogramModel& model, const std::filesystem::path& path) {
  write_atomically(path, to_json(ModelConfig::from_model(model)).dump(2) + "\n");
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw InvalidArgument("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidArgument("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

}  // namespace vjm::cli
