#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "vjm/equilibrium.hpp"
#include "vjm/stiffness.hpp"

namespace vjm::cli {

enum class StiffnessPath { Analytic, Numeric };

struct StiffnessReport {
  double q = 0.0;
  StiffnessPath path = StiffnessPath::Analytic;
  CartesianStiffness K;
  RankReport rank;
};

/// Unloaded stiffness at bar angle q, either closed-form or through the
/// equilibrium/tangent-system route with the model re-referenced at q.
StiffnessReport unloaded_stiffness(const ParallelogramModel& model, double q, StiffnessPath path);
void print_stiffness(const StiffnessReport& report, std::ostream& out);

/// Accepts x, y, z, rx, ry, rz with an optional leading '-', or six numbers
/// (one token per component or a single comma-separated token). Returns a
/// unit vector.
Vector6 parse_direction(const std::vector<std::string>& tokens);
Vector6 parse_vector6(const std::vector<std::string>& tokens, const std::string& what);

std::string sweep_csv(const std::vector<SweepRecord>& records);
void print_sweep_summary(const std::vector<SweepRecord>& records, std::ostream& out);

nlohmann::json equilibrium_report(const ParallelogramModel& model, const Vector6& offset);
nlohmann::json reduce_report(const ParallelogramModel& model, double q, StiffnessPath path);

/// Single-line diagnostic written to stderr by the executable.
nlohmann::json error_json(const std::exception& e);

}  // namespace vjm::cli
