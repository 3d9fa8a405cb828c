#include "cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "vjm/error.hpp"

namespace vjm::cli {

namespace {

using nlohmann::json;

std::string sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%10.2e", v);
  return buf;
}

std::string full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw InvalidArgument(what + ": '" + s + "' is not a finite number");
  return v;
}

std::vector<std::string> split_components(const std::vector<std::string>& tokens) {
  std::vector<std::string> parts;
  for (const auto& t : tokens) {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                 item.end());
      if (!item.empty()) parts.push_back(item);
    }
  }
  return parts;
}

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) rows.push_back(vector_json(M.row(r).transpose()));
  return rows;
}

Vector6 canonical_sign(Vector6 v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v(k) < 0 ? Vector6(-v) : v;
}

}  // namespace

StiffnessReport unloaded_stiffness(const ParallelogramModel& model, double q, StiffnessPath path) {
  StiffnessReport r;
  r.q = q;
  r.path = path;
  if (path == StiffnessPath::Analytic) {
    r.K = analytic_unloaded_stiffness(model.Kb, model.d, q);
  } else {
    ParallelogramModel m = model;
    m.reference_angle = q;
    m.validate();
    const EquilibriumResult eq = solve_parallelogram(m, m.unloaded_pose());
    if (!eq.converged()) throw SingularConfiguration("unloaded equilibrium did not converge");
    r.K = parallelogram_stiffness(m, eq);
  }
  r.rank = rank_analysis(r.K);
  return r;
}

void print_stiffness(const StiffnessReport& report, std::ostream& out) {
  out << "Cartesian stiffness at q = " << full(report.q) << " rad ("
      << (report.path == StiffnessPath::Analytic ? "analytic" : "numeric") << ")\n";
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) out << (c ? " " : "") << sci3(report.K.K(r, c));
    out << '\n';
  }
  out << "rank: " << report.rank.rank << '\n';
  out << "singular values:";
  for (int k = 0; k < 6; ++k) out << ' ' << sci3(report.rank.singular_values(k));
  out << '\n';
  for (const auto& n : report.rank.null_basis) {
    const Vector6 v = canonical_sign(n);
    out << "null direction:";
    for (int k = 0; k < 6; ++k) out << ' ' << sci3(v(k));
    out << '\n';
  }
}

Vector6 parse_vector6(const std::vector<std::string>& tokens, const std::string& what) {
  const auto parts = split_components(tokens);
  if (parts.size() != 6)
    throw InvalidArgument(what + " needs 6 components, got " + std::to_string(parts.size()));
  Vector6 v;
  for (int k = 0; k < 6; ++k) v(k) = parse_number(parts[k], what);
  return v;
}

Vector6 parse_direction(const std::vector<std::string>& tokens) {
  if (tokens.size() == 1 && tokens[0].find(',') == std::string::npos) {
    static const char* const names[] = {"x", "y", "z", "rx", "ry", "rz"};
    std::string name = tokens[0];
    double sign = 1.0;
    if (!name.empty() && (name[0] == '-' || name[0] == '+')) {
      sign = name[0] == '-' ? -1.0 : 1.0;
      name.erase(0, 1);
    }
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    for (int k = 0; k < 6; ++k)
      if (name == names[k]) return sign * Vector6::Unit(k);
    throw InvalidArgument("direction '" + tokens[0] + "' is not one of x, y, z, rx, ry, rz or six numbers");
  }
  const Vector6 v = parse_vector6(tokens, "direction");
  const double n = v.norm();
  if (n == 0.0) throw InvalidArgument("direction must be non-zero");
  return v / n;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string s = "displacement,fx,fy,fz,mx,my,mz,min_eig,buckled\n";
  for (const auto& r : records) {
    s += full(r.displacement);
    for (int k = 0; k < 6; ++k) s += ',' + full(r.converged ? r.full_wrench(k) : std::nan(""));
    s += ',' + full(r.converged ? r.min_eig_reduced : std::nan(""));
    s += r.buckled ? ",true\n" : ",false\n";
  }
  return s;
}

void print_sweep_summary(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << "records: " << records.size() << '\n';
  if (records.empty()) return;
  const SweepRecord& last = records.back();
  if (last.buckled) {
    out << "buckling detected at displacement " << full(last.displacement) << '\n';
  } else if (!last.converged) {
    out << "solver did not converge at displacement " << full(last.displacement) << '\n';
  } else {
    out << "no buckling up to displacement " << full(last.displacement) << '\n';
  }
  out << "min indicator: " << full(std::min_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
                                     return a.min_eig_reduced < b.min_eig_reduced;
                                   })->min_eig_reduced)
      << '\n';
}

nlohmann::json equilibrium_report(const ParallelogramModel& model, const Vector6& offset) {
  const Pose target = Pose::from_vector(model.unloaded_pose().vector() + offset);
  const EquilibriumResult eq = solve_parallelogram(model, target);
  json j;
  j["target"] = vector_json(target.vector());
  j["converged"] = eq.converged();
  j["total_wrench"] = vector_json(eq.total_wrench);
  json chains = json::array();
  for (Chain c : kChains) {
    const ChainEquilibrium& ce = eq.chain(c);
    json cj;
    cj["chain"] = chain_number(c);
    cj["q"] = vector_json(ce.state.q);
    cj["theta"] = vector_json(ce.state.theta);
    cj["lambda"] = vector_json(ce.state.lambda);
    cj["residual"] = ce.residual;
    cj["iterations"] = ce.iterations;
    cj["converged"] = ce.converged;
    chains.push_back(cj);
  }
  j["chains"] = chains;
  if (eq.converged()) {
    const StabilityReport s = stability(model, eq);
    j["min_eig"] = s.reduced_min_eig;
    j["spring_min_eig"] = s.spring_min_eig;
    if (s.spring_min_eig > 0.0) j["stiffness"] = matrix_json(parallelogram_stiffness(model, eq).K);
  }
  return j;
}

nlohmann::json reduce_report(const ParallelogramModel& model, double q, StiffnessPath path) {
  const StiffnessReport s = unloaded_stiffness(model, q, path);
  const PseudoRigidModel p = pseudo_rigid_reduction(s.K);
  json j;
  j["q"] = q;
  j["spring_axes"] = matrix_json(p.spring_axes);
  j["spring_matrix"] = matrix_json(p.spring_matrix);
  j["free_axis"] = vector_json(canonical_sign(p.free_axis));
  j["reassembly_error"] = (p.reassemble() - s.K.K).cwiseAbs().maxCoeff() / s.K.K.cwiseAbs().maxCoeff();
  return j;
}

nlohmann::json error_json(const std::exception& e) {
  json j;
  if (const auto* ve = dynamic_cast<const Error*>(&e)) {
    j["error"] = ve->kind();
    if (const auto* b = dynamic_cast<const BucklingDetected*>(&e)) j["eigenvalue"] = b->eigenvalue();
  } else {
    j["error"] = "internal";
  }
  j["message"] = e.what();
  return j;
}

}  // namespace vjm::cli
