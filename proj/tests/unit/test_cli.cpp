#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "oracles.hpp"
#include "vjm/error.hpp"

using namespace vjm;
using namespace vjm::cli;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vjm_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

json fixture_json() {
  std::ifstream in(VJM_DATA_DIR "/orthoglide_bar.json");
  return json::parse(in);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST(Config, BundledFixtureLoads) {
  const auto m = load_config(VJM_DATA_DIR "/orthoglide_bar.json");
  EXPECT_EQ(m.L, 310.0);
  EXPECT_EQ(m.d, 69.1);
  EXPECT_EQ(m.Kb, oracle::orthoglide_Kb());
  EXPECT_EQ(m.Ktheta[0], m.Kb);
  EXPECT_EQ(m.Ktheta[1], m.Kb);
}

TEST(Config, FlatStiffnessListIsAccepted) {
  json j = fixture_json();
  json flat = json::array();
  for (const auto& row : j["Kb"])
    for (const auto& v : row) flat.push_back(v);
  j["Kb"] = flat;
  EXPECT_EQ(parse_config(j).Kb, oracle::orthoglide_Kb());
}

TEST(Config, UnitsTagIsMandatory) {
  json j = fixture_json();
  j.erase("units");
  EXPECT_THROW(parse_config(j), ConfigError);
  j["units"] = "m-N-rad";
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, MalformedInputs) {
  json j = fixture_json();
  j["L"] = "310";
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fixture_json();
  j["Kb"][2] = json::array({1, 2, 3});
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fixture_json();
  j["Ktheta"] = json::array({j["Kb"]});
  EXPECT_THROW(parse_config(j), ConfigError);

  const fs::path p = scratch("broken.json");
  std::ofstream(p) << "{ \"units\": ";
  EXPECT_THROW(load_config(p), ConfigError);
  EXPECT_THROW(load_config(scratch("missing.json")), ConfigError);
}

TEST(Config, SymmetryViolationNamesTheEntry) {
  json j = fixture_json();
  j["Kb"][1][5] = -2.0e3;
  try {
    parse_config(j).to_model();
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("symmetric"), std::string::npos);
  }
}

TEST(Config, InvariantViolations) {
  json j = fixture_json();
  j["L"] = 0.0;
  EXPECT_THROW(parse_config(j).to_model(), InvalidArgument);
  j = fixture_json();
  for (auto& row : j["Kb"])
    for (auto& v : row) v = 0.0;
  EXPECT_THROW(parse_config(j).to_model(), InvalidArgument);
}

TEST(Config, SaveLoadRoundTripIsBitIdentical) {
  auto m = oracle::orthoglide();
  m.d = oracle::orthoglide_width();
  m.L = 310.0 + 1.0 / 3.0;
  m.Ktheta[1](0, 0) = 2.2e4 * (1 + 1e-13);
  const fs::path p = scratch("roundtrip.json");
  save_config(m, p);
  const auto back = load_config(p);
  EXPECT_EQ(std::memcmp(&back.L, &m.L, sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(&back.d, &m.d, sizeof(double)), 0);
  EXPECT_EQ(back.Kb, m.Kb);
  EXPECT_EQ(back.Ktheta[0], m.Ktheta[0]);
  EXPECT_EQ(back.Ktheta[1], m.Ktheta[1]);
}

TEST(Config, AtomicWriteLeavesNoTemporaries) {
  const fs::path dir = scratch("atomic");
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_atomically(dir / "out.csv", "a\n");
  write_atomically(dir / "out.csv", "b\n");
  std::ifstream in(dir / "out.csv");
  std::string s((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(s, "b\n");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  EXPECT_THROW(write_atomically(dir / "no" / "such" / "dir.csv", "x"), InvalidArgument);
}

TEST(Direction, NamedAxesAndVectors) {
  EXPECT_EQ(parse_direction({"x"}), Vector6::Unit(0));
  EXPECT_EQ(parse_direction({"-x"}), -Vector6::Unit(0));
  EXPECT_EQ(parse_direction({"RZ"}), Vector6::Unit(5));
  EXPECT_EQ(parse_direction({"0", "0", "2", "0", "0", "0"}), Vector6::Unit(2));
  EXPECT_NEAR((parse_direction({"1,1,0,0,0,0"}) - Vector6(1, 1, 0, 0, 0, 0) / std::sqrt(2.0)).norm(), 0.0, 1e-15);
  EXPECT_THROW(parse_direction({"w"}), InvalidArgument);
  EXPECT_THROW(parse_direction({"0,0,0,0,0,0"}), InvalidArgument);
  EXPECT_THROW(parse_direction({"1", "2"}), InvalidArgument);
  EXPECT_THROW(parse_vector6({"1,2,3,4,5,abc"}, "offset"), InvalidArgument);
}

TEST(Stiffmat, FixtureAtStraightConfiguration) {
  const auto m = load_config(VJM_DATA_DIR "/orthoglide_bar.json");
  const auto a = unloaded_stiffness(m, 0.0, StiffnessPath::Analytic);
  EXPECT_EQ(a.rank.rank, 5);
  EXPECT_NEAR(a.K.K(0, 0), 4.40e4, 1e-9);
  EXPECT_NEAR(a.K.K(1, 1), 36.2, 1e-12);
  const auto n = unloaded_stiffness(m, 0.0, StiffnessPath::Numeric);
  EXPECT_LT((n.K.K - a.K.K).cwiseAbs().maxCoeff(), 1e-6 * a.K.K.cwiseAbs().maxCoeff());

  std::ostringstream out;
  print_stiffness(a, out);
  EXPECT_NE(out.str().find("4.40e+04"), std::string::npos);
  EXPECT_NE(out.str().find("-5.68e+03"), std::string::npos);
  EXPECT_NE(out.str().find("rank: 5"), std::string::npos);
  EXPECT_NE(out.str().find("null direction:   0.00e+00   0.00e+00   1.00e+00"), std::string::npos) << out.str();
}

TEST(Sweep, CsvFormatAndParseBack) {
  const auto m = oracle::orthoglide();
  const auto recs = force_deflection_sweep(m, -Vector6::Unit(0), 0.01, 4);
  const std::string csv = sweep_csv(recs);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const auto lines = split(csv, '\n');
  ASSERT_EQ(lines.size(), recs.size() + 1);
  EXPECT_EQ(lines[0], "displacement,fx,fy,fz,mx,my,mz,min_eig,buckled");
  EXPECT_EQ(lines[1].substr(0, 14), "0,0,0,0,0,0,0,");
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto f = split(lines[k + 1], ',');
    ASSERT_EQ(f.size(), 9u);
    EXPECT_EQ(std::stod(f[0]), recs[k].displacement);
    for (int c = 0; c < 6; ++c) EXPECT_EQ(std::stod(f[1 + c]), recs[k].full_wrench(c));
    EXPECT_EQ(std::stod(f[7]), recs[k].min_eig_reduced);
    EXPECT_EQ(f[8], "false");
  }
  // Secant slope of the first step.
  EXPECT_NEAR(recs[1].full_wrench(0) / recs[1].displacement, -4.40e4, 4.40e4 * 5e-3);
}

TEST(Sweep, BuckledRowIsFlagged) {
  const auto recs = force_deflection_sweep(oracle::orthoglide(), Vector6::Unit(0), 0.4, 8);
  const auto lines = split(sweep_csv(recs), '\n');
  EXPECT_EQ(lines.back().substr(lines.back().size() - 5), ",true");
  std::ostringstream out;
  print_sweep_summary(recs, out);
  EXPECT_NE(out.str().find("buckling detected at displacement 0.2800"), std::string::npos) << out.str();
}

TEST(Equilibrium, ReportFields) {
  const auto m = oracle::orthoglide();
  const json zero = equilibrium_report(m, Vector6::Zero());
  EXPECT_TRUE(zero["converged"].get<bool>());
  for (const auto& v : zero["total_wrench"]) EXPECT_EQ(v.get<double>(), 0.0);

  const json axial = equilibrium_report(m, -0.001 * Vector6::Unit(0));
  EXPECT_NEAR(axial["total_wrench"][0].get<double>(), -44.0, 0.05);
  ASSERT_EQ(axial["chains"].size(), 2u);
  EXPECT_TRUE(axial.contains("stiffness"));

  const json lift = equilibrium_report(m, 0.5 * Vector6::Unit(2));
  EXPECT_GT(std::abs(lift["chains"][0]["q"][0].get<double>()), 1e-3);
  EXPECT_NEAR(lift["total_wrench"][0].get<double>(), oracle::planar_straight_branch(m.Kb, m.L, m.L, 0.5).wrench(0), 1e-4);
}

TEST(Reduce, ReportReassembles) {
  const json r = reduce_report(oracle::orthoglide(), 0.0, StiffnessPath::Analytic);
  EXPECT_LT(r["reassembly_error"].get<double>(), 1e-9);
  EXPECT_NEAR(r["free_axis"][2].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(r["spring_matrix"].size(), 5u);
}

TEST(ErrorJson, CarriesKind) {
  EXPECT_EQ(error_json(ConfigError("x"))["error"], "config-error");
  const json b = error_json(BucklingDetected("y", -2.5));
  EXPECT_EQ(b["error"], "buckling-detected");
  EXPECT_EQ(b["eigenvalue"], -2.5);
  EXPECT_EQ(error_json(std::runtime_error("z"))["error"], "internal");
}
