#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "mtop/cli/commands.hpp"

using namespace mtop;
using namespace mtop::cli;
using io::json;

namespace {

const std::string kConfigs = MTOP_CONFIG_DIR;
const std::string kBinary = MTOP_CLI_PATH;

json read(const std::string& name) { return io::read_json_file(kConfigs + "/" + name); }

RunConfig small_chain(Options o = {}) {
  json j = read("n2_l3.json");
  j["D"] = 2;
  return load_config(j, o);
}

int run(const std::string& args) {
  const int status = std::system((kBinary + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("mtop_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

json strip_time(json j) {
  j["header"].erase("generated_at");
  return j;
}

}  // namespace

TEST(Config, ParsesModelAndOverrides) {
  Options o;
  o.seed = 99;
  o.tolerances = {{"ybe", 1e-13}};
  const RunConfig rc = small_chain(o);
  EXPECT_EQ(rc.seed, 99u);
  EXPECT_EQ(rc.tol["ybe"], 1e-13);
  EXPECT_EQ(rc.need_model().L, 3);
  EXPECT_EQ(rc.need_model().inhom[0], cplx(0.1, 0.05));
  EXPECT_EQ(rc.sectors_or_all().size(), 4u);
}

TEST(Config, Rejections) {
  json j = read("n2_l3.json");
  j["model"]["inhom"].push_back(0.2);
  EXPECT_THROW(load_config(j, {}), ConfigError);
  j = read("n2_l3.json");
  j["sector"] = {3, 1};
  EXPECT_THROW(load_config(j, {}), ConfigError);
  j = read("n2_l3.json");
  j["tolerances"] = {{"nonsense", 1e-3}};
  EXPECT_THROW(load_config(j, {}), ConfigError);
  j = read("n2_l3.json");
  j["model"]["gamma"] = "abc";
  EXPECT_THROW(load_config(j, {}), ConfigError);
  Options o;
  o.tolerances = {{"lax", -1.0}};
  EXPECT_THROW(load_config(read("n2_l3.json"), o), ConfigError);
  EXPECT_THROW(load_config(json::array(), {}), ConfigError);
  EXPECT_THROW(cmd_rs(load_config(json{{"seed", 1}}, {})), ConfigError);
}

TEST(Commands, YbeReportAndFault) {
  const RunConfig rc = small_chain();
  const json ok = cmd_ybe(rc).finish();
  EXPECT_TRUE(ok["pass"]);
  EXPECT_EQ(ok["header"]["command"], "ybe");
  EXPECT_EQ(ok["data"]["N"], json({2, 3}));
  Options o;
  o.exchange_sign_fault = true;
  const json bad = cmd_ybe(small_chain(o)).finish();
  EXPECT_FALSE(bad["pass"]);
  EXPECT_EQ(bad["first_failure"], "yang-baxter N=2");
}

TEST(Commands, ReportsAreDeterministic) {
  const RunConfig rc = small_chain();
  EXPECT_EQ(strip_time(cmd_master(rc).finish()), strip_time(cmd_master(rc).finish()));
}

TEST(Commands, MasterCarriesEigenData) {
  const json r = cmd_master(small_chain()).finish();
  EXPECT_TRUE(r["pass"]) << r.dump(1);
  EXPECT_EQ(r["data"]["eigenstates"].size(), 8u);
  EXPECT_TRUE(r["data"]["eigenstates"][0]["theta"].contains("()"));
}

TEST(Commands, TighterToleranceFails) {
  Options o;
  o.tolerances = {{"top_coeffs", 1e-30}};
  const json r = cmd_master(small_chain(o)).finish();
  EXPECT_FALSE(r["pass"]);
}

TEST(Commands, HirotaBothSides) {
  EXPECT_TRUE(cmd_hirota(small_chain(), "quantum").passed());
  json j = read("classical.json");
  j["trials"] = 20;
  EXPECT_TRUE(cmd_hirota(load_config(j, {}), "classical").passed());
  EXPECT_THROW(cmd_hirota(small_chain(), "sideways"), ConfigError);
}

TEST(Commands, RsWritesTrajectory) {
  Options o;
  o.csv = (std::filesystem::temp_directory_path() / "mtop_test_traj.csv").string();
  json j = read("n2_l3.json");
  j["rs"]["t_final"] = 0.1;
  const io::Report r = cmd_rs(load_config(j, o));
  EXPECT_TRUE(r.passed());
  std::ifstream f(o.csv);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header.rfind("t,re_u1,im_u1", 0), 0u);
}

TEST(Commands, BacklundFromInhomogeneities) {
  json j = read("n2_l3.json");
  j["sector"] = {2, 1};
  j["backlund"] = {{"trials", 5}, {"baker_trials", 5}};
  const json r = cmd_backlund(load_config(j, {})).finish();
  EXPECT_TRUE(r["pass"]) << r.dump(1);
  EXPECT_EQ(r["data"]["models"][0]["stages"].size(), 3u);
  j["backlund"]["order"] = {3};
  EXPECT_THROW(cmd_backlund(load_config(j, {})), ConfigError);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run("ybe --config " + kConfigs + "/n2_l3.json"), 0);
  EXPECT_EQ(run("ybe --config " + kConfigs + "/n2_l3.json --inject-fault exchange-sign"), 1);
  EXPECT_EQ(run("ybe --config " + kConfigs + "/n2_l3.json --tolerance ybe=1e-30"), 1);
  EXPECT_EQ(run("ybe --config " + kConfigs + "/n2_l3.json --tolerance ybe=x"), 2);
  EXPECT_EQ(run("ybe --config /nonexistent.json"), 2);
  EXPECT_EQ(run("ybe --config " + temp_file("broken.json", "{\"model\": [")), 2);
  EXPECT_EQ(run("hirota --side sideways --config " + kConfigs + "/n2_l3.json"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST(Binary, OutFileAndSeed) {
  const std::string out = (std::filesystem::temp_directory_path() / "mtop_test_out.json").string();
  ASSERT_EQ(run("ybe --seed 5 --out " + out + " --config " + kConfigs + "/n2_l3.json"), 0);
  const json r = io::read_json_file(out);
  EXPECT_EQ(r["header"]["seed"], 5);
  EXPECT_TRUE(r["pass"]);
}
