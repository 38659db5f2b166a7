#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "triline.h"

namespace {
std::string temp_dir(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}
}  // namespace

TEST_CASE("preset listing is exposed through the C API") {
  REQUIRE(tl_preset_count() > 0);
  bool found = false;
  for (int i = 0; i < tl_preset_count(); ++i)
    if (std::string(tl_preset_name(i)) == "lens_equal_tensions") found = true;
  CHECK(found);
  CHECK(tl_preset_name(tl_preset_count()) == nullptr);
}

TEST_CASE("scenario and simulation lifecycle through opaque handles") {
  tl_scenario* sc = nullptr;
  REQUIRE(tl_scenario_open("chem_flat", &sc) == TL_OK);
  tl_sim* sim = nullptr;
  REQUIRE(tl_sim_create(sc, &sim) == TL_OK);
  CHECK(tl_sim_time(sim) == 0.0);
  const double m0 = tl_sim_total_mass(sim);
  CHECK(tl_sim_steps(sim, 100) == TL_OK);
  CHECK(tl_sim_step_count(sim) == 100);
  CHECK(tl_sim_time(sim) > 0.0);
  CHECK(std::abs(tl_sim_total_mass(sim) - m0) <= 1e-11 * m0);
  double e[4] = {};
  REQUIRE(tl_sim_energy(sim, e) == TL_OK);
  CHECK(std::isfinite(e[0]));
  CHECK(e[0] == doctest::Approx(e[1] + e[2] + e[3]));
  tl_sim_free(sim);
  tl_scenario_free(sc);
}

TEST_CASE("run writes outputs and reports monotone decay") {
  const std::string dir = temp_dir("triline_capi_run");
  tl_scenario* sc = nullptr;
  REQUIRE(tl_scenario_open("chem_flat", &sc) == TL_OK);
  tl_sim* sim = nullptr;
  REQUIRE(tl_sim_create(sc, &sim) == TL_OK);
  tl_run_stats stats{};
  REQUIRE(tl_sim_run(sim, dir.c_str(), 0, &stats) == TL_OK);
  CHECK(stats.steps > 0);
  CHECK(stats.E_final <= stats.E_initial);
  CHECK(stats.worst_energy_increase <= 1e-9 * std::abs(stats.E_initial));
  CHECK(std::filesystem::exists(dir + "/timeseries.csv"));
  CHECK(std::filesystem::exists(dir + "/snapshot_final.txt"));
  CHECK(std::filesystem::exists(dir + "/final.tlck"));
  tl_sim_free(sim);
  tl_scenario_free(sc);

  // resume from the final checkpoint
  tl_sim* resumed = nullptr;
  REQUIRE(tl_sim_open_checkpoint((dir + "/final.tlck").c_str(), &resumed) == TL_OK);
  CHECK(tl_sim_steps(resumed, 5) == TL_OK);
  tl_sim_free(resumed);
}

TEST_CASE("checkpoint round trip via the C API") {
  const std::string dir = temp_dir("triline_capi_ck");
  tl_scenario* sc = nullptr;
  REQUIRE(tl_scenario_open("junction_star", &sc) == TL_OK);
  tl_sim* sim = nullptr;
  REQUIRE(tl_sim_create(sc, &sim) == TL_OK);
  REQUIRE(tl_sim_steps(sim, 50) == TL_OK);
  const std::string ck = dir + "/mid.tlck";
  REQUIRE(tl_sim_write_checkpoint(sim, ck.c_str()) == TL_OK);
  tl_sim* twin = nullptr;
  REQUIRE(tl_sim_open_checkpoint(ck.c_str(), &twin) == TL_OK);
  REQUIRE(tl_sim_steps(sim, 25) == TL_OK);
  REQUIRE(tl_sim_steps(twin, 25) == TL_OK);
  CHECK(tl_sim_time(sim) == tl_sim_time(twin));
  CHECK(tl_sim_total_mass(sim) == tl_sim_total_mass(twin));
  double ea[4], eb[4];
  REQUIRE(tl_sim_energy(sim, ea) == TL_OK);
  REQUIRE(tl_sim_energy(twin, eb) == TL_OK);
  CHECK(ea[0] == eb[0]);
  tl_sim_free(sim);
  tl_sim_free(twin);
  tl_scenario_free(sc);
}

TEST_CASE("eos report runs the Gibbs-Duhem scan") {
  tl_scenario* sc = nullptr;
  REQUIRE(tl_scenario_open("lens_equal_tensions", &sc) == TL_OK);
  char* text = nullptr;
  int fails = -1;
  REQUIRE(tl_eos_report(sc, &text, &fails) == TL_OK);
  CHECK(fails == 0);
  CHECK(std::string(text).find("ok") != std::string::npos);
  tl_string_free(text);
  tl_scenario_free(sc);
}

TEST_CASE("transport verification catalog through the C API") {
  char* csv = nullptr;
  REQUIRE(tl_verify_transport("ball_expand_const", 1, &csv) == TL_OK);
  const std::string s = csv;
  CHECK(s.find("case,level,residual,order") != std::string::npos);
  CHECK(s.find("ball_expand_const,0,") != std::string::npos);
  tl_string_free(csv);
  char* bad = nullptr;
  CHECK(tl_verify_transport("nope", 1, &bad) == TL_ERR_INVALID);
}

TEST_CASE("report renderer through the C API") {
  const std::string dir = temp_dir("triline_capi_report");
  tl_scenario* sc = nullptr;
  REQUIRE(tl_scenario_open("chem_flat", &sc) == TL_OK);
  tl_sim* sim = nullptr;
  REQUIRE(tl_sim_create(sc, &sim) == TL_OK);
  REQUIRE(tl_sim_run(sim, dir.c_str(), 0, nullptr) == TL_OK);
  char* table = nullptr;
  const std::string svg = dir + "/charts.svg";
  REQUIRE(tl_report_render((dir + "/timeseries.csv").c_str(), svg.c_str(), &table) == TL_OK);
  CHECK(std::string(table).find("E_total") != std::string::npos);
  CHECK(std::filesystem::exists(svg));
  tl_string_free(table);
  tl_sim_free(sim);
  tl_scenario_free(sc);
}

TEST_CASE("failures map to stable status codes with messages") {
  tl_scenario* sc = nullptr;
  CHECK(tl_scenario_open("definitely_not_there", &sc) == TL_ERR_IO);
  CHECK(std::strlen(tl_last_error()) > 0);
  CHECK(tl_scenario_open(nullptr, &sc) == TL_ERR_INVALID);
  CHECK(std::string(tl_status_name(TL_ERR_TENSION_DEPLETED)) == "tension depleted");

  // a syntactically broken scenario file
  const std::string dir = temp_dir("triline_capi_bad");
  const std::string path = dir + "/bad.ini";
  {
    std::ofstream f(path);
    f << "[general]\nmode planar\n";
  }
  CHECK(tl_scenario_open(path.c_str(), &sc) == TL_ERR_PARSE);
}
