#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "energy.hpp"
#include "output.hpp"
#include "scenario.hpp"

using namespace triline;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("every shipped preset loads cleanly and builds a valid state") {
  for (const std::string& name : preset_names()) {
    INFO(name);
    const Scenario sc = load_preset(name);
    const SimState st = build_state(sc.config);
    CHECK(!st.curves.empty());
    CHECK(!st.phases.empty());
    // measures partition the domain
    CHECK_NOTHROW(region_measure(st.topology, st.curves));
  }
}

TEST_CASE("slip section with zero coefficients is a validation error") {
  Scenario base = load_preset("chem_flat");
  ScenarioConfig cfg = base.config;
  cfg.slip.push_back(SlipSpec{"flat", SlipParams{0.0, 0.0}});
  const std::string text = serialize_scenario(cfg);
  try {
    load_scenario_text(text, "inline");
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::ValidationError);
    CHECK(std::string(e.what()).find("slip") != std::string::npos);
  }
}

TEST_CASE("validation reports every error, not just the first") {
  // three independent problems: negative mass, bad marker count, unknown phase
  std::string text = load_preset("chem_flat").canonical_text;
  text += "\n[phase.bogus]\nmass = -1\n";
  text += "[curve.tiny]\nkind = chain\npoints = 0 0 1 1\nmarkers = 2\n";
  text += "side_minus = nope\nside_plus = top\nconstraint = free\n";
  try {
    load_scenario_text(text, "inline");
    CHECK(false);
  } catch (const TrilineError& e) {
    const std::string msg = e.what();
    CHECK(e.code() == Err::ValidationError);
    CHECK(msg.find("phase.bogus.mass") != std::string::npos);
    CHECK(msg.find("curve.tiny.markers") != std::string::npos);
    CHECK(msg.find("side_minus") != std::string::npos);
  }
}

TEST_CASE("malformed syntax raises ParseError with the line number") {
  try {
    load_scenario_text("[general]\nmode planar\n", "inline");
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::ParseError);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("write -> load round trip reproduces the scenario value for value") {
  for (const std::string& name : preset_names()) {
    const Scenario a = load_preset(name);
    const Scenario b = load_scenario_text(a.canonical_text, "roundtrip");
    CHECK(a.canonical_text == b.canonical_text);
  }
}

TEST_CASE("identical config produces bit-identical time series") {
  auto run_once = [&](const std::filesystem::path& dir) {
    Scenario sc = load_preset("chem_flat");
    sc.config.t_end = 0.05;
    sc.config.output_every = 5;
    SimState st = build_state(sc.config);
    RunConfig rc = build_run_config(sc.config);
    rc.out_dir = dir.string();
    run(st, rc);
    return slurp((dir / "timeseries.csv").string());
  };
  const std::string a = run_once(temp_dir("triline_det_a"));
  const std::string b = run_once(temp_dir("triline_det_b"));
  CHECK(a == b);
  CHECK(a.find("t,E_total,E_bulk") != std::string::npos);
}

TEST_CASE("checkpoint round trip is bit exact and resuming reproduces the run") {
  const auto dir = temp_dir("triline_ck");
  Scenario sc = load_preset("lens_equal_tensions");
  for (CurveSpec& cv : sc.config.curves) cv.markers = cv.markers == 200 ? 50 : 30;
  sc.config.dt = 2e-5;
  const std::string text = serialize_scenario(sc.config);

  SimState a = build_state(sc.config);
  RunConfig rc = build_run_config(sc.config);
  for (int i = 0; i < 60; ++i) step(a, rc.mobility, rc.closures);
  const std::string ck = (dir / "mid.tlck").string();
  write_checkpoint(ck, text, a);
  const Checkpoint loaded = read_checkpoint(ck);
  CHECK(loaded.scenario_text == text);
  REQUIRE(loaded.state.curves.size() == a.curves.size());
  CHECK(loaded.state.time == a.time);
  CHECK(loaded.state.step_count == a.step_count);
  for (size_t c = 0; c < a.curves.size(); ++c) {
    for (int i = 0; i < a.curves[c].n_markers(); ++i) {
      CHECK(loaded.state.curves[c].markers[i].x == a.curves[c].markers[i].x);
      CHECK(loaded.state.curves[c].markers[i].y == a.curves[c].markers[i].y);
    }
    for (int s = 0; s < a.curves[c].n_segments(); ++s)
      CHECK(loaded.state.curves[c].segment_mass[s] == a.curves[c].segment_mass[s]);
  }
  for (size_t p = 0; p < a.phases.size(); ++p)
    CHECK(loaded.state.phases[p].mass == a.phases[p].mass);

  // continue both for 40 more steps: identical trajectories
  SimState b = loaded.state;
  for (int i = 0; i < 40; ++i) {
    step(a, rc.mobility, rc.closures);
    step(b, rc.mobility, rc.closures);
  }
  for (size_t c = 0; c < a.curves.size(); ++c)
    for (int i = 0; i < a.curves[c].n_markers(); ++i)
      CHECK(norm(a.curves[c].markers[i] - b.curves[c].markers[i]) == 0.0);
  CHECK(a.total_mass() == b.total_mass());
}

TEST_CASE("unknown preset or missing file reports IoError") {
  try {
    load_scenario_or_preset("definitely_missing_scenario");
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::IoError);
  }
}

TEST_CASE("snapshot file carries the documented marker table") {
  const auto dir = temp_dir("triline_snap");
  Scenario sc = load_preset("chem_flat");
  SimState st = build_state(sc.config);
  const std::string path = (dir / "snap.txt").string();
  write_snapshot(path, st);
  const std::string text = slurp(path);
  CHECK(text.find("curve_id marker_index x y segment_mass side_minus side_plus") !=
        std::string::npos);
  CHECK(text.find("flat 0 ") != std::string::npos);
  CHECK(text.find(" bottom top") != std::string::npos);
  CHECK(text.find("# units: SI") != std::string::npos);
}

TEST_CASE("report renderer produces a table and an SVG from a run") {
  const auto dir = temp_dir("triline_report");
  Scenario sc = load_preset("chem_flat");
  sc.config.t_end = 0.05;
  sc.config.output_every = 10;
  SimState st = build_state(sc.config);
  RunConfig rc = build_run_config(sc.config);
  rc.out_dir = dir.string();
  run(st, rc);
  const std::string table = render_report_table((dir / "timeseries.csv").string());
  CHECK(table.find("E_total") != std::string::npos);
  CHECK(table.find("rows:") != std::string::npos);
  const std::string svg_path = (dir / "charts.svg").string();
  render_timeseries_svg((dir / "timeseries.csv").string(), svg_path);
  const std::string svg = slurp(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("mutated scenario text fails cleanly, never crashes") {
  const std::string base = load_preset("lens_equal_tensions").canonical_text;
  std::mt19937 rng(99);
  std::uniform_int_distribution<size_t> pos(0, base.size() - 1);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> ch(32, 126);
  int loaded = 0, rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::string text = base;
    for (int edits = 0; edits < 1 + trial % 4; ++edits) {
      const size_t at = pos(rng) % text.size();
      switch (kind(rng)) {
        case 0: text[at] = static_cast<char>(ch(rng)); break;
        case 1: text.erase(at, 1 + at % 7); break;
        case 2: text.insert(at, "="); break;
        default: text.insert(at, "\n000"); break;
      }
    }
    try {
      load_scenario_text(text, "fuzz");
      ++loaded;  // a benign mutation (comment, whitespace, value tweak)
    } catch (const TrilineError&) {
      ++rejected;
    }
  }
  CHECK(loaded + rejected == 200);
  CHECK(rejected > 50);  // most mutations must be caught
}

TEST_CASE("scenario schema covers every closure section") {
  const std::string text = load_preset("lens_equal_tensions").canonical_text;
  CHECK(text.find("[eos.bulk.lobeL]") != std::string::npos);
  CHECK(text.find("[eos.surface.left]") != std::string::npos);
  CHECK(text.find("[sorption.left.plus]") != std::string::npos);
  CHECK(text.find("[slip.left]") != std::string::npos);
  CHECK(text.find("[junction.T]") != std::string::npos);
}
