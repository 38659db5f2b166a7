#pragma once

// Scenario configuration: plain-text sectioned key=value files describing the
// domain, phases and their bulk EOS, initial curves (analytic primitives),
// surface EOS, transmission closures, junctions, region topology and the
// numerical parameters. Loading either yields a fully validated config or a
// ValidationError listing every violation found.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dynamics.hpp"

namespace triline {

struct PhaseSpec {
  std::string label;
  double mass = 0.0;
  BulkEos eos;
};

struct CurveSpec {
  std::string id;
  std::string kind;  // "arc" | "chain"
  Vec2 center{};
  double radius = 0.0;
  double angle_start_deg = 0.0, angle_end_deg = 0.0;  // arc sweep, signed
  std::vector<Vec2> points;                           // chain vertices
  int markers = 0;
  double rho_s = 0.0;  // initial uniform surface density
  std::string side_minus, side_plus;
  std::string constraint = "free";  // free | horizontal | fixed
};

struct SorptionSpec {
  std::string curve;
  std::string side;  // "plus" | "minus"
  SorptionParams params;
};

struct SlipSpec {
  std::string curve;
  SlipParams params;
};

struct JunctionSpec {
  std::string id;
  std::array<std::pair<std::string, std::string>, 3> ends;  // (curve, start|end)
  double line_tension = 0.0;
  double mobility = 0.0;
  std::string transfer = "off";  // off | linear | ideal
  double transfer_coefficient = 0.0;
  bool pinned_horizontal = false;
};

struct RegionSpec {
  std::string phase;
  bool include_box = false;
  std::vector<std::pair<std::string, bool>> items;  // (curve id, reversed)
};

struct ScenarioConfig {
  std::string mode = "planar";
  DomainBox box;
  double t_end = 1.0;
  double dt = 1e-4;
  double cfl_safety = 0.5;
  double m_n = 1.0;
  double m_c = 0.0;  // default junction mobility
  double convergence_vmax = 0.0;
  std::string integrator = "euler";
  int output_every = 1;
  int snapshot_every = 0;
  int remesh_every = 0;
  double remesh_h = 0.0;
  std::vector<PhaseSpec> phases;
  std::vector<CurveSpec> curves;
  std::map<std::string, SurfaceEos> surface_eos;  // by curve id
  std::vector<SorptionSpec> sorption;
  std::vector<SlipSpec> slip;
  std::vector<JunctionSpec> junctions;
  std::vector<RegionSpec> regions;
};

struct Scenario {
  ScenarioConfig config;
  std::string canonical_text;  // serialize_scenario(config)
};

// Malformed syntax throws ParseError with the line number; semantic problems
// are collected and thrown together as one ValidationError.
Scenario load_scenario(const std::string& path);
Scenario load_scenario_text(const std::string& text, const std::string& origin);

// Shipped presets, embedded in the library.
std::vector<std::string> preset_names();
Scenario load_preset(const std::string& name);
// Resolves either a file path or a preset name (file wins).
Scenario load_scenario_or_preset(const std::string& path_or_name);

std::string serialize_scenario(const ScenarioConfig& config);

// Instantiates markers, junctions, reservoirs and topology; snaps junction
// ends exactly and runs the geometry validity checks.
SimState build_state(const ScenarioConfig& config);

// Mobility, closures and driver settings for run(); scenario_text filled in.
RunConfig build_run_config(const ScenarioConfig& config);

}  // namespace triline
