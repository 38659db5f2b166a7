#pragma once

// File outputs: marker-table snapshots, the time-series CSV, bit-exact
// checkpoints (hex floats), and the report renderers (text table, SVG).
// Every file starts with a units header; planar quantities are per unit
// depth.

#include <string>
#include <vector>

#include "dynamics.hpp"
#include "energy.hpp"

namespace triline {

void ensure_directory(const std::string& path);

// Plain-text marker table: curve_id marker_index x y segment_mass side_minus
// side_plus. The last marker row of an open curve carries segment_mass 0.
void write_snapshot(const std::string& path, const SimState& state);

// CSV columns: t, E_total, E_bulk, E_interface, E_line, D_normal, D_slip,
// D_sorption, D_junction, M_total, per-phase M, per-junction angles (deg) and
// Kirchhoff residual norm, max_V_sigma, max_speed.
void write_timeseries(const std::string& path, const std::vector<LedgerRow>& rows,
                      const SimState& state);

// Versioned, bit-exact (hex float) serialization of scenario text + state.
void write_checkpoint(const std::string& path, const std::string& scenario_text,
                      const SimState& state);

struct Checkpoint {
  std::string scenario_text;
  SimState state;
};
Checkpoint read_checkpoint(const std::string& path);

// Renders a time-series CSV as an aligned text table (subsampled for long
// runs) with a closing summary line.
std::string render_report_table(const std::string& csv_path);

// Self-contained SVG with E_total on top and the dissipation channels below.
void render_timeseries_svg(const std::string& csv_path, const std::string& svg_path);

}  // namespace triline
