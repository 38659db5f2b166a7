#pragma once

// Coupled time evolution. Interface kinematics is an exact gradient flow of
// the discrete available energy: marker and junction forces are the analytic
// gradient of E_a(positions; masses), velocities are mobility times force,
// and mass exchange (sorption, junction transfer) moves mass down chemical
// potential differences. Every dissipation channel is a nonnegative product
// of a flux with its driving force, which is what makes E_a a discrete
// Lyapunov function up to the explicit-step O(dt) defect.

#include <array>
#include <string>
#include <vector>

#include "exchange.hpp"
#include "geometry.hpp"
#include "thermo.hpp"

namespace triline {

struct PhaseReservoir {
  std::string label;
  double mass = 0.0;  // kg (per unit depth in planar mode)
  BulkEos eos;
};

struct MobilityParams {
  double m_n = 1.0;         // interface normal mobility
  double m_c = 0.0;         // default junction mobility (junctions may override)
  double dt = 1e-4;
  double cfl_safety = 0.5;  // in (0, 1]
};

// Per-curve constitutive setup (surface EOS plus transmission conditions).
struct CurvePhysics {
  SurfaceEos eos;
  bool slip_on = false;  // tangential (Marangoni/slip) motion enabled
  SlipParams slip;
  bool sorption_plus_on = false;
  bool sorption_minus_on = false;
  SorptionParams sorption_plus, sorption_minus;
};

struct Closures {
  std::vector<CurvePhysics> per_curve;  // parallel to SimState::curves
};

struct SimState {
  GeometryMode mode = GeometryMode::Planar;
  std::vector<MarkerCurve> curves;
  std::vector<TripleJunction> junctions;
  std::vector<PhaseReservoir> phases;
  PhaseTopology topology;
  double time = 0.0;
  long step_count = 0;

  int phase_index(const std::string& label) const;
  int curve_index(const std::string& id) const;
  double total_mass() const;  // reservoirs + all segment masses
};

// Well-mixed reservoir state at the current geometry.
struct PhaseThermo {
  double measure = 0.0, rho = 0.0, p = 0.0, mu = 0.0, psi = 0.0;
};

// Geometry- and EOS-derived per-step quantities (pure function of the state).
struct Derived {
  std::vector<double> region_measure;  // per topology region
  std::vector<std::vector<Polygon>> region_polys;
  std::vector<PhaseThermo> phase;                // parallel to SimState::phases
  std::vector<std::vector<double>> seg_measure;  // [curve][segment]
  std::vector<std::vector<double>> seg_rho;
  std::vector<std::vector<double>> seg_gamma;
  double gamma_max = 0.0;
  double h_min = 0.0;  // smallest segment length
};

// Throws TensionDepleted/NonPositiveDensity/TopologyError on range errors.
Derived refresh(const SimState& state, const Closures& closures);

struct Energies {
  double E_bulk = 0.0, E_interface = 0.0, E_line = 0.0, E_total = 0.0;
};

Energies assemble_energies(const SimState& state, const Closures& closures, const Derived& d);

struct Forces {
  std::vector<std::vector<Vec2>> marker;  // -dE/dx; junction-attached end slots
                                          // hold that curve's own contribution
  std::vector<Vec2> junction;             // full -dE/dx at the junction position
  Energies energy;
};

// Exact analytic gradient of the discrete available energy with respect to
// every marker and junction position (masses held fixed).
Forces compute_forces(const SimState& state, const Closures& closures, const Derived& d);

// One evaluated set of velocities and exchange fluxes (explicit rates).
struct Rates {
  std::vector<std::vector<Vec2>> v;  // marker velocities
  std::vector<std::vector<double>> v_n, v_par;
  std::vector<std::vector<double>> lumped;        // lumped marker measures
  std::vector<std::vector<double>> seg_measure;   // copy of Derived::seg_measure
  std::vector<Vec2> v_junction;
  std::vector<Vec2> f_junction;                   // force per unit line length
  std::vector<double> junction_line_measure;      // 1 (planar) or 2*pi*r (axisym)
  std::vector<std::vector<double>> flux_plus, flux_minus;  // J per segment side
  std::vector<std::vector<double>> diss_plus, diss_minus;  // sorption dissipation rates
  std::vector<JunctionSolveResult> junction_transfer;
  Forces forces;
  double max_speed = 0.0;
  double max_v_sigma = 0.0;
};

Rates evaluate_rates(const SimState& state, const MobilityParams& mob,
                     const Closures& closures, const Derived& d);

// Lagrangian surface-mass update for a single curve: markers move with the
// given velocities (masses ride along), sorption sources add
// source_per_area * measure * dt per segment, and the junction-end segments
// gain the given inflows (mass per time). Measures are taken before the move.
void advance_surface_density(MarkerCurve& curve, const std::vector<Vec2>& velocities,
                             const std::vector<double>& source_per_area,
                             double inflow_start, double inflow_end, double dt);

enum class Integrator { Euler, Rk2 };

struct StepReport {
  // energies of the state the step departed from
  double E_bulk = 0.0, E_interface = 0.0, E_line = 0.0, E_total = 0.0;
  double D_normal = 0.0, D_slip = 0.0, D_sorption = 0.0, D_junction = 0.0;
  double max_speed = 0.0;
  double max_v_sigma = 0.0;
};

// One explicit step. Enforces the stability bound
// dt <= cfl_safety * h_min^2 / (m_n * gamma_max) (StepRejected otherwise),
// keeps every mass nonnegative by donor-limited capping, preserves junction
// attachment exactly, and conserves total mass to round-off.
StepReport step(SimState& state, const MobilityParams& mob, const Closures& closures,
                Integrator integrator = Integrator::Euler);

// ---- diagnostics -------------------------------------------------------------

// Junction angles between the tangents into the three incident curves,
// measured with a Richardson-extrapolated end tangent (O(h^2)).
std::array<double, 3> junction_angles_deg(const SimState& state, int junction);

// |gamma_c kappa_c - sum gamma_k N^k| with current segment tensions.
double junction_kirchhoff_norm(const SimState& state, const Derived& d, int junction);

// Worst relative Young-Laplace defect |[[p]] - gamma kappa| / |gamma kappa|
// over interior markers of one curve (markers with |gamma kappa| below
// min_scale are skipped; returns nan if none qualify).
double young_laplace_worst_rel(const SimState& state, const Derived& d, int curve,
                               double min_scale);

struct AffinityReport {
  double max_sorption = 0.0;  // max |mu_bulk - mu_surf| over enabled sides
  double max_junction = 0.0;  // max |mu_surf_k - mu_c| over active junctions
};
AffinityReport chemical_affinities(const SimState& state, const Closures& closures,
                                   const Derived& d);

// ---- trajectory driver ---------------------------------------------------------

struct LedgerRow;  // energy.hpp

struct RunConfig {
  MobilityParams mobility;
  Closures closures;
  Integrator integrator = Integrator::Euler;
  double t_end = 1.0;
  long max_steps = -1;            // cap on steps (-1: derive from t_end/dt)
  double convergence_vmax = 0.0;  // stop early when max speed drops below
  int output_every = 1;           // ledger row cadence
  int snapshot_every = 0;         // 0: only first/last
  int remesh_every = 0;           // 0: off
  double remesh_h = 0.0;
  int checkpoint_every = 0;       // 0: off
  std::string out_dir;            // empty: no file output
  std::string scenario_text;      // canonical scenario, embedded in checkpoints
};

struct RunSummary {
  long steps = 0;
  double t_final = 0.0;
  bool converged = false;
  double E_initial = 0.0, E_final = 0.0;
  double mass_initial = 0.0, mass_final = 0.0;
  double worst_energy_increase = 0.0;  // max over steps of max(0, dE)
  double max_speed_final = 0.0;
  std::vector<LedgerRow> rows;
  std::string timeseries_path;  // empty if no file output
};

RunSummary run(SimState& state, const RunConfig& config);

}  // namespace triline
