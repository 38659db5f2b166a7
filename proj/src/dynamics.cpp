#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "energy.hpp"
#include "output.hpp"

namespace triline {

int SimState::phase_index(const std::string& label) const {
  for (int i = 0; i < static_cast<int>(phases.size()); ++i)
    if (phases[i].label == label) return i;
  fail(Err::Invalid, "unknown phase label: " + label);
}

int SimState::curve_index(const std::string& id) const {
  for (int i = 0; i < static_cast<int>(curves.size()); ++i)
    if (curves[i].id == id) return i;
  fail(Err::Invalid, "unknown curve id: " + id);
}

double SimState::total_mass() const {
  double m = 0.0;
  for (const PhaseReservoir& ph : phases) m += ph.mass;
  for (const MarkerCurve& c : curves) m += c.total_mass();
  return m;
}

Derived refresh(const SimState& state, const Closures& closures) {
  if (closures.per_curve.size() != state.curves.size())
    fail(Err::Invalid, "closures not parallel to curves");
  Derived d;
  const int n_regions = static_cast<int>(state.topology.regions.size());
  d.region_polys.resize(n_regions);
  d.region_measure.resize(n_regions);
  double sum = 0.0;
  for (int r = 0; r < n_regions; ++r) {
    d.region_polys[r] = assemble_region(state.topology, state.curves, r);
    double m = 0.0;
    for (const Polygon& p : d.region_polys[r]) m += polygon_measure(p, state.mode);
    if (!(m > 0.0))
      fail(Err::TopologyError,
           "region " + state.topology.regions[r].phase + " has nonpositive measure");
    d.region_measure[r] = m;
    sum += m;
  }
  const double dom = domain_measure(state.topology.box, state.mode);
  if (std::abs(sum - dom) > 1e-10 * dom)
    fail(Err::TopologyError, "region measures do not partition the domain");

  d.phase.resize(state.phases.size());
  for (size_t p = 0; p < state.phases.size(); ++p) {
    const PhaseReservoir& ph = state.phases[p];
    int r = -1;
    for (int i = 0; i < n_regions; ++i)
      if (state.topology.regions[i].phase == ph.label) r = i;
    if (r < 0) fail(Err::TopologyError, "phase " + ph.label + " has no region");
    PhaseThermo& th = d.phase[p];
    th.measure = d.region_measure[r];
    th.rho = ph.mass / th.measure;
    const BulkState bs = bulk_eval(ph.eos, th.rho);
    th.p = bs.p;
    th.mu = bs.mu;
    th.psi = bs.psi;
  }

  const int nc = static_cast<int>(state.curves.size());
  d.seg_measure.resize(nc);
  d.seg_rho.resize(nc);
  d.seg_gamma.resize(nc);
  d.gamma_max = 0.0;
  d.h_min = std::numeric_limits<double>::infinity();
  for (int c = 0; c < nc; ++c) {
    const MarkerCurve& cur = state.curves[c];
    const SurfaceEos& eos = closures.per_curve[c].eos;
    const int ns = cur.n_segments();
    d.seg_measure[c].resize(ns);
    d.seg_rho[c].resize(ns);
    d.seg_gamma[c].resize(ns);
    for (int s = 0; s < ns; ++s) {
      d.h_min = std::min(d.h_min, segment_length(cur, s));
      const double A = segment_measure(cur, s);
      if (!(A > 0.0)) fail(Err::DegenerateGeometry, "zero-measure segment on " + cur.id);
      d.seg_measure[c][s] = A;
      const double rho = cur.segment_mass[s] / A;
      d.seg_rho[c][s] = rho;
      const double g = surface_tension(eos, rho);  // throws TensionDepleted
      d.seg_gamma[c][s] = g;
      d.gamma_max = std::max(d.gamma_max, g);
    }
  }
  return d;
}

Energies assemble_energies(const SimState& state, const Closures& closures, const Derived& d) {
  Energies e;
  for (int c = 0; c < static_cast<int>(state.curves.size()); ++c) {
    const MarkerCurve& cur = state.curves[c];
    const SurfaceEos& eos = closures.per_curve[c].eos;
    for (int s = 0; s < cur.n_segments(); ++s)
      e.E_interface += segment_energy(eos, cur.segment_mass[s], d.seg_measure[c][s]);
  }
  for (int r = 0; r < static_cast<int>(state.topology.regions.size()); ++r) {
    const int p = state.phase_index(state.topology.regions[r].phase);
    e.E_bulk += bulk_phase_energy(state.phases[p].eos, state.phases[p].mass, d.region_measure[r]);
  }
  if (state.mode == GeometryMode::Axisymmetric)
    for (const TripleJunction& jn : state.junctions)
      e.E_line += 2.0 * kPi * jn.line_tension * jn.position.x;
  e.E_total = e.E_bulk + e.E_interface + e.E_line;
  return e;
}

Forces compute_forces(const SimState& state, const Closures& closures, const Derived& d) {
  Forces out;
  out.energy = assemble_energies(state, closures, d);
  const int nc = static_cast<int>(state.curves.size());
  std::vector<std::vector<Vec2>> grad(nc);
  for (int c = 0; c < nc; ++c) grad[c].assign(state.curves[c].n_markers(), Vec2{});

  // interface term: dE/dA_seg = gamma(rho_seg)
  for (int c = 0; c < nc; ++c) {
    const MarkerCurve& cur = state.curves[c];
    for (int s = 0; s < cur.n_segments(); ++s) {
      Vec2 da, db;
      segment_measure_gradient(cur, s, da, db);
      const double g = d.seg_gamma[c][s];
      grad[c][cur.seg_a(s)] += g * da;
      grad[c][cur.seg_b(s)] += g * db;
    }
  }

  // bulk term: dE/dA_region = -p
  for (int r = 0; r < static_cast<int>(state.topology.regions.size()); ++r) {
    const int p = state.phase_index(state.topology.regions[r].phase);
    for (const Polygon& poly : d.region_polys[r])
      accumulate_polygon_measure_gradient(poly, state.mode, -d.phase[p].p, grad);
  }

  out.marker.resize(nc);
  for (int c = 0; c < nc; ++c) {
    out.marker[c].resize(grad[c].size());
    for (size_t i = 0; i < grad[c].size(); ++i) out.marker[c][i] = -grad[c][i];
  }

  // junctions: sum of the attached end-slot forces plus the line-tension term
  out.junction.assign(state.junctions.size(), Vec2{});
  for (size_t j = 0; j < state.junctions.size(); ++j) {
    const TripleJunction& jn = state.junctions[j];
    Vec2 f{};
    for (const CurveEnd& e : jn.incident) {
      const MarkerCurve& cur = state.curves[e.curve];
      f += out.marker[e.curve][e.at_start ? 0 : cur.n_markers() - 1];
    }
    if (state.mode == GeometryMode::Axisymmetric)
      f += Vec2{-2.0 * kPi * jn.line_tension, 0.0};
    out.junction[j] = f;
  }
  return out;
}

// ---- kinematics ---------------------------------------------------------------

namespace {

struct Axes {
  Vec2 tangent;  // along traversal direction
  Vec2 normal;   // left normal (side_minus -> side_plus)
};

Axes marker_axes(const MarkerCurve& c, int i) {
  const int n = c.n_markers();
  Vec2 t;
  if (c.closed) {
    t = c.markers[(i + 1) % n] - c.markers[(i + n - 1) % n];
  } else if (i == 0) {
    t = c.markers[1] - c.markers[0];
  } else if (i == n - 1) {
    t = c.markers[n - 1] - c.markers[n - 2];
  } else {
    t = c.markers[i + 1] - c.markers[i - 1];
  }
  const Vec2 tn = normalized(t);
  return {tn, left_normal(tn)};
}

struct Projection {
  bool zero_x = false, zero_y = false;
  Vec2 apply(const Vec2& v) const { return {zero_x ? 0.0 : v.x, zero_y ? 0.0 : v.y}; }
};

Projection marker_projection(const SimState& state, const MarkerCurve& c, int i, double tol) {
  Projection p;
  if (c.constraint == CurveConstraint::Fixed) {
    p.zero_x = p.zero_y = true;
    return p;
  }
  if (c.constraint == CurveConstraint::Horizontal) p.zero_y = true;
  const bool at_start = !c.closed && i == 0;
  const bool at_end = !c.closed && i == c.n_markers() - 1;
  if ((at_start && c.end_start.kind == EndpointKind::OuterBoundary) ||
      (at_end && c.end_end.kind == EndpointKind::OuterBoundary)) {
    const DomainBox& b = state.topology.box;
    const Vec2 q = c.markers[i];
    if (std::abs(q.x - b.x0) <= tol || std::abs(q.x - b.x1) <= tol) p.zero_x = true;
    if (std::abs(q.y - b.y0) <= tol || std::abs(q.y - b.y1) <= tol) p.zero_y = true;
  }
  if (state.mode == GeometryMode::Axisymmetric && std::abs(c.markers[i].x) <= tol)
    p.zero_x = true;  // markers on the axis stay on it
  return p;
}

bool is_junction_slot(const MarkerCurve& c, int i) { return c.marker_at_junction(i); }

}  // namespace

Rates evaluate_rates(const SimState& state, const MobilityParams& mob,
                     const Closures& closures, const Derived& d) {
  Rates r;
  const int nc = static_cast<int>(state.curves.size());
  r.v.resize(nc);
  r.v_n.resize(nc);
  r.v_par.resize(nc);
  r.lumped.resize(nc);
  r.seg_measure = d.seg_measure;
  r.flux_plus.resize(nc);
  r.flux_minus.resize(nc);
  r.diss_plus.resize(nc);
  r.diss_minus.resize(nc);
  r.forces = compute_forces(state, closures, d);
  const double tol = 1e-9 * state.topology.box.scale();

  // junction kinematics first (end markers follow the junction)
  const size_t nj = state.junctions.size();
  r.v_junction.assign(nj, Vec2{});
  r.f_junction.assign(nj, Vec2{});
  r.junction_line_measure.assign(nj, 1.0);
  r.junction_transfer.assign(nj, JunctionSolveResult{});
  for (size_t j = 0; j < nj; ++j) {
    const TripleJunction& jn = state.junctions[j];
    double lm = 1.0;
    if (state.mode == GeometryMode::Axisymmetric) {
      if (!(jn.position.x > 0.0))
        fail(Err::DegenerateJunction, "axisymmetric junction " + jn.id + " on the axis");
      lm = 2.0 * kPi * jn.position.x;
    }
    r.junction_line_measure[j] = lm;
    Projection pj;
    pj.zero_y = jn.pinned_horizontal;
    for (const CurveEnd& e : jn.incident)
      if (state.curves[e.curve].constraint == CurveConstraint::Horizontal) pj.zero_y = true;
    const Vec2 f = pj.apply((1.0 / lm) * r.forces.junction[j]);
    r.f_junction[j] = f;
    r.v_junction[j] = pj.apply(jn.mobility * f);
    r.max_speed = std::max(r.max_speed, norm(r.v_junction[j]));
  }

  for (int c = 0; c < nc; ++c) {
    const MarkerCurve& cur = state.curves[c];
    const CurvePhysics& phys = closures.per_curve[c];
    const int n = cur.n_markers();
    r.v[c].assign(n, Vec2{});
    r.v_n[c].assign(n, 0.0);
    r.v_par[c].assign(n, 0.0);
    r.lumped[c].assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      r.lumped[c][i] = lumped_measure(cur, i);
      const Axes ax = marker_axes(cur, i);
      if (is_junction_slot(cur, i)) {
        const int j = (i == 0) ? cur.end_start.junction : cur.end_end.junction;
        r.v[c][i] = r.v_junction[j];
        r.v_n[c][i] = dot(r.v[c][i], ax.normal);
        r.v_par[c][i] = dot(r.v[c][i], ax.tangent);
        continue;
      }
      const Projection proj = marker_projection(state, cur, i, tol);
      const Vec2 fp = proj.apply((1.0 / r.lumped[c][i]) * r.forces.marker[c][i]);
      Vec2 v = mob.m_n * dot(fp, ax.normal) * ax.normal;
      if (phys.slip_on) {
        if (!(phys.slip.beta_sum() > 0.0))
          fail(Err::SlipDegenerate, "curve " + cur.id + ": slip enabled with zero betas");
        v += (dot(fp, ax.tangent) / phys.slip.beta_sum()) * ax.tangent;
      }
      v = proj.apply(v);
      r.v[c][i] = v;
      r.v_n[c][i] = dot(v, ax.normal);
      r.v_par[c][i] = dot(v, ax.tangent);
      r.max_speed = std::max(r.max_speed, norm(v));
      r.max_v_sigma = std::max(r.max_v_sigma, std::abs(r.v_n[c][i]));
    }

    // sorption fluxes per segment and side
    const int ns = cur.n_segments();
    r.flux_plus[c].assign(ns, 0.0);
    r.flux_minus[c].assign(ns, 0.0);
    r.diss_plus[c].assign(ns, 0.0);
    r.diss_minus[c].assign(ns, 0.0);
    if (phys.sorption_plus_on || phys.sorption_minus_on) {
      const PhaseThermo* plus =
          phys.sorption_plus_on ? &d.phase[state.phase_index(cur.side_plus)] : nullptr;
      const PhaseThermo* minus =
          phys.sorption_minus_on ? &d.phase[state.phase_index(cur.side_minus)] : nullptr;
      for (int s = 0; s < ns; ++s) {
        const double rho_s = d.seg_rho[c][s];
        const double mu_s = rho_s > 0.0 ? surface_mu(phys.eos, rho_s)
                                        : -std::numeric_limits<double>::infinity();
        if (plus) {
          const SorptionResult sr =
              sorption_flux(phys.sorption_plus, plus->mu, mu_s, rho_s, plus->rho);
          r.flux_plus[c][s] = sr.flux;
          r.diss_plus[c][s] = sr.dissipation_rate;
        }
        if (minus) {
          const SorptionResult sr =
              sorption_flux(phys.sorption_minus, minus->mu, mu_s, rho_s, minus->rho);
          r.flux_minus[c][s] = sr.flux;
          r.diss_minus[c][s] = sr.dissipation_rate;
        }
      }
    }
  }

  // junction mass transfer
  for (size_t j = 0; j < nj; ++j) {
    const TripleJunction& jn = state.junctions[j];
    if (jn.closure.mode == JunctionClosure::Mode::Off) continue;
    std::array<double, 3> mu{}, rho{};
    for (int k = 0; k < 3; ++k) {
      const CurveEnd& e = jn.incident[k];
      const MarkerCurve& cur = state.curves[e.curve];
      const int s = e.at_start ? 0 : cur.n_segments() - 1;
      rho[k] = d.seg_rho[e.curve][s];
      const SurfaceEos& eos = closures.per_curve[e.curve].eos;
      if (rho[k] <= 1e-12 * eos.rho_star)
        fail(Err::ClosureSolveFailed,
             "junction " + jn.id + ": transfer closure needs surface mass on curve " + cur.id);
      mu[k] = surface_mu(eos, rho[k]);
    }
    r.junction_transfer[j] = junction_solve(jn.closure, mu, rho);
  }
  return r;
}

void advance_surface_density(MarkerCurve& curve, const std::vector<Vec2>& velocities,
                             const std::vector<double>& source_per_area,
                             double inflow_start, double inflow_end, double dt) {
  if (dt < 0.0) fail(Err::Invalid, "advance_surface_density: negative dt");
  const int n = curve.n_markers();
  const int ns = curve.n_segments();
  if (static_cast<int>(velocities.size()) != n)
    fail(Err::Invalid, "advance_surface_density: velocity array size mismatch");
  if (static_cast<int>(source_per_area.size()) != ns)
    fail(Err::Invalid, "advance_surface_density: source array size mismatch");
  // sources integrate against the pre-move measures
  std::vector<double> dm(ns, 0.0);
  for (int s = 0; s < ns; ++s) dm[s] = source_per_area[s] * segment_measure(curve, s) * dt;
  dm[0] += inflow_start * dt;
  dm[ns - 1] += inflow_end * dt;
  for (int i = 0; i < n; ++i) curve.markers[i] += dt * velocities[i];
  for (int s = 0; s < ns; ++s) {
    curve.segment_mass[s] += dm[s];
    if (curve.segment_mass[s] < 0.0) {
      if (curve.segment_mass[s] > -1e-12 * (std::abs(dm[s]) + 1e-300))
        curve.segment_mass[s] = 0.0;
      else
        fail(Err::Internal, "advance_surface_density: negative mass after capping on curve " +
                                curve.id + " segment " + std::to_string(s));
    }
  }
}

namespace {

// Donor-limited capping and conservative application of one set of rates.
// All mass transfers integrate against the current state's pre-move measures
// (the rates themselves may come from a midpoint evaluation).
void apply_rates(SimState& state, const Closures& closures, Rates& r, double dt) {
  const int nc = static_cast<int>(state.curves.size());
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < state.curves[c].n_segments(); ++s)
      r.seg_measure[c][s] = segment_measure(state.curves[c], s);

  // junction transfer caps: all fluxes of a junction share one factor so the
  // exact balance sum mdot = 0 survives
  const size_t nj = state.junctions.size();
  std::vector<double> jfac(nj, 1.0);
  for (size_t j = 0; j < nj; ++j) {
    const TripleJunction& jn = state.junctions[j];
    if (jn.closure.mode == JunctionClosure::Mode::Off) continue;
    const double lm = r.junction_line_measure[j];
    for (int k = 0; k < 3; ++k) {
      const double dmk = r.junction_transfer[j].mdot[k] * lm * dt;
      if (dmk >= 0.0) continue;
      const CurveEnd& e = jn.incident[k];
      const MarkerCurve& cur = state.curves[e.curve];
      const double avail = cur.segment_mass[e.at_start ? 0 : cur.n_segments() - 1];
      if (-dmk > avail) jfac[j] = std::min(jfac[j], avail / -dmk);
    }
  }

  // sorption caps: donor reservoirs first, then donor segments
  std::vector<double> outflow(state.phases.size(), 0.0);
  for (int c = 0; c < nc; ++c) {
    const MarkerCurve& cur = state.curves[c];
    const int ip = closures.per_curve[c].sorption_plus_on ? state.phase_index(cur.side_plus) : -1;
    const int im = closures.per_curve[c].sorption_minus_on ? state.phase_index(cur.side_minus) : -1;
    for (int s = 0; s < cur.n_segments(); ++s) {
      const double A = r.seg_measure[c][s];
      if (ip >= 0 && r.flux_plus[c][s] > 0.0) outflow[ip] += r.flux_plus[c][s] * A * dt;
      if (im >= 0 && r.flux_minus[c][s] > 0.0) outflow[im] += r.flux_minus[c][s] * A * dt;
    }
  }
  std::vector<double> pfac(state.phases.size(), 1.0);
  for (size_t p = 0; p < state.phases.size(); ++p)
    if (outflow[p] > state.phases[p].mass) pfac[p] = state.phases[p].mass / outflow[p];
  for (int c = 0; c < nc; ++c) {
    const MarkerCurve& cur = state.curves[c];
    const int ip = closures.per_curve[c].sorption_plus_on ? state.phase_index(cur.side_plus) : -1;
    const int im = closures.per_curve[c].sorption_minus_on ? state.phase_index(cur.side_minus) : -1;
    for (int s = 0; s < cur.n_segments(); ++s) {
      if (ip >= 0 && r.flux_plus[c][s] > 0.0 && pfac[ip] < 1.0) {
        r.flux_plus[c][s] *= pfac[ip];
        r.diss_plus[c][s] *= pfac[ip];
      }
      if (im >= 0 && r.flux_minus[c][s] > 0.0 && pfac[im] < 1.0) {
        r.flux_minus[c][s] *= pfac[im];
        r.diss_minus[c][s] *= pfac[im];
      }
      const double A = r.seg_measure[c][s];
      const double dm = (r.flux_plus[c][s] + r.flux_minus[c][s]) * A * dt;
      if (dm < 0.0 && -dm > cur.segment_mass[s]) {
        const double f = cur.segment_mass[s] / -dm;
        r.flux_plus[c][s] *= f;
        r.flux_minus[c][s] *= f;
        r.diss_plus[c][s] *= f;
        r.diss_minus[c][s] *= f;
      }
    }
  }

  // reservoir updates from (capped) sorption
  for (int c = 0; c < nc; ++c) {
    const MarkerCurve& cur = state.curves[c];
    const CurvePhysics& phys = closures.per_curve[c];
    for (int s = 0; s < cur.n_segments(); ++s) {
      const double A = r.seg_measure[c][s];
      if (phys.sorption_plus_on)
        state.phases[state.phase_index(cur.side_plus)].mass -= r.flux_plus[c][s] * A * dt;
      if (phys.sorption_minus_on)
        state.phases[state.phase_index(cur.side_minus)].mass -= r.flux_minus[c][s] * A * dt;
    }
  }
  for (PhaseReservoir& ph : state.phases) {
    if (ph.mass <= 0.0) {
      if (ph.mass > -1e-12) ph.mass = 0.0;
      else fail(Err::Internal, "reservoir " + ph.label + " went negative");
    }
  }

  // move junctions
  for (size_t j = 0; j < nj; ++j) state.junctions[j].position += dt * r.v_junction[j];

  // move markers and apply the (capped) surface-mass sources
  for (int c = 0; c < nc; ++c) {
    MarkerCurve& cur = state.curves[c];
    const int ns = cur.n_segments();
    std::vector<double> source(ns, 0.0);
    for (int s = 0; s < ns; ++s) source[s] = r.flux_plus[c][s] + r.flux_minus[c][s];
    double inflow_start = 0.0, inflow_end = 0.0;
    if (!cur.closed && cur.end_start.kind == EndpointKind::Junction) {
      const int j = cur.end_start.junction;
      for (int q = 0; q < 3; ++q)
        if (state.junctions[j].incident[q].curve == c && state.junctions[j].incident[q].at_start)
          inflow_start = jfac[j] * r.junction_transfer[j].mdot[q] * r.junction_line_measure[j];
    }
    if (!cur.closed && cur.end_end.kind == EndpointKind::Junction) {
      const int j = cur.end_end.junction;
      for (int q = 0; q < 3; ++q)
        if (state.junctions[j].incident[q].curve == c && !state.junctions[j].incident[q].at_start)
          inflow_end = jfac[j] * r.junction_transfer[j].mdot[q] * r.junction_line_measure[j];
    }
    advance_surface_density(cur, r.v[c], source, inflow_start, inflow_end, dt);
  }

  // exact re-attachment and wall snapping
  for (const TripleJunction& jn : state.junctions)
    for (const CurveEnd& e : jn.incident) {
      MarkerCurve& cur = state.curves[e.curve];
      (e.at_start ? cur.markers.front() : cur.markers.back()) = jn.position;
    }
  const DomainBox& box = state.topology.box;
  const double tol = 1e-9 * box.scale();
  for (MarkerCurve& cur : state.curves) {
    if (cur.closed) continue;
    for (int end = 0; end < 2; ++end) {
      const Endpoint& ep = end == 0 ? cur.end_start : cur.end_end;
      if (ep.kind != EndpointKind::OuterBoundary) continue;
      Vec2& p = end == 0 ? cur.markers.front() : cur.markers.back();
      if (std::abs(p.x - box.x0) <= tol) p.x = box.x0;
      if (std::abs(p.x - box.x1) <= tol) p.x = box.x1;
      if (std::abs(p.y - box.y0) <= tol) p.y = box.y0;
      if (std::abs(p.y - box.y1) <= tol) p.y = box.y1;
    }
  }
  if (state.mode == GeometryMode::Axisymmetric)
    for (MarkerCurve& cur : state.curves)
      for (Vec2& p : cur.markers) {
        if (p.x < 0.0) {
          if (p.x > -1e-12 * box.scale()) p.x = 0.0;
          else fail(Err::Internal, "marker crossed the axis on curve " + cur.id);
        }
      }
}

double cfl_dt_max(const MobilityParams& mob, const Derived& d) {
  if (!(mob.m_n > 0.0)) fail(Err::Invalid, "m_n must be positive");
  if (!(mob.cfl_safety > 0.0) || mob.cfl_safety > 1.0)
    fail(Err::Invalid, "cfl_safety must lie in (0, 1]");
  if (d.gamma_max <= 0.0) return std::numeric_limits<double>::infinity();
  return mob.cfl_safety * d.h_min * d.h_min / (mob.m_n * d.gamma_max);
}

void check_junction_angles(const SimState& state) {
  const double lim = 5.0 * kPi / 180.0;
  for (const TripleJunction& jn : state.junctions) {
    const auto N = junction_conormals(jn, state.curves);
    double max_cross = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double ang = std::acos(std::clamp(dot(N[a], N[b]), -1.0, 1.0));
        max_cross = std::max(max_cross, std::abs(cross(N[a], N[b])));
        if (ang < lim)
          fail(Err::DegenerateJunction,
               "junction " + jn.id + ": interface angle collapsed below 5 degrees");
      }
    if (max_cross < std::sin(lim))
      fail(Err::DegenerateJunction, "junction " + jn.id + ": conormals collapsed to a line");
  }
}

}  // namespace

StepReport step(SimState& state, const MobilityParams& mob, const Closures& closures,
                Integrator integrator) {
  Derived d = refresh(state, closures);
  const double dt_max = cfl_dt_max(mob, d);
  if (mob.dt > dt_max)
    fail(Err::StepRejected, "step rejected: dt " + std::to_string(mob.dt) +
                                " exceeds stability bound dt_max " + std::to_string(dt_max));

  Rates r1 = evaluate_rates(state, mob, closures, d);
  StepReport rep;
  rep.E_bulk = r1.forces.energy.E_bulk;
  rep.E_interface = r1.forces.energy.E_interface;
  rep.E_line = r1.forces.energy.E_line;
  rep.E_total = r1.forces.energy.E_total;

  const auto fill_channels = [&](const Rates& rr) {
    const EnergyLedger ch = dissipation_budget(state, mob, closures, rr);
    rep.D_normal = ch.D_normal;
    rep.D_slip = ch.D_slip;
    rep.D_sorption = ch.D_sorption;
    rep.D_junction = ch.D_junction;
    rep.max_speed = rr.max_speed;
    rep.max_v_sigma = rr.max_v_sigma;
  };

  if (integrator == Integrator::Euler) {
    fill_channels(r1);
    apply_rates(state, closures, r1, mob.dt);
  } else {
    // midpoint rule: advance half a step, evaluate there, apply from the start
    SimState saved = state;
    apply_rates(state, closures, r1, 0.5 * mob.dt);
    Derived dmid = refresh(state, closures);
    Rates r2 = evaluate_rates(state, mob, closures, dmid);
    state = std::move(saved);
    fill_channels(r2);
    apply_rates(state, closures, r2, mob.dt);
  }

  check_junction_angles(state);
  state.time += mob.dt;
  state.step_count += 1;
  return rep;
}

// ---- diagnostics -------------------------------------------------------------

namespace {

// Richardson-extrapolated tangent angle into a curve from its junction end.
double tangent_angle_into(const MarkerCurve& c, bool at_start) {
  const int n = c.n_markers();
  if (n < 3) fail(Err::DegenerateGeometry, "curve too short for tangent estimate");
  const Vec2 m0 = at_start ? c.markers[0] : c.markers[n - 1];
  const Vec2 m1 = at_start ? c.markers[1] : c.markers[n - 2];
  const Vec2 m2 = at_start ? c.markers[2] : c.markers[n - 3];
  const double t1 = std::atan2(m1.y - m0.y, m1.x - m0.x);
  const double t2 = std::atan2(m2.y - m0.y, m2.x - m0.x);
  double dlt = t2 - t1;
  while (dlt > kPi) dlt -= 2.0 * kPi;
  while (dlt < -kPi) dlt += 2.0 * kPi;
  return t1 - dlt;  // 2*t1 - t2, wrap-safe
}

}  // namespace

std::array<double, 3> junction_angles_deg(const SimState& state, int junction) {
  const TripleJunction& jn = state.junctions.at(junction);
  std::array<double, 3> theta{};
  for (int k = 0; k < 3; ++k) {
    const CurveEnd& e = jn.incident[k];
    theta[k] = tangent_angle_into(state.curves[e.curve], e.at_start);
  }
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) {
    double a = theta[(k + 1) % 3] - theta[k];
    while (a > kPi) a -= 2.0 * kPi;
    while (a < -kPi) a += 2.0 * kPi;
    out[k] = std::abs(a) * 180.0 / kPi;
  }
  return out;
}

double junction_kirchhoff_norm(const SimState& state, const Derived& d, int junction) {
  const TripleJunction& jn = state.junctions.at(junction);
  const auto N = junction_conormals(jn, state.curves);
  std::array<double, 3> g{};
  for (int k = 0; k < 3; ++k) {
    const CurveEnd& e = jn.incident[k];
    const MarkerCurve& cur = state.curves[e.curve];
    g[k] = d.seg_gamma[e.curve][e.at_start ? 0 : cur.n_segments() - 1];
  }
  Vec2 kap{};
  if (state.mode == GeometryMode::Axisymmetric) kap = Vec2{-1.0 / jn.position.x, 0.0};
  return norm(kirchhoff_residual(g, N, jn.line_tension, kap));
}

double young_laplace_worst_rel(const SimState& state, const Derived& d, int curve,
                               double min_scale) {
  const MarkerCurve& c = state.curves.at(curve);
  const double p_plus = d.phase[state.phase_index(c.side_plus)].p;
  const double p_minus = d.phase[state.phase_index(c.side_minus)].p;
  const double jump = p_plus - p_minus;
  double worst = std::numeric_limits<double>::quiet_NaN();
  const int lo = c.closed ? 0 : 1;
  const int hi = c.closed ? c.n_markers() : c.n_markers() - 1;
  for (int i = lo; i < hi; ++i) {
    const Axes ax = marker_axes(c, i);
    const double kappa = dot(curvature_normal(c, i), ax.normal);
    const int ns = c.n_segments();
    const int sprev = c.closed ? (i + ns - 1) % ns : i - 1;
    const int snext = c.closed ? i % ns : i;
    const double gamma = 0.5 * (d.seg_gamma[curve][sprev] + d.seg_gamma[curve][snext]);
    const double scale = std::abs(gamma * kappa);
    if (scale < min_scale) continue;
    const double rel = std::abs(jump - gamma * kappa) / scale;
    if (std::isnan(worst) || rel > worst) worst = rel;
  }
  return worst;
}

AffinityReport chemical_affinities(const SimState& state, const Closures& closures,
                                   const Derived& d) {
  AffinityReport rep;
  for (int c = 0; c < static_cast<int>(state.curves.size()); ++c) {
    const MarkerCurve& cur = state.curves[c];
    const CurvePhysics& phys = closures.per_curve[c];
    if (!phys.sorption_plus_on && !phys.sorption_minus_on) continue;
    for (int s = 0; s < cur.n_segments(); ++s) {
      if (!(d.seg_rho[c][s] > 0.0)) continue;
      const double mu_s = surface_mu(phys.eos, d.seg_rho[c][s]);
      if (phys.sorption_plus_on)
        rep.max_sorption = std::max(rep.max_sorption,
                                    std::abs(d.phase[state.phase_index(cur.side_plus)].mu - mu_s));
      if (phys.sorption_minus_on)
        rep.max_sorption = std::max(rep.max_sorption,
                                    std::abs(d.phase[state.phase_index(cur.side_minus)].mu - mu_s));
    }
  }
  for (const TripleJunction& jn : state.junctions) {
    if (jn.closure.mode == JunctionClosure::Mode::Off) continue;
    std::array<double, 3> mu{};
    double mu_c = 0.0;
    for (int k = 0; k < 3; ++k) {
      const CurveEnd& e = jn.incident[k];
      const MarkerCurve& cur = state.curves[e.curve];
      const int s = e.at_start ? 0 : cur.n_segments() - 1;
      mu[k] = surface_mu(closures.per_curve[e.curve].eos, d.seg_rho[e.curve][s]);
      mu_c += mu[k] / 3.0;
    }
    for (int k = 0; k < 3; ++k)
      rep.max_junction = std::max(rep.max_junction, std::abs(mu[k] - mu_c));
  }
  return rep;
}

// ---- trajectory driver ---------------------------------------------------------

namespace {

LedgerRow make_row(double t, const StepReport& rep, const SimState& state, const Derived& d) {
  LedgerRow row;
  row.t = t;
  row.E_total = rep.E_total;
  row.E_bulk = rep.E_bulk;
  row.E_interface = rep.E_interface;
  row.E_line = rep.E_line;
  row.D_normal = rep.D_normal;
  row.D_slip = rep.D_slip;
  row.D_sorption = rep.D_sorption;
  row.D_junction = rep.D_junction;
  row.M_total = state.total_mass();
  for (const PhaseReservoir& ph : state.phases) row.M_phase.push_back(ph.mass);
  for (int j = 0; j < static_cast<int>(state.junctions.size()); ++j) {
    row.junction_angles_deg.push_back(junction_angles_deg(state, j));
    row.junction_kirchhoff.push_back(junction_kirchhoff_norm(state, d, j));
  }
  row.max_v_sigma = rep.max_v_sigma;
  row.max_speed = rep.max_speed;
  return row;
}

}  // namespace

RunSummary run(SimState& state, const RunConfig& config) {
  RunSummary sum;
  const bool to_files = !config.out_dir.empty();
  if (to_files) ensure_directory(config.out_dir);

  long max_steps = config.max_steps;
  if (max_steps < 0)
    max_steps =
        static_cast<long>(std::ceil((config.t_end - state.time) / config.mobility.dt - 1e-9));
  sum.mass_initial = state.total_mass();

  double prev_E = std::numeric_limits<double>::quiet_NaN();
  bool first = true;
  try {
    for (long n = 0; n < max_steps; ++n) {
      const double t_pre = state.time;
      StepReport rep = step(state, config.mobility, config.closures, config.integrator);
      if (first) {
        sum.E_initial = rep.E_total;
        first = false;
        if (to_files) write_snapshot(config.out_dir + "/snapshot_initial.txt", state);
      }
      if (!std::isnan(prev_E))
        sum.worst_energy_increase = std::max(sum.worst_energy_increase, rep.E_total - prev_E);
      prev_E = rep.E_total;

      if (config.output_every > 0 && n % config.output_every == 0) {
        Derived d = refresh(state, config.closures);
        sum.rows.push_back(make_row(t_pre, rep, state, d));
      }
      if (to_files && config.snapshot_every > 0 && n > 0 && n % config.snapshot_every == 0)
        write_snapshot(config.out_dir + "/snapshot_" + std::to_string(n) + ".txt", state);
      if (to_files && config.checkpoint_every > 0 && n > 0 && n % config.checkpoint_every == 0)
        write_checkpoint(config.out_dir + "/checkpoint_" + std::to_string(n) + ".tlck",
                         config.scenario_text, state);

      sum.steps = n + 1;
      sum.max_speed_final = rep.max_speed;
      if (config.convergence_vmax > 0.0 && rep.max_speed < config.convergence_vmax) {
        sum.converged = true;
        break;
      }

      if (config.remesh_every > 0 && config.remesh_h > 0.0 && (n + 1) % config.remesh_every == 0) {
        // Remesh is deferred when it would raise the discrete energy (the
        // resampled polyline shifts region measures by O(h^2)), unless marker
        // spacing has compressed far enough to threaten the stability bound.
        for (int c = 0; c < static_cast<int>(state.curves.size()); ++c) {
          MarkerCurve candidate;
          try {
            candidate = remesh(state.curves[c], config.remesh_h);
          } catch (const TrilineError&) {
            continue;  // curve too short for this spacing
          }
          double h_min = std::numeric_limits<double>::infinity();
          for (int seg = 0; seg < state.curves[c].n_segments(); ++seg)
            h_min = std::min(h_min, segment_length(state.curves[c], seg));
          const bool forced = h_min < 0.8 * config.remesh_h;
          SimState trial = state;
          trial.curves[c] = std::move(candidate);
          Derived dtr = refresh(trial, config.closures);
          const Energies e = assemble_energies(trial, config.closures, dtr);
          if (forced || e.E_total <= prev_E + 1e-13 * std::abs(prev_E)) {
            state = std::move(trial);
            prev_E = e.E_total;
          }
        }
      }
    }
  } catch (const TrilineError&) {
    if (to_files) {
      try {
        write_checkpoint(config.out_dir + "/diagnostic_checkpoint.tlck", config.scenario_text,
                         state);
        if (!sum.rows.empty()) write_timeseries(config.out_dir + "/timeseries.csv", sum.rows, state);
      } catch (...) {
      }
    }
    throw;
  }

  // closing row: energies of the final state, no step taken from it
  Derived d = refresh(state, config.closures);
  const Energies e = assemble_energies(state, config.closures, d);
  StepReport last;
  last.E_bulk = e.E_bulk;
  last.E_interface = e.E_interface;
  last.E_line = e.E_line;
  last.E_total = e.E_total;
  if (!std::isnan(prev_E))
    sum.worst_energy_increase = std::max(sum.worst_energy_increase, e.E_total - prev_E);
  sum.rows.push_back(make_row(state.time, last, state, d));
  sum.E_final = e.E_total;
  if (first) sum.E_initial = e.E_total;
  sum.t_final = state.time;
  sum.mass_final = state.total_mass();
  sum.worst_energy_increase = std::max(0.0, sum.worst_energy_increase);

  if (to_files) {
    sum.timeseries_path = config.out_dir + "/timeseries.csv";
    write_timeseries(sum.timeseries_path, sum.rows, state);
    write_snapshot(config.out_dir + "/snapshot_final.txt", state);
    write_checkpoint(config.out_dir + "/final.tlck", config.scenario_text, state);
  }
  return sum;
}

}  // namespace triline
