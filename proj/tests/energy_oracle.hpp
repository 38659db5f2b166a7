#pragma once

// Test-only long-double evaluation of the discrete available energy,
// independent of the double-precision production path. Central differences
// of this functional resolve the 1e-8-relative force checks that plain
// double arithmetic cannot.

#include <cmath>

#include "dynamics.hpp"

namespace triline::testing {

inline long double polygon_measure_ld(const Polygon& poly, GeometryMode mode) {
  const int n = static_cast<int>(poly.size());
  long double acc = 0.0L;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i].p;
    const Vec2& b = poly[(i + 1) % n].p;
    if (mode == GeometryMode::Planar) {
      acc += 0.5L * (static_cast<long double>(a.x) * b.y - static_cast<long double>(b.x) * a.y);
    } else {
      acc += static_cast<long double>(kPi) * (static_cast<long double>(b.y) - a.y) *
             (static_cast<long double>(a.x) * a.x + static_cast<long double>(a.x) * b.x +
              static_cast<long double>(b.x) * b.x) / 3.0L;
    }
  }
  return acc;
}

inline long double segment_measure_ld(const MarkerCurve& c, int seg) {
  const Vec2 a = c.markers[c.seg_a(seg)], b = c.markers[c.seg_b(seg)];
  const long double dx = static_cast<long double>(b.x) - a.x;
  const long double dy = static_cast<long double>(b.y) - a.y;
  long double len = sqrtl(dx * dx + dy * dy);
  if (c.mode == GeometryMode::Axisymmetric)
    len *= static_cast<long double>(kPi) * (static_cast<long double>(a.x) + b.x);
  return len;
}

inline long double energy_ld(const SimState& state, const Closures& closures) {
  long double E = 0.0L;
  for (size_t c = 0; c < state.curves.size(); ++c) {
    const MarkerCurve& cur = state.curves[c];
    const SurfaceEos& eos = closures.per_curve[c].eos;
    for (int s = 0; s < cur.n_segments(); ++s) {
      const long double A = segment_measure_ld(cur, s);
      const long double m = cur.segment_mass[s];
      long double e = static_cast<long double>(eos.gamma0) * A +
                      static_cast<long double>(eos.psi_offset) * m;
      if (m > 0.0L)
        e += static_cast<long double>(eos.gamma0) / eos.rho_star * m * logl(m / A);
      E += e;
    }
  }
  for (size_t r = 0; r < state.topology.regions.size(); ++r) {
    const int p = state.phase_index(state.topology.regions[r].phase);
    long double A = 0.0L;
    for (const Polygon& poly : assemble_region(state.topology, state.curves, static_cast<int>(r)))
      A += polygon_measure_ld(poly, state.mode);
    const PhaseReservoir& ph = state.phases[p];
    const long double b =
        static_cast<long double>(ph.eos.p_ref) - static_cast<long double>(ph.eos.c2) * ph.eos.rho_ref;
    E += -b * A + static_cast<long double>(ph.eos.c2) * ph.mass * logl(ph.mass / A);
  }
  if (state.mode == GeometryMode::Axisymmetric)
    for (const TripleJunction& jn : state.junctions)
      E += 2.0L * static_cast<long double>(kPi) * jn.line_tension * jn.position.x;
  return E;
}

}  // namespace triline::testing
