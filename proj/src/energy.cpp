#include "energy.hpp"

#include <algorithm>
#include <cmath>

namespace triline {

EnergyLedger total_available_energy(const SimState& state, const Closures& closures) {
  const Derived d = refresh(state, closures);
  const Energies e = assemble_energies(state, closures, d);
  EnergyLedger led;
  led.t = state.time;
  led.E_bulk = e.E_bulk;
  led.E_interface = e.E_interface;
  led.E_line = e.E_line;
  led.E_total = e.E_total;
  return led;
}

EnergyLedger dissipation_budget(const SimState& state, const MobilityParams& mob,
                                const Closures& closures, const Rates& rates) {
  EnergyLedger led;
  led.t = state.time;
  led.E_bulk = rates.forces.energy.E_bulk;
  led.E_interface = rates.forces.energy.E_interface;
  led.E_line = rates.forces.energy.E_line;
  led.E_total = rates.forces.energy.E_total;

  for (int c = 0; c < static_cast<int>(state.curves.size()); ++c) {
    const MarkerCurve& cur = state.curves[c];
    const CurvePhysics& phys = closures.per_curve[c];
    for (int i = 0; i < cur.n_markers(); ++i) {
      if (cur.marker_at_junction(i)) continue;  // counted in D_junction
      const double w = rates.lumped[c][i];
      led.D_normal += rates.v_n[c][i] * rates.v_n[c][i] / mob.m_n * w;
      if (phys.slip_on)
        led.D_slip += phys.slip.beta_sum() * rates.v_par[c][i] * rates.v_par[c][i] * w;
    }
    for (int s = 0; s < cur.n_segments(); ++s)
      led.D_sorption +=
          (rates.diss_plus[c][s] + rates.diss_minus[c][s]) * rates.seg_measure[c][s];
  }

  for (size_t j = 0; j < state.junctions.size(); ++j) {
    const TripleJunction& jn = state.junctions[j];
    const double lm = rates.junction_line_measure[j];
    led.D_junction += lm * dot(rates.f_junction[j], rates.v_junction[j]);
    if (jn.closure.mode == JunctionClosure::Mode::Linear) {
      double s2 = 0.0;
      for (double m : rates.junction_transfer[j].mdot) s2 += m * m;
      led.D_junction += lm * s2 / jn.closure.transfer_coefficient;
    }
    // Ideal mode is reversible: no junction-transfer dissipation.
  }

  for (double d : {led.D_normal, led.D_slip, led.D_sorption, led.D_junction})
    if (d < -1e-14)
      fail(Err::Internal, "negative dissipation channel: " + std::to_string(d));
  return led;
}

DecayReport decay_certificate(const std::vector<LedgerRow>& rows, double tolerance_rel,
                              double v_threshold) {
  DecayReport rep;
  if (rows.size() < 3) fail(Err::Invalid, "decay_certificate: need at least 3 rows");
  double e_scale = 0.0;
  for (const LedgerRow& r : rows) e_scale = std::max(e_scale, std::abs(r.E_total));
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    const double dE = rows[i + 1].E_total - rows[i].E_total;
    rep.worst_violation = std::max(rep.worst_violation, dE);
    const double dt = rows[i + 1].t - rows[i].t;
    if (dt > 0.0)
      rep.max_budget_mismatch =
          std::max(rep.max_budget_mismatch, std::abs(dE / dt + rows[i].channel_sum()));
    if (rows[i].max_v_sigma > v_threshold && !(rows[i].channel_sum() > 0.0))
      rep.strictly_dissipative = false;
  }
  rep.worst_violation = std::max(0.0, rep.worst_violation);
  rep.worst_violation_rel = e_scale > 0.0 ? rep.worst_violation / e_scale : 0.0;
  rep.monotone = rep.worst_violation_rel <= tolerance_rel;
  return rep;
}

double budget_convergence_order(const std::vector<std::pair<double, double>>& dt_and_mismatch) {
  if (dt_and_mismatch.size() < 2)
    fail(Err::Invalid, "budget_convergence_order: need at least 2 runs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dt_and_mismatch.size());
  for (const auto& [dt, m] : dt_and_mismatch) {
    const double x = std::log(dt), y = std::log(std::max(m, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace triline
