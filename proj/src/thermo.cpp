#include "thermo.hpp"

#include <limits>

namespace triline {

BulkState bulk_eval(const BulkEos& eos, double rho) {
  if (!(rho > 0.0))
    fail(Err::NonPositiveDensity, "bulk_eval: rho must be positive, got " + std::to_string(rho));
  if (!(eos.c2 > 0.0)) fail(Err::Invalid, "bulk_eval: c2 must be positive");
  const double b = eos.p_ref - eos.c2 * eos.rho_ref;
  BulkState out;
  out.p = b + eos.c2 * rho;
  out.psi = -b / rho + eos.c2 * std::log(rho);
  out.mu = eos.c2 * (1.0 + std::log(rho));
  return out;
}

double bulk_phase_energy(const BulkEos& eos, double mass, double measure) {
  if (!(mass > 0.0)) fail(Err::NonPositiveDensity, "bulk_phase_energy: mass must be positive");
  if (!(measure > 0.0)) fail(Err::TopologyError, "bulk_phase_energy: nonpositive region measure");
  const double b = eos.p_ref - eos.c2 * eos.rho_ref;
  return -b * measure + eos.c2 * mass * std::log(mass / measure);
}

static void check_surface_range(const SurfaceEos& eos, double rho_s) {
  if (rho_s < 0.0)
    fail(Err::NonPositiveDensity, "surface_eval: rho_s must be nonnegative");
  if (rho_s >= surface_rho_max(eos))
    fail(Err::TensionDepleted,
         "surface tension depleted: rho_s = " + std::to_string(rho_s) +
             " >= " + std::to_string(surface_rho_max(eos)));
}

SurfaceState surface_eval(const SurfaceEos& eos, double rho_s) {
  if (!(eos.gamma0 > 0.0) || !(eos.rho_star > 0.0))
    fail(Err::Invalid, "surface_eval: gamma0 and rho_star must be positive");
  check_surface_range(eos, rho_s);
  SurfaceState out;
  out.gamma = eos.gamma0 * (1.0 - rho_s / eos.rho_star);
  out.p_s = -out.gamma;
  if (rho_s == 0.0) {
    out.psi_s = std::numeric_limits<double>::infinity();
    out.mu_s = -std::numeric_limits<double>::infinity();
    out.energy_density = eos.gamma0;
  } else {
    const double lr = std::log(rho_s);
    out.psi_s = eos.gamma0 / rho_s + eos.gamma0 / eos.rho_star * lr + eos.psi_offset;
    out.mu_s = eos.gamma0 / eos.rho_star * (1.0 + lr) + eos.psi_offset;
    out.energy_density = eos.gamma0 + eos.gamma0 / eos.rho_star * rho_s * lr + eos.psi_offset * rho_s;
  }
  return out;
}

double surface_tension(const SurfaceEos& eos, double rho_s) {
  check_surface_range(eos, rho_s);
  return eos.gamma0 * (1.0 - rho_s / eos.rho_star);
}

double surface_mu(const SurfaceEos& eos, double rho_s) {
  if (!(rho_s > 0.0))
    fail(Err::NonPositiveDensity, "surface_mu: rho_s must be positive");
  check_surface_range(eos, rho_s);
  return eos.gamma0 / eos.rho_star * (1.0 + std::log(rho_s)) + eos.psi_offset;
}

double segment_energy(const SurfaceEos& eos, double mass, double measure) {
  if (!(measure > 0.0)) fail(Err::DegenerateGeometry, "segment_energy: nonpositive measure");
  if (mass < 0.0) fail(Err::NonPositiveDensity, "segment_energy: negative mass");
  check_surface_range(eos, mass / measure);
  double e = eos.gamma0 * measure + eos.psi_offset * mass;
  if (mass > 0.0) e += eos.gamma0 / eos.rho_star * mass * std::log(mass / measure);
  return e;
}

double gibbs_duhem_residual(const BulkEos& eos, double rho, double step) {
  if (!(step > 0.0)) fail(Err::Invalid, "gibbs_duhem_residual: step must be positive");
  if (!(rho - step > 0.0))
    fail(Err::NonPositiveDensity, "gibbs_duhem_residual: rho - step leaves admissible range");
  const double fd = (bulk_eval(eos, rho + step).psi - bulk_eval(eos, rho - step).psi) / (2.0 * step);
  return std::abs(rho * rho * fd - bulk_eval(eos, rho).p);
}

double gibbs_duhem_residual(const SurfaceEos& eos, double rho_s, double step) {
  if (!(step > 0.0)) fail(Err::Invalid, "gibbs_duhem_residual: step must be positive");
  if (!(rho_s - step > 0.0) || rho_s + step >= surface_rho_max(eos))
    fail(Err::NonPositiveDensity, "gibbs_duhem_residual: rho_s +/- step leaves admissible range");
  const double fd =
      (surface_eval(eos, rho_s + step).psi_s - surface_eval(eos, rho_s - step).psi_s) / (2.0 * step);
  return std::abs(rho_s * rho_s * fd - surface_eval(eos, rho_s).p_s);
}

}  // namespace triline
