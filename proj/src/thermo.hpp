#pragma once

// Equations of state for bulk phases and interfaces. Linear p(rho) and linear
// gamma(rho_s) families with closed-form free energies, so that the
// Gibbs-Duhem identities p = rho^2 psi'(rho) and mu = psi + p/rho hold
// analytically.

#include "common.hpp"

namespace triline {

struct BulkEos {
  double rho_ref = 1.0;  // reference density [kg/m^3]
  double p_ref = 1.0;    // pressure at rho_ref [Pa]
  double c2 = 1.0;       // compressibility modulus, p'(rho) > 0
};

struct BulkState {
  double p = 0.0;
  double psi = 0.0;
  double mu = 0.0;
};

// p(rho) = p_ref + c2 (rho - rho_ref)
// psi(rho) = -(p_ref - c2 rho_ref)/rho + c2 ln(rho)
// mu(rho) = c2 (1 + ln(rho))
BulkState bulk_eval(const BulkEos& eos, double rho);

// Free energy of a well-mixed phase of mass M in a region of measure A:
// M * psi(M/A). Written in terms of (M, A) so the A-derivative is -p exactly.
double bulk_phase_energy(const BulkEos& eos, double mass, double measure);

struct SurfaceEos {
  double gamma0 = 1.0;     // clean-interface tension [N/m]
  double rho_star = 1.0;   // saturation scale [kg/m^2]
  double psi_offset = 0.0; // additive constant in psi^s
};

struct SurfaceState {
  double gamma = 0.0;
  double p_s = 0.0;
  double psi_s = 0.0;
  double mu_s = 0.0;
  double energy_density = 0.0;  // rho_s * psi_s, with limit gamma0 at rho_s = 0
};

// Tension must stay positive; the model loses meaning beyond this point.
inline double surface_rho_max(const SurfaceEos& eos) {
  return eos.rho_star * (1.0 - 1e-6);
}

// gamma(r) = gamma0 (1 - r/rho_star), p_s = -gamma
// psi_s(r) = gamma0/r + (gamma0/rho_star) ln(r) + psi_offset
// mu_s(r)  = (gamma0/rho_star)(1 + ln r) + psi_offset
// energy_density(r) = gamma0 + (gamma0/rho_star) r ln(r) + psi_offset r
// At r = 0: psi_s = +inf and mu_s = -inf; gamma, p_s, energy_density are finite.
SurfaceState surface_eval(const SurfaceEos& eos, double rho_s);

double surface_tension(const SurfaceEos& eos, double rho_s);
double surface_mu(const SurfaceEos& eos, double rho_s);  // requires rho_s > 0

// Energy of one interface segment of mass m and measure A:
//   A * energy_density(m/A) = gamma0 A + (gamma0/rho_star) m ln(m/A) + C m.
// dE/dA = gamma(m/A), dE/dm = mu_s(m/A).
double segment_energy(const SurfaceEos& eos, double mass, double measure);

// |rho^2 FD(psi') - p| by central differences at the given step, for either
// family. Throws if rho +/- step leaves the admissible range.
double gibbs_duhem_residual(const BulkEos& eos, double rho, double step);
double gibbs_duhem_residual(const SurfaceEos& eos, double rho_s, double step);

}  // namespace triline
