#pragma once

// Constitutive transfer closures: bulk<->interface sorption, interface slip,
// and the triple-junction mass/chemical-potential system.
//
// Sign conventions: sorption flux J > 0 adds mass to the interface; junction
// flux mdot_k > 0 adds mass to interface k. With these, every closure here
// strictly dissipates the available energy.

#include <array>

#include "common.hpp"
#include "geometry.hpp"

namespace triline {

struct SorptionParams {
  double a_sigma = 1.0;        // sorption modulus a > 0
  double k_de = 1.0;           // desorption coefficient k > 0 [1/s]
  bool include_kinetic = false;  // add the (J/rho_bulk)^2/2 affinity term
};

struct SorptionResult {
  double flux = 0.0;              // J [kg/(m^2 s)], positive toward the interface
  double dissipation_rate = 0.0;  // a (ln mdot_ad - ln mdot_de)(mdot_ad - mdot_de) >= 0
};

// Nonlinear sorption closure: J = k_de rho_s (exp(A/a) - 1) with affinity
// A = mu_bulk - mu_surf (+ (J/rho_bulk)^2/2 when the kinetic term is on,
// which makes the equation implicit; solved by damped Newton).
// rho_s = 0 gives J = 0 (desorption rate k_de*rho_s vanishes, and with it the
// adsorption branch fixed only as a ratio).
SorptionResult sorption_flux(const SorptionParams& p, double mu_bulk, double mu_surf,
                             double rho_s, double rho_bulk);

struct SlipParams {
  double beta_plus = 0.0;   // slip coefficient toward side_plus
  double beta_minus = 0.0;  // slip coefficient toward side_minus
  double beta_sum() const { return beta_plus + beta_minus; }
};

// Marangoni balance with the bulk at rest: v_par = (dgamma/ds)/(b+ + b-) tangent.
Vec2 slip_velocity(const SlipParams& p, double dgamma_ds, const Vec2& tangent);

struct JunctionSolveResult {
  std::array<double, 3> mdot{};  // mass rate added to each incident interface
  double mu_c = 0.0;
  double dissipation_rate = 0.0;
};

// Linear mode: mdot_k = -L (mu_k - mu_c), mu_c = mean(mu), sum mdot = 0 exact,
// dissipation L sum (mu_k - mu_c)^2.
// Ideal mode: solves { sum mdot = 0 ; mu_k - mu_c + (mdot_k/rho_k)^2/2 = 0 }
// to newton_tol. The kinetic terms force mu_c >= max mu_k, so real solutions
// can fail to exist away from equilibrium: ClosureSolveFailed then. The Ideal
// closure is reversible, so its dissipation_rate is 0.
JunctionSolveResult junction_solve(const JunctionClosure& closure,
                                   const std::array<double, 3>& mu_surf,
                                   const std::array<double, 3>& rho_surf);

// Net configurational force per unit line length on the junction:
//   gamma_c * kappa_c - sum_k gamma_k N^k.
// Vanishes exactly at the Neumann/Kirchhoff balance; in axisymmetric mode
// kappa_c has magnitude 1/r and points toward the axis, in planar mode it is
// zero.
Vec2 kirchhoff_residual(const std::array<double, 3>& gammas,
                        const std::array<Vec2, 3>& conormals, double line_tension,
                        const Vec2& kappa_c);

}  // namespace triline
