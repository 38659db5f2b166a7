#pragma once

// Numerical verification of the volume, surface and line transport theorems
// on analytic moving geometries in full 3D, independent of the simulator's 2D
// marker discretization. Each catalog case compares a central finite
// difference of a moving integral against the corresponding right-hand side,
// assembled by fitted composite quadrature; residuals converge at combined
// second order under (dt, h) -> (dt/2, h/2).
//
// The three surface forms are:
//   Basic          d/dt I = int(dphi/dt^S - phi kappa V) + bdry phi V_b
//   Lagrangian     d/dt I = int(D phi/Dt + phi div_S v)  + bdry phi (V_b - v.N)
//   NormalBoundary same interior, boundary -phi (v.n_V)/sqrt(1-(n.n_V)^2)
// with V_b the in-tangent-plane normal speed of the patch boundary. The
// boundary-speed identity V_b = -V (n.n_V)/sqrt(1-(n.n_V)^2) is also checked
// pointwise on every case with a real boundary.
//
// Line endpoints: the endpoint speed V_b entering the point-measure term is
// taken as the signed speed of the set endpoint along the outer tangent nu
// (materially tracked endpoints make V_b - v.nu vanish identically).

#include <array>
#include <string>
#include <vector>

#include "common.hpp"

namespace triline::transport {

enum class CaseKind { Volume, Surface, Line };

enum class SurfaceForm { Basic = 0, Lagrangian = 1, NormalBoundary = 2 };

struct CaseReport {
  std::string name;
  CaseKind kind = CaseKind::Volume;
  bool is_static = false;   // trivial case: residual sits at round-off
  double reference = 0.0;   // analytic d/dt value (nan when none exists)
  bool has_reference = false;
  std::vector<double> residual;     // per level; surface: worst over the three forms
  std::vector<std::array<double, 3>> form_residuals;  // surface cases only
  std::vector<double> form_pair_worst;  // max_ij |rhs_i - rhs_j| per level
  std::vector<double> boundary_identity;  // max pointwise defect (surface w/ boundary)
  std::vector<double> lhs;    // finite-difference derivative per level
  std::vector<double> order;  // log2(res[l-1]/res[l]), nan at level 0
  double fitted_order = 0.0;  // least-squares slope over levels
};

std::vector<std::string> case_names();

// refinements = number of halvings; levels = refinements + 1.
CaseReport evaluate_case(const std::string& name, int refinements);

// Residual of one theorem evaluation at explicit (t, dt, n); used by the
// direct per-operation tests. Throws IllPosedCase when the case geometry
// does not admit the requested evaluation.
double volume_transport_residual(const std::string& name, double t, double dt, int n);
double surface_transport_residual(const std::string& name, SurfaceForm form, double t,
                                  double dt, int n);
double line_transport_residual(const std::string& name, double t, double dt, int n);

// CSV rows "case,level,residual,order"; only_case empty = whole catalog.
std::string catalog_csv(const std::string& only_case, int refinements);

}  // namespace triline::transport
