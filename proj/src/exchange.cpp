#include "exchange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace triline {

SorptionResult sorption_flux(const SorptionParams& p, double mu_bulk, double mu_surf,
                             double rho_s, double rho_bulk) {
  if (!(p.a_sigma > 0.0) || !(p.k_de > 0.0))
    fail(Err::Invalid, "sorption_flux: a_sigma and k_de must be positive");
  if (rho_s < 0.0) fail(Err::NonPositiveDensity, "sorption_flux: negative rho_s");
  if (!(rho_bulk > 0.0)) fail(Err::NonPositiveDensity, "sorption_flux: nonpositive rho_bulk");
  if (rho_s == 0.0) return {0.0, 0.0};

  const double mde = p.k_de * rho_s;
  const double a0 = mu_bulk - mu_surf;
  if (!p.include_kinetic) {
    const double flux = mde * std::expm1(a0 / p.a_sigma);
    return {flux, a0 * flux};
  }

  // Implicit closure: g(J) = J - mde*expm1((a0 + (J/rho_bulk)^2/2)/a) = 0.
  auto g = [&](double J) {
    return J - mde * std::expm1((a0 + 0.5 * (J / rho_bulk) * (J / rho_bulk)) / p.a_sigma);
  };
  auto gp = [&](double J) {
    const double arg = (a0 + 0.5 * (J / rho_bulk) * (J / rho_bulk)) / p.a_sigma;
    return 1.0 - mde * std::exp(arg) * J / (p.a_sigma * rho_bulk * rho_bulk);
  };
  double J = mde * std::expm1(a0 / p.a_sigma);
  const double scale = std::max({1.0, std::abs(J), mde});
  double r = g(J);
  bool ok = false;
  for (int it = 0; it < 50; ++it) {
    if (std::abs(r) <= 1e-12 * scale) {
      ok = true;
      break;
    }
    const double d = gp(J);
    if (d == 0.0 || !std::isfinite(d)) break;
    double step = -r / d;
    double lambda = 1.0;
    double Jn = J + step, rn = g(Jn);
    int halvings = 0;
    while ((!std::isfinite(rn) || std::abs(rn) >= std::abs(r)) && halvings < 40) {
      lambda *= 0.5;
      Jn = J + lambda * step;
      rn = g(Jn);
      ++halvings;
    }
    if (halvings == 40) break;
    J = Jn;
    r = rn;
  }
  if (!ok && std::abs(r) > 1e-12 * scale)
    fail(Err::ClosureSolveFailed,
         "sorption_flux: implicit kinetic closure did not converge (affinity " +
             std::to_string(a0) + ", residual " + std::to_string(r) + ")");
  const double affinity = a0 + 0.5 * (J / rho_bulk) * (J / rho_bulk);
  return {J, affinity * J};
}

Vec2 slip_velocity(const SlipParams& p, double dgamma_ds, const Vec2& tangent) {
  if (p.beta_plus < 0.0 || p.beta_minus < 0.0)
    fail(Err::Invalid, "slip_velocity: negative slip coefficient");
  if (p.beta_sum() == 0.0)
    fail(Err::SlipDegenerate, "slip_velocity: beta_plus + beta_minus = 0");
  return (dgamma_ds / p.beta_sum()) * tangent;
}

namespace {

JunctionSolveResult solve_linear(double L, const std::array<double, 3>& mu) {
  JunctionSolveResult out;
  out.mu_c = (mu[0] + mu[1] + mu[2]) / 3.0;
  double diss = 0.0;
  for (int k = 0; k < 3; ++k) {
    out.mdot[k] = -L * (mu[k] - out.mu_c);
    diss += L * (mu[k] - out.mu_c) * (mu[k] - out.mu_c);
  }
  // enforce exact mass balance against the last round-off
  const double m = (out.mdot[0] + out.mdot[1] + out.mdot[2]) / 3.0;
  for (double& v : out.mdot) v -= m;
  out.dissipation_rate = diss;
  return out;
}

double ideal_residual(const std::array<double, 3>& mu, const std::array<double, 3>& rho,
                      const std::array<double, 3>& m, double c) {
  double worst = std::abs(m[0] + m[1] + m[2]);
  for (int k = 0; k < 3; ++k) {
    const double q = m[k] / rho[k];
    worst = std::max(worst, std::abs(mu[k] - c + 0.5 * q * q));
  }
  return worst;
}

// Full Newton polish of the 4x4 system from a starting point.
bool ideal_newton(const std::array<double, 3>& mu, const std::array<double, 3>& rho,
                  std::array<double, 3>& m, double& c, double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    std::array<double, 4> F = {mu[0] - c + 0.5 * (m[0] / rho[0]) * (m[0] / rho[0]),
                               mu[1] - c + 0.5 * (m[1] / rho[1]) * (m[1] / rho[1]),
                               mu[2] - c + 0.5 * (m[2] / rho[2]) * (m[2] / rho[2]),
                               m[0] + m[1] + m[2]};
    double worst = 0.0;
    for (double f : F) worst = std::max(worst, std::abs(f));
    if (worst <= tol) return true;
    // J = [diag(m_k/rho_k^2) , -1; 1 1 1 0]; solve by elimination.
    std::array<double, 3> d = {m[0] / (rho[0] * rho[0]), m[1] / (rho[1] * rho[1]),
                               m[2] / (rho[2] * rho[2])};
    // dm_k = (dc + (-F_k)) / d_k ; sum dm_k = -F_4 determines dc.
    double num = -F[3], den = 0.0;
    for (int k = 0; k < 3; ++k) {
      if (d[k] == 0.0) return false;
      num += F[k] / d[k];
      den += 1.0 / d[k];
    }
    if (den == 0.0) return false;
    const double dc = num / den;
    for (int k = 0; k < 3; ++k) m[k] += (dc - F[k]) / d[k];
    c += dc;
  }
  return ideal_residual(mu, rho, m, c) <= tol;
}

JunctionSolveResult solve_ideal(const JunctionClosure& cl, const std::array<double, 3>& mu,
                                const std::array<double, 3>& rho) {
  for (double r : rho)
    if (!(r > 0.0))
      fail(Err::NonPositiveDensity, "junction_solve (ideal): rho_surf must be positive");
  JunctionSolveResult out;
  const double mu_max = std::max({mu[0], mu[1], mu[2]});
  const double mu_min = std::min({mu[0], mu[1], mu[2]});
  const double spread = mu_max - mu_min;
  const double scale = std::max({std::abs(mu[0]), std::abs(mu[1]), std::abs(mu[2]), 1.0});
  if (spread <= 1e-15 * scale) {
    out.mu_c = (mu[0] + mu[1] + mu[2]) / 3.0;
    return out;  // equilibrium: zero fluxes, zero dissipation
  }

  // The kinetic terms require mu_c >= max_k mu_k. Parametrize by mu_c and a
  // sign pattern: m_k = s_k rho_k sqrt(2(mu_c - mu_k)); scan the mixed
  // patterns for a root of the mass balance, then polish with Newton.
  auto masses = [&](double c, const std::array<int, 3>& s) {
    std::array<double, 3> m;
    for (int k = 0; k < 3; ++k) m[k] = s[k] * rho[k] * std::sqrt(std::max(0.0, 2.0 * (c - mu[k])));
    return m;
  };
  const std::array<std::array<int, 3>, 6> patterns = {{{+1, +1, -1},
                                                       {+1, -1, +1},
                                                       {-1, +1, +1},
                                                       {+1, -1, -1},
                                                       {-1, +1, -1},
                                                       {-1, -1, +1}}};
  const double c_lo = mu_max;
  const double c_hi = mu_max + 64.0 * spread;
  const int n_scan = 512;
  for (const auto& s : patterns) {
    auto h = [&](double c) {
      const auto m = masses(c, s);
      return m[0] + m[1] + m[2];
    };
    double prev_c = c_lo, prev_h = h(c_lo);
    for (int i = 1; i <= n_scan; ++i) {
      const double c = c_lo + (c_hi - c_lo) * i / n_scan;
      const double hc = h(c);
      if (prev_h == 0.0 || hc == 0.0 || (prev_h < 0.0) != (hc < 0.0)) {
        double a = prev_c, b = c;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (a + b);
          if ((h(a) < 0.0) != (h(mid) < 0.0)) b = mid;
          else a = mid;
        }
        double c_root = 0.5 * (a + b);
        auto m = masses(c_root, s);
        ideal_newton(mu, rho, m, c_root, cl.newton_tol, cl.max_iter);
        if (ideal_residual(mu, rho, m, c_root) <= cl.newton_tol) {
          const double mean = (m[0] + m[1] + m[2]) / 3.0;
          for (double& v : m) v -= mean;
          out.mdot = m;
          out.mu_c = c_root;
          out.dissipation_rate = 0.0;  // reversible closure
          return out;
        }
      }
      prev_c = c;
      prev_h = hc;
    }
  }
  std::ostringstream msg;
  msg << "junction_solve (ideal): no real solution; affinities relative to mean:";
  const double mean = (mu[0] + mu[1] + mu[2]) / 3.0;
  for (int k = 0; k < 3; ++k) msg << ' ' << (mu[k] - mean);
  fail(Err::ClosureSolveFailed, msg.str());
}

}  // namespace

JunctionSolveResult junction_solve(const JunctionClosure& closure,
                                   const std::array<double, 3>& mu_surf,
                                   const std::array<double, 3>& rho_surf) {
  switch (closure.mode) {
    case JunctionClosure::Mode::Off:
      return {};
    case JunctionClosure::Mode::Linear:
      if (!(closure.transfer_coefficient > 0.0))
        fail(Err::Invalid, "junction_solve: linear mode requires L > 0");
      return solve_linear(closure.transfer_coefficient, mu_surf);
    case JunctionClosure::Mode::Ideal:
      return solve_ideal(closure, mu_surf, rho_surf);
  }
  fail(Err::Internal, "junction_solve: unknown mode");
}

Vec2 kirchhoff_residual(const std::array<double, 3>& gammas,
                        const std::array<Vec2, 3>& conormals, double line_tension,
                        const Vec2& kappa_c) {
  for (const Vec2& n : conormals)
    if (std::abs(norm(n) - 1.0) > 1e-9)
      fail(Err::Invalid, "kirchhoff_residual: conormals must be unit vectors");
  Vec2 out = line_tension * kappa_c;
  for (int k = 0; k < 3; ++k) out -= gammas[k] * conormals[k];
  return out;
}

}  // namespace triline
