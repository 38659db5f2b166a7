#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thermo.hpp"

using namespace triline;

namespace {
const BulkEos kBulk{1.0, 1.0, 10.0};
const SurfaceEos kSurf{1.0, 1.0, 0.0};
}  // namespace

TEST_CASE("bulk reference state reproduces p_ref") {
  const BulkState s = bulk_eval(kBulk, kBulk.rho_ref);
  CHECK(s.p == doctest::Approx(kBulk.p_ref).epsilon(1e-15));
}

TEST_CASE("bulk Gibbs-Duhem closure: mu = psi + p/rho exactly") {
  for (double rho : {0.3, 0.9, 1.4, 3.7}) {
    const BulkState s = bulk_eval(kBulk, rho);
    CHECK(s.mu == doctest::Approx(s.psi + s.p / rho).epsilon(1e-14));
  }
}

TEST_CASE("bulk Maxwell relation by central differences") {
  for (double rho : {0.5, 1.0, 2.0}) {
    const double p = bulk_eval(kBulk, rho).p;
    CHECK(gibbs_duhem_residual(kBulk, rho, 1e-5 * rho) <= 1e-8 * std::max(1.0, std::abs(p)));
  }
}

TEST_CASE("bulk chemical potential strictly increasing") {
  double prev = bulk_eval(kBulk, 0.05).mu;
  for (int i = 1; i <= 200; ++i) {
    const double rho = 0.05 + 0.05 * i;
    const double mu = bulk_eval(kBulk, rho).mu;
    CHECK(mu > prev);
    prev = mu;
  }
}

TEST_CASE("bulk density guard") {
  CHECK_THROWS_WITH_AS(bulk_eval(kBulk, 0.0), doctest::Contains("positive"), TrilineError);
  CHECK_THROWS_AS(bulk_eval(kBulk, -1.0), TrilineError);
}

TEST_CASE("surface clean-interface limit") {
  const SurfaceState s = surface_eval(kSurf, 0.0);
  CHECK(s.gamma == doctest::Approx(1.0));
  CHECK(s.energy_density == doctest::Approx(1.0));
  CHECK(s.p_s == doctest::Approx(-1.0));
}

TEST_CASE("surface linear tension value") {
  CHECK(surface_eval(kSurf, 0.5).gamma == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("surface Gibbs-Duhem residual at rho_s = 0.3") {
  CHECK(gibbs_duhem_residual(kSurf, 0.3, 1e-5 * 0.3) <= 1e-8);
}

TEST_CASE("gibbs_duhem_residual shows second-order step behavior") {
  // residual(step) ~ C step^2 for the closed forms: Richardson factor ~ 4
  const double r1 = gibbs_duhem_residual(kSurf, 0.3, 2e-3);
  const double r2 = gibbs_duhem_residual(kSurf, 0.3, 1e-3);
  CHECK(r1 / r2 > 3.0);
  CHECK(r1 / r2 < 5.0);
  const double b1 = gibbs_duhem_residual(kBulk, 1.3, 2e-2);
  const double b2 = gibbs_duhem_residual(kBulk, 1.3, 1e-2);
  CHECK(b1 / b2 > 3.0);
  CHECK(b1 / b2 < 5.0);
}

TEST_CASE("range boundary raises instead of returning a number") {
  CHECK_THROWS_AS(gibbs_duhem_residual(kBulk, 1e-6, 1e-5), TrilineError);
  CHECK_THROWS_AS(gibbs_duhem_residual(kSurf, 0.9999999, 1e-5), TrilineError);
  CHECK_THROWS_AS(surface_eval(kSurf, 1.0), TrilineError);
  try {
    surface_eval(kSurf, 0.9999999);
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::TensionDepleted);
  }
  CHECK_THROWS_AS(surface_eval(kSurf, -0.1), TrilineError);
}

TEST_CASE("surface chemical potential strictly increasing over admissible range") {
  const SurfaceEos eos{2.0, 3.0, 1.5};
  double prev = surface_mu(eos, 1e-6);
  for (int i = 1; i <= 500; ++i) {
    const double rho = 1e-6 + (surface_rho_max(eos) * (1.0 - 1e-3) - 1e-6) * i / 500.0;
    const double mu = surface_mu(eos, rho);
    CHECK(mu > prev);
    prev = mu;
  }
}

TEST_CASE("zero-mass energy limit approaches gamma0") {
  const SurfaceEos eos{1.7, 2.2, 0.4};
  for (double f : {1e-3, 1e-6, 1e-9}) {
    const double rho = f * eos.rho_star;
    const double ed = surface_eval(eos, rho).energy_density;
    CHECK(std::abs(ed - eos.gamma0) < 20.0 * f * eos.gamma0 * std::abs(std::log(f)));
  }
  CHECK(surface_eval(eos, 0.0).energy_density == doctest::Approx(eos.gamma0));
}

TEST_CASE("surface pressure negative throughout the admissible range") {
  const SurfaceEos eos{0.9, 1.3, -0.7};
  for (int i = 0; i < 100; ++i) {
    const double rho = surface_rho_max(eos) * (0.999 * i / 100.0);
    CHECK(surface_eval(eos, rho).p_s < 0.0);
  }
}

TEST_CASE("segment energy matches energy density times measure") {
  const SurfaceEos eos{1.0, 4.0, 0.3};
  const double m = 0.37, A = 1.9;
  CHECK(segment_energy(eos, m, A) ==
        doctest::Approx(A * surface_eval(eos, m / A).energy_density).epsilon(1e-14));
  CHECK(segment_energy(eos, 0.0, A) == doctest::Approx(A * eos.gamma0));
}

TEST_CASE("surface states mutually Gibbs-Duhem consistent") {
  const SurfaceEos eos{1.4, 2.5, 0.2};
  for (double rho : {0.01, 0.4, 1.7, 2.3}) {
    const SurfaceState s = surface_eval(eos, rho);
    CHECK(s.p_s == doctest::Approx(-s.gamma).epsilon(1e-15));
    CHECK(s.mu_s == doctest::Approx(s.psi_s + s.p_s / rho).epsilon(1e-12));
    CHECK(s.energy_density == doctest::Approx(rho * s.psi_s).epsilon(1e-12));
  }
}
