#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "transport_verify.hpp"

using namespace triline;
using namespace triline::transport;

TEST_CASE("static volume case sits at round-off") {
  CHECK(volume_transport_residual("ball_static", 0.5, 0.05, 8) <= 1e-12);
}

TEST_CASE("expanding ball reproduces the analytic derivative 4 pi") {
  const CaseReport rep = evaluate_case("ball_expand_const", 2);
  CHECK(rep.has_reference);
  CHECK(rep.reference == doctest::Approx(4.0 * kPi));
  CHECK(std::abs(rep.lhs.back() - 4.0 * kPi) < 5e-3);
  // refinement (dt,h) -> (dt/2,h/2) cuts the residual by at least 3.5
  for (size_t l = 1; l < rep.residual.size(); ++l)
    CHECK(rep.residual[l - 1] / rep.residual[l] >= 3.5);
}

TEST_CASE("translating ball with a body-frame field keeps the integral constant") {
  const CaseReport rep = evaluate_case("ball_translate_bodyframe", 2);
  CHECK(std::abs(rep.lhs.back()) < 1e-4);
  CHECK(rep.fitted_order >= 1.9);
}

TEST_CASE("expanding sphere reproduces 8 pi for every form") {
  const CaseReport rep = evaluate_case("sphere_expand_const", 2);
  CHECK(rep.reference == doctest::Approx(8.0 * kPi));
  // the surface quadrature itself converges at O(n^-2) toward the analytic value
  CHECK(std::abs(rep.lhs.back() - 8.0 * kPi) < 0.05);
  CHECK(std::abs(rep.lhs[1] - 8.0 * kPi) > 2.0 * std::abs(rep.lhs[2] - 8.0 * kPi));
  // the quadrature factors cancel identically here: residuals at round-off
  for (double r : rep.residual) CHECK(r <= 1e-10);
}

TEST_CASE("static surface case residual at round-off for all three forms") {
  for (SurfaceForm f :
       {SurfaceForm::Basic, SurfaceForm::Lagrangian, SurfaceForm::NormalBoundary})
    CHECK(surface_transport_residual("sphere_static", f, 0.2, 0.05, 8) <= 1e-12);
}

TEST_CASE("surface forms agree pairwise within twice the individual residuals") {
  for (const char* name : {"cap_expand", "plane_box_translate", "sphere_wobble_rotate"}) {
    const CaseReport rep = evaluate_case(name, 2);
    for (size_t l = 0; l < rep.residual.size(); ++l) {
      const auto& fr = rep.form_residuals[l];
      const double worst = std::max({fr[0], fr[1], fr[2]});
      CHECK(rep.form_pair_worst[l] <= 2.0 * worst + 1e-12);
    }
  }
}

TEST_CASE("boundary-speed identity holds pointwise on boundary cases") {
  for (const char* name : {"cap_expand", "plane_box_translate"}) {
    const CaseReport rep = evaluate_case(name, 1);
    for (double b : rep.boundary_identity) CHECK(b <= 1e-11);
  }
}

TEST_CASE("cap case matches its analytic reference") {
  const CaseReport rep = evaluate_case("cap_expand", 2);
  const double want = (4.0 * kPi * 1.3 + 2.0 * kPi * 0.6) * 0.2;
  CHECK(rep.reference == doctest::Approx(want));
  CHECK(std::abs(rep.lhs.back() - want) < 2e-3);
}

TEST_CASE("expanding circle reproduces 2 pi") {
  const CaseReport rep = evaluate_case("circle_expand", 1);
  CHECK(rep.reference == doctest::Approx(2.0 * kPi));
  for (double lhs : rep.lhs) CHECK(std::abs(lhs - 2.0 * kPi) < 1e-10);
}

TEST_CASE("rigidly translated curve with body-frame field is exactly invariant") {
  CHECK(line_transport_residual("curve_translate_bodyframe", 0.3, 0.05, 16) <= 1e-10);
}

TEST_CASE("sweeping arc endpoint term matches the symbolic derivative") {
  const CaseReport rep = evaluate_case("arc_sweep_endpoint", 2);
  // d/dt int_0^alpha phi dl = phi(endpoint) * alpha_dot for a static curve
  const double alpha = 1.0 + 0.5 * 0.4;
  const double want = (1.0 + std::cos(alpha) + std::sin(alpha) * std::sin(alpha)) * 0.5;
  CHECK(rep.reference == doctest::Approx(want));
  CHECK(std::abs(rep.lhs.back() - want) < 1e-4);
  CHECK(rep.fitted_order >= 1.9);
}

TEST_CASE("every dynamic catalog case converges at combined order >= 1.9") {
  for (const std::string& name : case_names()) {
    const CaseReport rep = evaluate_case(name, 2);
    double scale = 1.0;
    for (double l : rep.lhs) scale = std::max(scale, std::abs(l));
    const bool at_roundoff = rep.residual.back() <= 1e-10 * scale;
    if (rep.is_static || at_roundoff) {
      for (double r : rep.residual) CHECK(r <= 1e-10 * scale);
    } else {
      INFO(name);
      CHECK(rep.fitted_order >= 1.9);
    }
  }
}

TEST_CASE("interface touching the control boundary raises IllPosedCase") {
  try {
    // R(t) = 1 + t reaches the control sphere R_V = 3 at t = 2
    volume_transport_residual("ball_expand_const", 1.95, 0.05, 8);
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::IllPosedCase);
  }
}

TEST_CASE("catalog CSV has rows for every case and level") {
  const std::string csv = catalog_csv("", 1);
  for (const std::string& name : case_names())
    CHECK(csv.find(name) != std::string::npos);
  CHECK_THROWS_AS(catalog_csv("no_such_case", 1), TrilineError);
}
