#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "geometry.hpp"

using namespace triline;

namespace {

MarkerCurve make_circle(double R, int n, GeometryMode mode = GeometryMode::Planar,
                        Vec2 center = {0, 0}) {
  MarkerCurve c;
  c.id = "circle";
  c.mode = mode;
  c.closed = true;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    c.markers.push_back(center + R * Vec2{std::cos(th), std::sin(th)});
  }
  c.segment_mass.assign(n, 0.0);
  return c;
}

MarkerCurve make_chain(std::vector<Vec2> pts, GeometryMode mode = GeometryMode::Planar) {
  MarkerCurve c;
  c.id = "chain";
  c.mode = mode;
  c.markers = std::move(pts);
  c.segment_mass.assign(c.markers.size() - 1, 0.0);
  return c;
}

// Independent long-double measure oracle: plain-double central differences of
// the measure cannot resolve the 1e-10/h tolerance at step 1e-6*h.
long double curve_measure_ld(const MarkerCurve& c) {
  long double acc = 0.0L;
  for (int s = 0; s < c.n_segments(); ++s) {
    const Vec2 a = c.markers[c.seg_a(s)], b = c.markers[c.seg_b(s)];
    const long double dx = static_cast<long double>(b.x) - a.x;
    const long double dy = static_cast<long double>(b.y) - a.y;
    long double len = sqrtl(dx * dx + dy * dy);
    if (c.mode == GeometryMode::Axisymmetric)
      len *= kPi * (static_cast<long double>(a.x) + b.x);
    acc += len;
  }
  return acc;
}

MarkerCurve reversed_with_swapped_sides(const MarkerCurve& c) {
  MarkerCurve r = c;
  std::reverse(r.markers.begin(), r.markers.end());
  std::reverse(r.segment_mass.begin(), r.segment_mass.end());
  std::swap(r.side_minus, r.side_plus);
  std::swap(r.end_start, r.end_end);
  return r;
}

}  // namespace

TEST_CASE("circle curvature is 1/R toward the center") {
  const MarkerCurve c = make_circle(2.0, 64);
  for (int i : {0, 7, 33}) {
    const Vec2 k = curvature_normal(c, i);
    CHECK(norm(k) == doctest::Approx(0.5).epsilon(1e-12));
    const Vec2 inward = -1.0 * normalized(c.markers[i]);
    CHECK(dot(normalized(k), inward) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("straight chain has zero curvature") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 10; ++i) pts.push_back({0.1 * i, 0.05 * i});
  const MarkerCurve c = make_chain(pts);
  for (int i = 1; i < 10; ++i) CHECK(norm(curvature_normal(c, i)) < 1e-13);
}

TEST_CASE("ellipse curvature at the major axis end approaches a/b^2") {
  // semi-axes (2, 1); at (2, 0) the analytic parametric curvature is a/b^2 = 2
  double err_prev = 0.0;
  for (int n : {64, 128}) {
    MarkerCurve c;
    c.mode = GeometryMode::Planar;
    c.closed = true;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      c.markers.push_back({2.0 * std::cos(t), std::sin(t)});
    }
    c.segment_mass.assign(n, 0.0);
    const Vec2 k = curvature_normal(c, 0);
    const double err = std::abs(norm(k) - 2.0);
    CHECK(dot(normalized(k), Vec2{-1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-9));
    if (n == 64) {
      err_prev = err;
      CHECK(err < 0.05);
    } else {
      CHECK(err < err_prev / 3.0);  // O(h^2)
    }
  }
}

TEST_CASE("curvature is orientation independent") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  MarkerCurve c = make_circle(1.0, 40);
  for (Vec2& p : c.markers) p += Vec2{u(rng), u(rng)};
  const MarkerCurve r = reversed_with_swapped_sides(c);
  const int n = c.n_markers();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = curvature_normal(c, i);
    const Vec2 b = curvature_normal(r, n - 1 - i);
    CHECK(norm(a - b) < 1e-13 * std::max(1.0, norm(a)));
  }
}

TEST_CASE("variational consistency: curvature times lumped measure equals -dMeasure/dx") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.03, 0.03);
  for (GeometryMode mode : {GeometryMode::Planar, GeometryMode::Axisymmetric}) {
    MarkerCurve c = make_circle(1.0, 32, mode, mode == GeometryMode::Axisymmetric
                                                   ? Vec2{2.0, 0.0}
                                                   : Vec2{0.0, 0.0});
    for (Vec2& p : c.markers) p += Vec2{u(rng), u(rng)};
    const double h = curve_length(c) / c.n_segments();
    const double delta = 1e-6 * h;
    for (int i : {0, 5, 17}) {
      const Vec2 kv = curvature_normal(c, i);
      const double w = lumped_measure(c, i);
      for (int axis = 0; axis < 2; ++axis) {
        MarkerCurve cp = c, cm = c;
        double& xp = axis == 0 ? cp.markers[i].x : cp.markers[i].y;
        double& xm = axis == 0 ? cm.markers[i].x : cm.markers[i].y;
        xp += delta;
        xm -= delta;
        // denominator from the values actually stored (the nominal step is
        // not exactly representable next to O(1) coordinates)
        const long double span = static_cast<long double>(xp) - xm;
        const double fd =
            static_cast<double>((curve_measure_ld(cp) - curve_measure_ld(cm)) / span);
        const double target = -(axis == 0 ? kv.x : kv.y) * w;
        CHECK(std::abs(fd - target) < 1e-10 / h);
      }
    }
  }
}

TEST_CASE("degenerate stencil raises DegenerateGeometry") {
  MarkerCurve c = make_chain({{0, 0}, {0, 0}, {1, 0}});
  try {
    curvature_normal(c, 1);
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::DegenerateGeometry);
  }
}

TEST_CASE("junction conormals for a symmetric 120-degree star") {
  std::vector<MarkerCurve> curves;
  TripleJunction j;
  j.id = "J";
  j.position = {0, 0};
  for (int k = 0; k < 3; ++k) {
    const double th = kPi / 2.0 + 2.0 * kPi * k / 3.0;
    const Vec2 dir{std::cos(th), std::sin(th)};
    MarkerCurve c = make_chain({{0, 0}, 0.5 * dir, 1.0 * dir});
    c.end_start = {EndpointKind::Junction, 0};
    curves.push_back(c);
    j.incident[k] = {k, true};
  }
  const auto N = junction_conormals(j, curves);
  for (int k = 0; k < 3; ++k) {
    CHECK(norm(N[k]) == doctest::Approx(1.0).epsilon(1e-14));
    const double th = kPi / 2.0 + 2.0 * kPi * k / 3.0;
    // conormal points away from the curve, i.e. opposite its direction
    CHECK(dot(N[k], Vec2{std::cos(th), std::sin(th)}) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  for (int a = 0; a < 3; ++a) {
    const double ang = std::acos(std::clamp(dot(N[a], N[(a + 1) % 3]), -1.0, 1.0));
    CHECK(ang == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("junction conormals: collinear pair plus perpendicular") {
  // curves extend along +e1, -e1, +e2 from the origin
  std::vector<MarkerCurve> curves;
  curves.push_back(make_chain({{0, 0}, {0.5, 0}, {1, 0}}));
  curves.push_back(make_chain({{0, 0}, {-0.5, 0}, {-1, 0}}));
  curves.push_back(make_chain({{0, 0}, {0, 0.5}, {0, 1}}));
  TripleJunction j;
  j.position = {0, 0};
  j.incident = {CurveEnd{0, true}, CurveEnd{1, true}, CurveEnd{2, true}};
  const auto N = junction_conormals(j, curves);
  CHECK(norm(N[0] - Vec2{-1, 0}) < 1e-14);
  CHECK(norm(N[1] - Vec2{1, 0}) < 1e-14);
  CHECK(norm(N[2] - Vec2{0, -1}) < 1e-14);
}

TEST_CASE("conormal stability under marker perturbation") {
  std::vector<MarkerCurve> curves;
  curves.push_back(make_chain({{0, 0}, {0.5, 0.1}, {1, 0.3}}));
  curves.push_back(make_chain({{0, 0}, {-0.4, 0.3}, {-0.8, 0.7}}));
  curves.push_back(make_chain({{0, 0}, {0.1, -0.5}, {0.1, -1}}));
  TripleJunction j;
  j.position = {0, 0};
  j.incident = {CurveEnd{0, true}, CurveEnd{1, true}, CurveEnd{2, true}};
  const auto N0 = junction_conormals(j, curves);
  curves[0].markers[1] += Vec2{1e-8, -1e-8};
  const auto N1 = junction_conormals(j, curves);
  for (int k = 0; k < 3; ++k) CHECK(norm(N1[k] - N0[k]) <= 1e-6);
}

TEST_CASE("zero-length end segment raises") {
  std::vector<MarkerCurve> curves;
  curves.push_back(make_chain({{0, 0}, {0, 0}, {1, 0}}));
  curves.push_back(make_chain({{0, 0}, {-1, 0}, {-2, 0}}));
  curves.push_back(make_chain({{0, 0}, {0, 1}, {0, 2}}));
  TripleJunction j;
  j.position = {0, 0};
  j.incident = {CurveEnd{0, true}, CurveEnd{1, true}, CurveEnd{2, true}};
  try {
    junction_conormals(j, curves);
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::DegenerateGeometry);
  }
}

TEST_CASE("region measure: disk in a box partitions the domain") {
  PhaseTopology topo;
  topo.box = {-2, -2, 2, 2};
  topo.phases = {"in", "out"};
  topo.regions.push_back({"in", false, {{0, false}}});
  topo.regions.push_back({"out", true, {{0, true}}});
  std::vector<MarkerCurve> curves{make_circle(1.0, 256)};
  curves[0].side_minus = "out";
  curves[0].side_plus = "in";
  const auto m = region_measure(topo, curves);
  CHECK(m[0] == doctest::Approx(kPi).epsilon(2e-4));  // O(h^2) polygon area
  CHECK(m[0] + m[1] == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("region measure is O(h^2) accurate under refinement") {
  PhaseTopology topo;
  topo.box = {-2, -2, 2, 2};
  topo.phases = {"in", "out"};
  topo.regions.push_back({"in", false, {{0, false}}});
  topo.regions.push_back({"out", true, {{0, true}}});
  double err_prev = 0.0;
  for (int i = 0; i < 2; ++i) {
    const int n = 128 << i;
    std::vector<MarkerCurve> curves{make_circle(1.0, n)};
    const auto m = region_measure(topo, curves);
    const double err = std::abs(m[0] - kPi);
    if (i > 0) CHECK(err < err_prev / 3.5);
    err_prev = err;
  }
}

TEST_CASE("axisymmetric semicircle generator gives the sphere volume") {
  // generator from the north pole to the south pole at r >= 0
  MarkerCurve c;
  c.id = "gen";
  c.mode = GeometryMode::Axisymmetric;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double th = kPi * i / n;  // z from +1 to -1
    c.markers.push_back({std::sin(th), std::cos(th)});
  }
  c.segment_mass.assign(n, 0.0);
  PhaseTopology topo;
  topo.box = {0, -2, 2, 2};
  topo.phases = {"in", "out"};
  // inside region: reversed generator (from south to north with r on the left)
  topo.regions.push_back({"in", false, {{0, true}}});
  topo.regions.push_back({"out", false, {{0, false}}});
  std::vector<MarkerCurve> curves{c};
  const auto m = region_measure(topo, curves);
  CHECK(m[0] == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-4));
  CHECK(m[0] + m[1] == doctest::Approx(domain_measure(topo.box, GeometryMode::Axisymmetric))
                           .epsilon(1e-13));
}

TEST_CASE("inconsistent orientation raises TopologyError") {
  PhaseTopology topo;
  topo.box = {-2, -2, 2, 2};
  topo.phases = {"in", "out"};
  topo.regions.push_back({"in", false, {{0, true}}});  // wrong direction: negative area
  topo.regions.push_back({"out", true, {{0, false}}});
  std::vector<MarkerCurve> curves{make_circle(1.0, 64)};
  try {
    region_measure(topo, curves);
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::TopologyError);
  }
}

TEST_CASE("remesh at the same spacing is an identity") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 20; ++i) pts.push_back({0.1 * i, 0.0});
  MarkerCurve c = make_chain(pts);
  c.segment_mass.assign(20, 0.05);
  const MarkerCurve r = remesh(c, 0.1);
  REQUIRE(r.n_markers() == c.n_markers());
  for (int i = 0; i < c.n_markers(); ++i) CHECK(norm(r.markers[i] - c.markers[i]) < 1e-12);
  for (int s = 0; s < c.n_segments(); ++s)
    CHECK(r.segment_mass[s] == doctest::Approx(c.segment_mass[s]).epsilon(1e-12));
}

TEST_CASE("remesh conserves mass exactly and keeps endpoints") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts;
  Vec2 p{0, 0};
  pts.push_back(p);
  for (int i = 0; i < 30; ++i) {
    p += Vec2{0.05 + 0.1 * u(rng), 0.08 * (u(rng) - 0.5)};
    pts.push_back(p);
  }
  MarkerCurve c = make_chain(pts);
  for (int s = 0; s < c.n_segments(); ++s) c.segment_mass[s] = 0.01 + 0.2 * u(rng);
  const double mass0 = c.total_mass();
  const MarkerCurve r = remesh(c, 0.043);
  CHECK(std::abs(r.total_mass() - mass0) <= 1e-15 * mass0);
  CHECK(norm(r.markers.front() - c.markers.front()) == 0.0);
  CHECK(norm(r.markers.back() - c.markers.back()) == 0.0);
  // near-uniform spacing on the old polyline
  double lo = 1e300, hi = 0.0;
  for (int s = 0; s < r.n_segments(); ++s) {
    lo = std::min(lo, segment_length(r, s));
    hi = std::max(hi, segment_length(r, s));
  }
  CHECK(hi / lo < 1.3);
}

TEST_CASE("remesh of a closed curve conserves mass") {
  MarkerCurve c = make_circle(1.0, 37);
  for (int s = 0; s < c.n_segments(); ++s) c.segment_mass[s] = 0.01 * (1 + s % 5);
  const double mass0 = c.total_mass();
  const MarkerCurve r = remesh(c, 2.0 * kPi / 64.0);
  CHECK(r.closed);
  CHECK(std::abs(r.total_mass() - mass0) <= 1e-14 * mass0);
}

TEST_CASE("remesh rejects a curve shorter than 2h") {
  MarkerCurve c = make_chain({{0, 0}, {0.05, 0}, {0.1, 0}});
  try {
    remesh(c, 0.2);
    CHECK(false);
  } catch (const TrilineError& e) {
    CHECK(e.code() == Err::CurveTooShort);
  }
}

TEST_CASE("curve validation catches the named defects") {
  std::vector<std::string> errors;
  MarkerCurve c = make_chain({{0, 0}, {1, 0}});
  validate_curve(c, 1.0, errors);
  CHECK(!errors.empty());  // fewer than 3 markers

  errors.clear();
  MarkerCurve self = make_chain({{0, 0}, {1, 0}, {1, 1}, {0.5, -0.5}});
  validate_curve(self, 1.0, errors);
  CHECK(!errors.empty());  // self-intersecting

  errors.clear();
  MarkerCurve ax = make_chain({{0.5, 0}, {-0.2, 0.5}, {0.5, 1}}, GeometryMode::Axisymmetric);
  validate_curve(ax, 1.0, errors);
  CHECK(!errors.empty());  // negative r
}
