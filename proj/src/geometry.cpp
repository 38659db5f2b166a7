#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triline {

double MarkerCurve::total_mass() const {
  return std::accumulate(segment_mass.begin(), segment_mass.end(), 0.0);
}

static void check_seg(const MarkerCurve& c, int seg) {
  if (seg < 0 || seg >= c.n_segments())
    fail(Err::Invalid, "segment index out of range on curve " + c.id);
}

double segment_length(const MarkerCurve& c, int seg) {
  check_seg(c, seg);
  return norm(c.markers[c.seg_b(seg)] - c.markers[c.seg_a(seg)]);
}

double segment_measure(const MarkerCurve& c, int seg) {
  const double len = segment_length(c, seg);
  if (c.mode == GeometryMode::Planar) return len;
  const double rbar = 0.5 * (c.markers[c.seg_a(seg)].x + c.markers[c.seg_b(seg)].x);
  return 2.0 * kPi * rbar * len;
}

void segment_measure_gradient(const MarkerCurve& c, int seg, Vec2& d_a, Vec2& d_b) {
  check_seg(c, seg);
  const Vec2 a = c.markers[c.seg_a(seg)], b = c.markers[c.seg_b(seg)];
  const double len = norm(b - a);
  if (len == 0.0) fail(Err::DegenerateGeometry, "zero-length segment on curve " + c.id);
  const Vec2 u = (1.0 / len) * (a - b);  // d(len)/d(a)
  if (c.mode == GeometryMode::Planar) {
    d_a = u;
    d_b = -u;
    return;
  }
  const double rsum = a.x + b.x;
  d_a = Vec2{kPi * len, 0.0} + kPi * rsum * u;
  d_b = Vec2{kPi * len, 0.0} - kPi * rsum * u;
}

double curve_length(const MarkerCurve& c) {
  double s = 0.0;
  for (int i = 0; i < c.n_segments(); ++i) s += segment_length(c, i);
  return s;
}

double curve_measure(const MarkerCurve& c) {
  double s = 0.0;
  for (int i = 0; i < c.n_segments(); ++i) s += segment_measure(c, i);
  return s;
}

double lumped_measure(const MarkerCurve& c, int marker) {
  if (marker < 0 || marker >= c.n_markers())
    fail(Err::Invalid, "marker index out of range on curve " + c.id);
  const int n = c.n_markers();
  double m = 0.0;
  if (c.closed) {
    m += 0.5 * segment_measure(c, (marker + n - 1) % n);
    m += 0.5 * segment_measure(c, marker);
  } else {
    if (marker > 0) m += 0.5 * segment_measure(c, marker - 1);
    if (marker < c.n_segments()) m += 0.5 * segment_measure(c, marker);
  }
  return m;
}

Vec2 curvature_normal(const MarkerCurve& c, int marker) {
  if (marker < 0 || marker >= c.n_markers())
    fail(Err::Invalid, "marker index out of range on curve " + c.id);
  const int n = c.n_markers();
  Vec2 grad{0.0, 0.0};
  Vec2 da, db;
  if (c.closed || marker > 0) {
    const int seg = c.closed ? (marker + n - 1) % n : marker - 1;
    segment_measure_gradient(c, seg, da, db);
    grad += db;
  }
  if (c.closed || marker < c.n_segments()) {
    segment_measure_gradient(c, marker % n, da, db);
    grad += da;
  }
  const double w = lumped_measure(c, marker);
  if (w == 0.0) fail(Err::DegenerateGeometry, "degenerate stencil on curve " + c.id);
  return (-1.0 / w) * grad;
}

std::array<Vec2, 3> junction_conormals(const TripleJunction& j,
                                       const std::vector<MarkerCurve>& curves) {
  std::array<Vec2, 3> out;
  for (int k = 0; k < 3; ++k) {
    const CurveEnd& e = j.incident[k];
    if (e.curve < 0 || e.curve >= static_cast<int>(curves.size()))
      fail(Err::Invalid, "junction " + j.id + ": invalid incident curve");
    const MarkerCurve& c = curves[e.curve];
    if (c.closed) fail(Err::Invalid, "junction " + j.id + ": closed curve cannot attach");
    if (c.n_markers() < 2) fail(Err::DegenerateGeometry, "curve too short: " + c.id);
    const Vec2 d = e.at_start ? c.markers[0] - c.markers[1]
                              : c.markers[c.n_markers() - 1] - c.markers[c.n_markers() - 2];
    if (norm(d) == 0.0)
      fail(Err::DegenerateGeometry, "zero-length end segment on curve " + c.id);
    out[k] = normalized(d);
  }
  return out;
}

MarkerCurve remesh(const MarkerCurve& c, double target_spacing) {
  if (!(target_spacing > 0.0)) fail(Err::Invalid, "remesh: spacing must be positive");
  if (c.n_segments() < 1) fail(Err::CurveTooShort, "remesh: curve has no segments");
  const int n_old = c.n_segments();
  std::vector<double> cum(n_old + 1, 0.0);
  for (int i = 0; i < n_old; ++i) {
    const double len = segment_length(c, i);
    if (len == 0.0) fail(Err::DegenerateGeometry, "remesh: coincident markers on " + c.id);
    cum[i + 1] = cum[i] + len;
  }
  const double total = cum[n_old];
  if (total < 2.0 * target_spacing)
    fail(Err::CurveTooShort, "remesh: curve " + c.id + " shorter than 2h");

  const int min_segs = c.closed ? 3 : 2;
  const int n_new = std::max(min_segs, static_cast<int>(std::llround(total / target_spacing)));
  const int n_new_markers = c.closed ? n_new : n_new + 1;
  MarkerCurve out = c;
  out.markers.assign(n_new_markers, Vec2{});
  out.segment_mass.assign(n_new, 0.0);

  // New markers at uniform arclength, snapped to old markers when they land
  // on one (keeps "same h" remeshing an identity).
  const double snap = 1e-12 * total;
  std::vector<double> s_new(n_new + 1);
  for (int j = 0; j <= n_new; ++j) s_new[j] = total * static_cast<double>(j) / n_new;
  auto point_at = [&](double s, int hint) -> std::pair<Vec2, double> {
    int k = hint;
    while (k + 1 < n_old && cum[k + 1] < s) ++k;
    if (std::abs(cum[k] - s) <= snap) return {c.markers[c.seg_a(k)], cum[k]};
    if (std::abs(cum[k + 1] - s) <= snap) return {c.markers[c.seg_b(k)], cum[k + 1]};
    const double f = (s - cum[k]) / (cum[k + 1] - cum[k]);
    return {c.markers[c.seg_a(k)] + f * (c.markers[c.seg_b(k)] - c.markers[c.seg_a(k)]), s};
  };
  for (int j = 0; j < n_new_markers; ++j) {
    auto [p, s_eff] = point_at(s_new[j], 0);
    out.markers[j] = p;
    s_new[j] = s_eff;
  }
  out.markers.front() = c.markers.front();
  s_new.front() = 0.0;
  if (!c.closed) {
    out.markers.back() = c.markers.back();
    s_new[n_new] = total;
  } else {
    s_new[n_new] = total;
  }

  // Mass reassignment: integrate the old piecewise-constant lineal density
  // over each new arclength interval.
  for (int i = 0, j = 0; i < n_old; ++i) {
    const double s0 = cum[i], s1 = cum[i + 1];
    const double lam = c.segment_mass[i] / (s1 - s0);
    while (j < n_new && s_new[j + 1] <= s0) ++j;
    for (int jj = j; jj < n_new && s_new[jj] < s1; ++jj) {
      const double lo = std::max(s0, s_new[jj]);
      const double hi = std::min(s1, s_new[jj + 1]);
      if (hi > lo) out.segment_mass[jj] += lam * (hi - lo);
    }
  }
  return out;
}

// ---- regions ----------------------------------------------------------------

namespace {

// Counterclockwise boundary coordinate of a point on the box; -1 if interior.
double box_coordinate(const Vec2& p, const DomainBox& b, double tol) {
  const double W = b.width(), H = b.height();
  if (std::abs(p.y - b.y0) <= tol && p.x >= b.x0 - tol && p.x <= b.x1 + tol)
    return std::clamp(p.x - b.x0, 0.0, W);
  if (std::abs(p.x - b.x1) <= tol && p.y >= b.y0 - tol && p.y <= b.y1 + tol)
    return W + std::clamp(p.y - b.y0, 0.0, H);
  if (std::abs(p.y - b.y1) <= tol && p.x >= b.x0 - tol && p.x <= b.x1 + tol)
    return W + H + std::clamp(b.x1 - p.x, 0.0, W);
  if (std::abs(p.x - b.x0) <= tol && p.y >= b.y0 - tol && p.y <= b.y1 + tol)
    return 2.0 * W + H + std::clamp(b.y1 - p.y, 0.0, H);
  return -1.0;
}

}  // namespace

std::vector<Polygon> assemble_region(const PhaseTopology& topo,
                                     const std::vector<MarkerCurve>& curves,
                                     int region_index) {
  const RegionLoop& loop = topo.regions.at(region_index);
  if (loop.items.empty() && !loop.include_box)
    fail(Err::TopologyError, "region " + loop.phase + " has no boundary items");
  const DomainBox& box = topo.box;
  const double tol = 1e-9 * box.scale();
  const double perim = 2.0 * (box.width() + box.height());
  const std::array<Vec2, 4> corners = {Vec2{box.x1, box.y0}, Vec2{box.x1, box.y1},
                                       Vec2{box.x0, box.y1}, Vec2{box.x0, box.y0}};
  const std::array<double, 4> corner_s = {box.width(), box.width() + box.height(),
                                          2.0 * box.width() + box.height(), perim};

  std::vector<Polygon> polys;
  if (loop.include_box) {
    Polygon bp;
    for (const Vec2& c : corners) bp.push_back(PolyVertex{c, -1, -1});
    // corners above start at (x1,y0); rotate so the polygon starts at (x0,y0)
    std::rotate(bp.begin(), bp.begin() + 3, bp.end());
    polys.push_back(std::move(bp));
  }
  if (loop.items.empty()) return polys;

  Polygon poly;
  auto append_curve = [&](const LoopItem& it) {
    const MarkerCurve& c = curves.at(it.curve);
    const int n = c.n_markers();
    for (int i = 0; i < n; ++i) {
      const int m = it.reversed ? n - 1 - i : i;
      poly.push_back(PolyVertex{c.markers[m], it.curve, m});
    }
  };
  auto item_first = [&](const LoopItem& it) {
    const MarkerCurve& c = curves.at(it.curve);
    return it.reversed ? c.markers.back() : c.markers.front();
  };
  auto item_last = [&](const LoopItem& it) {
    const MarkerCurve& c = curves.at(it.curve);
    return it.reversed ? c.markers.front() : c.markers.back();
  };

  const int n_items = static_cast<int>(loop.items.size());
  for (int k = 0; k < n_items; ++k) {
    const LoopItem& it = loop.items[k];
    if (curves.at(it.curve).closed) {
      if (n_items != 1)
        fail(Err::TopologyError,
             "region " + loop.phase + ": a closed curve must be the only boundary item");
      append_curve(it);
      polys.push_back(std::move(poly));
      return polys;
    }
    append_curve(it);
    const Vec2 from = item_last(it);
    const Vec2 to = item_first(loop.items[(k + 1) % n_items]);
    if (norm(to - from) <= tol) continue;  // shared junction point
    if (loop.include_box)
      fail(Err::TopologyError, "region " + loop.phase +
                                   ": island chain must close on itself when include_box is set");
    const double sa = box_coordinate(from, box, tol);
    const double sb = box_coordinate(to, box, tol);
    if (sa < 0.0 || sb < 0.0)
      fail(Err::TopologyError, "region " + loop.phase +
                                   ": consecutive boundary curves neither touch nor lie on the box");
    // Walk counterclockwise from sa to sb inserting the box corners passed.
    double span = sb - sa;
    if (span <= 0.0) span += perim;
    std::vector<std::pair<double, int>> passed;
    for (int ci = 0; ci < 4; ++ci) {
      double d = corner_s[ci] - sa;
      if (d <= 0.0) d += perim;
      if (d < span - tol) passed.emplace_back(d, ci);
    }
    std::sort(passed.begin(), passed.end());
    for (const auto& [d, ci] : passed) poly.push_back(PolyVertex{corners[ci], -1, -1});
  }
  polys.push_back(std::move(poly));
  return polys;
}

double polygon_measure(const Polygon& poly, GeometryMode mode) {
  const int n = static_cast<int>(poly.size());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i].p;
    const Vec2& b = poly[(i + 1) % n].p;
    if (mode == GeometryMode::Planar) {
      acc += 0.5 * cross(a, b);
    } else {
      // volume of revolution about r = 0: integral of pi r^2 dz
      acc += kPi * (b.y - a.y) * (a.x * a.x + a.x * b.x + b.x * b.x) / 3.0;
    }
  }
  return acc;
}

void accumulate_polygon_measure_gradient(const Polygon& poly, GeometryMode mode,
                                         double scale,
                                         std::vector<std::vector<Vec2>>& grads) {
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    if (poly[i].curve < 0) continue;
    const Vec2& prev = poly[(i + n - 1) % n].p;
    const Vec2& next = poly[(i + 1) % n].p;
    Vec2 g;
    if (mode == GeometryMode::Planar) {
      g = Vec2{0.5 * (next.y - prev.y), 0.5 * (prev.x - next.x)};
    } else {
      const Vec2& p = poly[i].p;
      g.x = kPi / 3.0 *
            ((p.y - prev.y) * (prev.x + 2.0 * p.x) + (next.y - p.y) * (2.0 * p.x + next.x));
      g.y = kPi / 3.0 * ((prev.x * prev.x + prev.x * p.x + p.x * p.x) -
                         (p.x * p.x + p.x * next.x + next.x * next.x));
    }
    grads[poly[i].curve][poly[i].marker] += scale * g;
  }
}

double domain_measure(const DomainBox& box, GeometryMode mode) {
  if (mode == GeometryMode::Planar) return box.width() * box.height();
  return kPi * (box.x1 * box.x1 - box.x0 * box.x0) * box.height();
}

std::vector<double> region_measure(const PhaseTopology& topo,
                                   const std::vector<MarkerCurve>& curves) {
  const GeometryMode mode = curves.empty() ? GeometryMode::Planar : curves[0].mode;
  std::vector<double> out;
  out.reserve(topo.regions.size());
  double sum = 0.0;
  for (int r = 0; r < static_cast<int>(topo.regions.size()); ++r) {
    double m = 0.0;
    for (const Polygon& poly : assemble_region(topo, curves, r))
      m += polygon_measure(poly, mode);
    if (!(m > 0.0))
      fail(Err::TopologyError,
           "region " + topo.regions[r].phase + " has nonpositive measure (orientation?)");
    out.push_back(m);
    sum += m;
  }
  const double dom = domain_measure(topo.box, mode);
  if (std::abs(sum - dom) > 1e-12 * dom)
    fail(Err::TopologyError, "region measures do not partition the domain: sum " +
                                 std::to_string(sum) + " vs " + std::to_string(dom));
  return out;
}

// ---- validation --------------------------------------------------------------

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return cross(q - p, r - p);
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace

void validate_curve(const MarkerCurve& c, double length_scale,
                    std::vector<std::string>& errors) {
  const std::string tag = "curve " + c.id + ": ";
  if (c.n_markers() < 3) {
    errors.push_back(tag + "fewer than 3 markers");
    return;
  }
  if (static_cast<int>(c.segment_mass.size()) != c.n_segments())
    errors.push_back(tag + "segment_mass size mismatch");
  for (double m : c.segment_mass)
    if (m < 0.0) {
      errors.push_back(tag + "negative segment mass");
      break;
    }
  const double tol = 1e-12 * length_scale;
  for (int i = 0; i < c.n_segments(); ++i)
    if (norm(c.markers[c.seg_b(i)] - c.markers[c.seg_a(i)]) <= tol) {
      errors.push_back(tag + "coincident consecutive markers at index " + std::to_string(i));
      break;
    }
  if (c.mode == GeometryMode::Axisymmetric)
    for (const Vec2& p : c.markers)
      if (p.x < -tol) {
        errors.push_back(tag + "negative r coordinate");
        break;
      }
  // simple polyline: no intersection between non-adjacent segments
  const int ns = c.n_segments();
  for (int i = 0; i < ns; ++i)
    for (int j = i + 2; j < ns; ++j) {
      if (c.closed && i == (j + 1) % ns) continue;  // wrap-adjacent
      if (!c.closed && i == 0 && j == ns - 1 &&
          norm(c.markers.front() - c.markers.back()) <= tol)
        continue;  // open curve whose ends coincide
      if (segments_intersect(c.markers[c.seg_a(i)], c.markers[c.seg_b(i)],
                             c.markers[c.seg_a(j)], c.markers[c.seg_b(j)])) {
        errors.push_back(tag + "self-intersecting polyline (segments " + std::to_string(i) +
                         ", " + std::to_string(j) + ")");
        return;
      }
    }
}

void validate_junction(const TripleJunction& j, const std::vector<MarkerCurve>& curves,
                       double length_scale, double min_angle_deg,
                       std::vector<std::string>& errors) {
  const std::string tag = "junction " + j.id + ": ";
  for (const CurveEnd& e : j.incident) {
    if (e.curve < 0 || e.curve >= static_cast<int>(curves.size())) {
      errors.push_back(tag + "incident curve index out of range");
      return;
    }
    const MarkerCurve& c = curves[e.curve];
    if (c.closed) {
      errors.push_back(tag + "closed curve " + c.id + " cannot attach to a junction");
      return;
    }
    const Vec2 p = e.at_start ? c.markers.front() : c.markers.back();
    if (norm(p - j.position) > 1e-12 * length_scale)
      errors.push_back(tag + "endpoint of curve " + c.id + " not attached");
  }
  try {
    const auto N = junction_conormals(j, curves);
    const double min_rad = min_angle_deg * kPi / 180.0;
    double max_cross = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double ang = std::acos(std::clamp(dot(N[a], N[b]), -1.0, 1.0));
        max_cross = std::max(max_cross, std::abs(cross(N[a], N[b])));
        if (ang < min_rad) {
          errors.push_back(tag + "two interfaces meet at less than " +
                           std::to_string(min_angle_deg) + " degrees");
          return;
        }
      }
    if (max_cross < std::sin(min_rad))
      errors.push_back(tag + "conormals do not span two dimensions");
  } catch (const TrilineError& e) {
    errors.push_back(tag + e.what());
  }
}

}  // namespace triline
