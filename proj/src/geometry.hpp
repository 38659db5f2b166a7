#pragma once

// Discrete interface geometry: oriented marker chains carrying per-segment
// surface mass, triple junctions, and phase regions, in planar or
// axisymmetric mode.
//
// Conventions (fixed once so results are reproducible):
//  - the unit normal of a segment is the left normal of the traversal
//    direction and points from side_minus into side_plus;
//  - jump brackets are [[f]] = f(side_plus) - f(side_minus);
//  - in axisymmetric mode coordinates are (r, z) with r >= 0, segment
//    measure is the lateral frustum area 2*pi*rbar*len, and region measure
//    is the revolved volume.

#include <array>
#include <string>
#include <vector>

#include "common.hpp"

namespace triline {

enum class GeometryMode { Planar, Axisymmetric };

enum class EndpointKind { Free, OuterBoundary, Junction };

struct Endpoint {
  EndpointKind kind = EndpointKind::Free;
  int junction = -1;  // valid when kind == Junction
};

enum class CurveConstraint { Free, Horizontal, Fixed };

struct MarkerCurve {
  std::string id;
  std::vector<Vec2> markers;          // (x,y) or (r,z); closed curves omit the repeat
  std::vector<double> segment_mass;   // one per segment, >= 0
  std::string side_minus, side_plus;  // phase labels
  bool closed = false;
  Endpoint end_start, end_end;        // open curves only
  GeometryMode mode = GeometryMode::Planar;
  CurveConstraint constraint = CurveConstraint::Free;

  int n_markers() const { return static_cast<int>(markers.size()); }
  int n_segments() const {
    return closed ? static_cast<int>(markers.size()) : static_cast<int>(markers.size()) - 1;
  }
  // endpoints of a segment, wrapping on closed curves
  int seg_a(int seg) const { return seg; }
  int seg_b(int seg) const { return closed ? (seg + 1) % n_markers() : seg + 1; }
  bool marker_at_junction(int marker) const {
    if (closed) return false;
    if (marker == 0 && end_start.kind == EndpointKind::Junction) return true;
    return marker == n_markers() - 1 && end_end.kind == EndpointKind::Junction;
  }
  double total_mass() const;
};

struct CurveEnd {
  int curve = -1;
  bool at_start = true;  // which end of the curve is attached
};

// Triple-junction transfer closure (owned here so the junction is
// self-describing; the solve itself lives in the exchange module).
struct JunctionClosure {
  enum class Mode { Linear, Ideal, Off };
  Mode mode = Mode::Off;
  double transfer_coefficient = 0.0;  // L > 0 in Linear mode
  double newton_tol = 1e-12;
  int max_iter = 50;
};

struct TripleJunction {
  std::string id;
  Vec2 position;
  std::array<CurveEnd, 3> incident;
  double line_tension = 0.0;  // gamma^C
  double mobility = 0.0;      // m_C >= 0
  JunctionClosure closure;
  bool pinned_horizontal = false;  // junction slides along y = const only
};

struct DomainBox {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double scale() const { return std::max(width(), height()); }
};

struct LoopItem {
  int curve = -1;
  bool reversed = false;
};

// Oriented boundary of one phase region, as a chain of curves traversed with
// the region on the left. Consecutive items either share an endpoint (a
// junction) or both endpoints lie on the outer box, in which case the gap is
// closed by walking the box boundary counterclockwise. A region that
// encloses the full box minus interior islands sets include_box and lists
// the islands' boundaries clockwise (closed curves, or chains closing on
// themselves through junctions).
struct RegionLoop {
  std::string phase;
  bool include_box = false;
  std::vector<LoopItem> items;
};

struct PhaseTopology {
  std::vector<std::string> phases;
  std::vector<RegionLoop> regions;  // one loop per phase
  DomainBox box;
};

// ---- segment-level measures ------------------------------------------------

double segment_length(const MarkerCurve& c, int seg);
// Planar: length (per unit depth). Axisymmetric: 2*pi*rbar*length.
double segment_measure(const MarkerCurve& c, int seg);
// d(measure)/d(first endpoint), d(measure)/d(second endpoint).
void segment_measure_gradient(const MarkerCurve& c, int seg, Vec2& d_a, Vec2& d_b);
double curve_length(const MarkerCurve& c);
double curve_measure(const MarkerCurve& c);
// Half-sum of the measures of the segments adjacent to a marker.
double lumped_measure(const MarkerCurve& c, int marker);

// ---- operations -------------------------------------------------------------

// Variational curvature vector: minus the gradient of the discrete interface
// measure with respect to the marker position, divided by the lumped measure.
// Orientation independent; points toward the center for a circle. Open-curve
// endpoints use the one-sided stencil.
Vec2 curvature_normal(const MarkerCurve& c, int marker);

// Unit tangent at the attached end of each incident curve, pointing out of
// the curve. Order follows junction.incident.
std::array<Vec2, 3> junction_conormals(const TripleJunction& j,
                                       const std::vector<MarkerCurve>& curves);

// Marker spacing redistributed to near-uniform arclength along the original
// polyline; per-segment mass reassigned by overlapped length so the total is
// conserved exactly; endpoints (closed curves: the first marker) unchanged.
MarkerCurve remesh(const MarkerCurve& c, double target_spacing);

// ---- regions ----------------------------------------------------------------

struct PolyVertex {
  Vec2 p;
  int curve = -1;  // -1: fixed box corner
  int marker = -1;
};

using Polygon = std::vector<PolyVertex>;

// Assembled boundary polygons of one region: the curve chain (plus box
// corners) and, when include_box is set, the box itself as a separate
// positively oriented polygon.
std::vector<Polygon> assemble_region(const PhaseTopology& topo,
                                     const std::vector<MarkerCurve>& curves,
                                     int region_index);

double polygon_measure(const Polygon& poly, GeometryMode mode);

// Adds scale * d(measure)/d(vertex) into grads[curve][marker] for every
// polygon vertex that is a curve marker.
void accumulate_polygon_measure_gradient(const Polygon& poly, GeometryMode mode,
                                         double scale,
                                         std::vector<std::vector<Vec2>>& grads);

double domain_measure(const DomainBox& box, GeometryMode mode);

// Per-phase measures, in topology order. Checks positivity and that the sum
// matches the domain measure to 1e-12 relative; violations -> TopologyError.
std::vector<double> region_measure(const PhaseTopology& topo,
                                   const std::vector<MarkerCurve>& curves);

// ---- validation ---------------------------------------------------------------

// Basic curve invariants: >= 3 markers, consecutive markers distinct,
// nonnegative masses, r >= 0 in axisymmetric mode, simple polyline.
void validate_curve(const MarkerCurve& c, double length_scale,
                    std::vector<std::string>& errors);

// Junction attachment (coincidence to 1e-12 of the scale) and angle
// non-degeneracy (pairwise conormal angles >= min_angle_deg).
void validate_junction(const TripleJunction& j, const std::vector<MarkerCurve>& curves,
                       double length_scale, double min_angle_deg,
                       std::vector<std::string>& errors);

}  // namespace triline
