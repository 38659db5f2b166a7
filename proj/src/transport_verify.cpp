#include "transport_verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

namespace triline::transport {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Vec3 {
  double x = 0, y = 0, z = 0;
};
Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

struct Mat3 {
  double m[3][3] = {};
  double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
  Vec3 apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
};

Mat3 identity_times(double s) {
  Mat3 g;
  g.m[0][0] = g.m[1][1] = g.m[2][2] = s;
  return g;
}

using ScalarField = std::function<double(double, const Vec3&)>;
using VectorField = std::function<Vec3(double, const Vec3&)>;
using MatrixField = std::function<Mat3(double, const Vec3&)>;
using Param2 = std::function<Vec3(double, double, double)>;
using Param1 = std::function<Vec3(double, double)>;

double midpoint(int n, const std::function<double(double)>& f) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += f((i + 0.5) / n);
  return acc / n;
}

// ---- surface cases ---------------------------------------------------------------

struct SurfacePatch {
  Param2 X, Xt, Xa, Xb;
  std::function<double(double, double, double)> kappa;
  ScalarField phi, phi_t;
  VectorField grad_phi;
  VectorField v;
  MatrixField grad_v;
  bool boundary_a0 = false, boundary_a1 = false;
  VectorField n_V;  // outer normal of the control volume on the boundary
  int nb_mult = 1;  // extra azimuthal resolution (piecewise-smooth sectors)
  std::function<void(double, double)> guard;  // throws IllPosedCase
};

struct SurfaceEval {
  double lhs = 0.0;
  std::array<double, 3> rhs{};
  double boundary_identity = kNan;
};

double patch_integral(int na, int nb, const std::function<double(double, double)>& f) {
  double acc = 0.0;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) acc += f((i + 0.5) / na, (j + 0.5) / nb);
  return acc / (na * nb);
}

SurfaceEval evaluate_surface_patch(const SurfacePatch& p, double t, double dt, int n) {
  if (p.guard) p.guard(t, dt);
  const int na = n, nb = n * p.nb_mult;

  auto area_weighted_phi = [&](double tau) {
    return patch_integral(na, nb, [&](double a, double b) {
      const Vec3 x = p.X(tau, a, b);
      const Vec3 cr = cross(p.Xa(tau, a, b), p.Xb(tau, a, b));
      return p.phi(tau, x) * norm(cr);
    });
  };
  SurfaceEval out;
  out.lhs = (area_weighted_phi(t + dt) - area_weighted_phi(t - dt)) / (2.0 * dt);

  double basic = 0.0, lagr = 0.0;
  basic = patch_integral(na, nb, [&](double a, double b) {
    const Vec3 x = p.X(t, a, b);
    const Vec3 cr = cross(p.Xa(t, a, b), p.Xb(t, a, b));
    const double J = norm(cr);
    const Vec3 nrm = (1.0 / J) * cr;
    const double V = dot(p.Xt(t, a, b), nrm);
    const double dts_phi = p.phi_t(t, x) + V * dot(nrm, p.grad_phi(t, x));
    return (dts_phi - p.phi(t, x) * p.kappa(t, a, b) * V) * J;
  });
  lagr = patch_integral(na, nb, [&](double a, double b) {
    const Vec3 x = p.X(t, a, b);
    const Vec3 cr = cross(p.Xa(t, a, b), p.Xb(t, a, b));
    const double J = norm(cr);
    const Vec3 nrm = (1.0 / J) * cr;
    const double Dphi = p.phi_t(t, x) + dot(p.v(t, x), p.grad_phi(t, x));
    const Mat3 G = p.grad_v(t, x);
    const double divS = G.trace() - dot(nrm, G.apply(nrm));
    return (Dphi + p.phi(t, x) * divS) * J;
  });

  double b_basic = 0.0, b_lagr = 0.0, b_nb = 0.0, identity = kNan;
  if (p.boundary_a0 || p.boundary_a1) {
    identity = 0.0;
    for (int edge = 0; edge < 2; ++edge) {
      if (edge == 0 && !p.boundary_a0) continue;
      if (edge == 1 && !p.boundary_a1) continue;
      const double ae = edge == 0 ? 0.0 : 1.0;
      const double sign_out = edge == 0 ? -1.0 : 1.0;
      const int m = nb;
      for (int j = 0; j < m; ++j) {
        const double b = (j + 0.5) / m;
        const Vec3 x = p.X(t, ae, b);
        const Vec3 xa = p.Xa(t, ae, b), xb = p.Xb(t, ae, b);
        const Vec3 cr = cross(xa, xb);
        const Vec3 nrm = normalized(cr);
        const Vec3 tb = normalized(xb);
        Vec3 w = sign_out * xa;
        Vec3 N = w - dot(w, tb) * tb;
        N = normalized(N);
        const double dl = norm(xb) / m;
        const double Vb = dot(p.Xt(t, ae, b), N);
        const double phi = p.phi(t, x);
        b_basic += phi * Vb * dl;
        b_lagr += phi * (Vb - dot(p.v(t, x), N)) * dl;
        const Vec3 nV = p.n_V(t, x);
        const double cosg = dot(nrm, nV);
        const double root = std::sqrt(std::max(0.0, 1.0 - cosg * cosg));
        if (root < 1e-8)
          fail(Err::IllPosedCase, "interface meets the control boundary tangentially");
        b_nb += -phi * dot(p.v(t, x), nV) / root * dl;
        const double V = dot(p.Xt(t, ae, b), nrm);
        identity = std::max(identity, std::abs(Vb + V * cosg / root));
      }
    }
  }
  out.rhs[0] = basic + b_basic;
  out.rhs[1] = lagr + b_lagr;
  out.rhs[2] = lagr + b_nb;
  out.boundary_identity = identity;
  return out;
}

// ---- volume cases ----------------------------------------------------------------

// Fixed control ball of radius R_V about the origin containing a moving
// sphere (center c(t), radius R(t)); the two phase integrals are fitted in
// spherical coordinates about c(t).
struct BallVolumeCase {
  std::function<double(double)> R, Rdot;
  std::function<Vec3(double)> c, cdot;
  double R_V = 3.0;
  ScalarField phi_in, phi_in_t, phi_out, phi_out_t;
};

void ball_guard(const BallVolumeCase& bc, double t, double dt) {
  for (double tau : {t - 2.0 * dt, t, t + 2.0 * dt}) {
    const double clearance = bc.R_V - (bc.R(tau) + norm(bc.c(tau)));
    if (!(bc.R(tau) > 0.0) || clearance < 0.05 * bc.R_V)
      fail(Err::IllPosedCase,
           "moving interface too close to the control boundary (clearance " +
               std::to_string(clearance) + ")");
  }
}

// integral over the control ball of the piecewise field
double ball_I_V(const BallVolumeCase& bc, double t, int n) {
  const Vec3 c = bc.c(t);
  const double R = bc.R(t);
  double acc = 0.0;
  const int nt = n, np = 2 * n, nr = n;
  for (int i = 0; i < nt; ++i) {
    const double th = kPi * (i + 0.5) / nt;
    for (int j = 0; j < np; ++j) {
      const double ph = 2.0 * kPi * (j + 0.5) / np;
      const Vec3 w{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      const double cw = dot(c, w);
      const double D = -cw + std::sqrt(cw * cw + bc.R_V * bc.R_V - dot(c, c));
      double inner = 0.0;
      for (int k = 0; k < nr; ++k) {
        const double r = R * (k + 0.5) / nr;
        inner += bc.phi_in(t, c + r * w) * r * r * (R / nr);
      }
      for (int k = 0; k < nr; ++k) {
        const double r = R + (D - R) * (k + 0.5) / nr;
        inner += bc.phi_out(t, c + r * w) * r * r * ((D - R) / nr);
      }
      acc += inner * std::sin(th) * (kPi / nt) * (2.0 * kPi / np);
    }
  }
  return acc;
}

double ball_I_dt(const BallVolumeCase& bc, double t, int n) {
  BallVolumeCase tmp = bc;
  tmp.phi_in = bc.phi_in_t;
  tmp.phi_out = bc.phi_out_t;
  return ball_I_V(tmp, t, n);
}

double ball_I_jump(const BallVolumeCase& bc, double t, int n) {
  const Vec3 c = bc.c(t);
  const Vec3 cd = bc.cdot(t);
  const double R = bc.R(t), Rd = bc.Rdot(t);
  double acc = 0.0;
  const int nt = n, np = 2 * n;
  for (int i = 0; i < nt; ++i) {
    const double th = kPi * (i + 0.5) / nt;
    for (int j = 0; j < np; ++j) {
      const double ph = 2.0 * kPi * (j + 0.5) / np;
      const Vec3 w{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      const Vec3 x = c + R * w;
      const double jump = bc.phi_out(t, x) - bc.phi_in(t, x);  // n points outward
      const double V = Rd + dot(cd, w);
      acc += jump * V * R * R * std::sin(th) * (kPi / nt) * (2.0 * kPi / np);
    }
  }
  return acc;
}

struct VolumeEval {
  double lhs = 0.0, rhs = 0.0;
};

VolumeEval evaluate_ball_case(const BallVolumeCase& bc, double t, double dt, int n) {
  ball_guard(bc, t, dt);
  VolumeEval out;
  out.lhs = (ball_I_V(bc, t + dt, n) - ball_I_V(bc, t - dt, n)) / (2.0 * dt);
  out.rhs = ball_I_dt(bc, t, n) - ball_I_jump(bc, t, n);
  return out;
}

// ---- line cases ------------------------------------------------------------------

struct LineCase {
  Param1 Y, Ys, Yt, Yts;
  ScalarField phi, phi_t;
  VectorField grad_phi;
  bool closed = false;
  bool material_velocity = true;  // v = Yt along the curve; otherwise v = 0
};

struct LineEval {
  double lhs = 0.0, rhs = 0.0;
};

LineEval evaluate_line_case(const LineCase& lc, double t, double dt, int n) {
  auto I = [&](double tau) {
    return midpoint(n, [&](double s) {
      return lc.phi(tau, lc.Y(tau, s)) * norm(lc.Ys(tau, s));
    });
  };
  LineEval out;
  out.lhs = (I(t + dt) - I(t - dt)) / (2.0 * dt);

  double interior = midpoint(n, [&](double s) {
    const Vec3 y = lc.Y(t, s);
    const Vec3 ys = lc.Ys(t, s);
    const double J = norm(ys);
    const Vec3 tau_hat = (1.0 / J) * ys;
    const Vec3 v = lc.material_velocity ? lc.Yt(t, s) : Vec3{};
    const double Dphi = lc.phi_t(t, y) + dot(v, lc.grad_phi(t, y));
    const double divv = lc.material_velocity ? dot(lc.Yts(t, s), tau_hat) / J : 0.0;
    return (Dphi + lc.phi(t, y) * divv) * J;
  });
  double endpoints = 0.0;
  if (!lc.closed) {
    for (int e = 0; e < 2; ++e) {
      const double s = e == 0 ? 0.0 : 1.0;
      const double sgn = e == 0 ? -1.0 : 1.0;
      const Vec3 nu = sgn * normalized(lc.Ys(t, s));
      const Vec3 v = lc.material_velocity ? lc.Yt(t, s) : Vec3{};
      const double Vb = dot(lc.Yt(t, s), nu);
      endpoints += lc.phi(t, lc.Y(t, s)) * (Vb - dot(v, nu));
    }
  }
  out.rhs = interior + endpoints;
  return out;
}

// ---- catalog ---------------------------------------------------------------------

struct CatalogEntry {
  std::string name;
  CaseKind kind;
  bool is_static = false;
  double t0 = 0.0;
  double dt0 = 0.05;
  int n0 = 8;
  std::function<double(double)> reference;  // nullptr when none
  std::function<SurfacePatch()> surface;
  std::function<BallVolumeCase()> ball;
  std::function<LineCase()> line;
};

SurfacePatch sphere_patch(std::function<double(double)> R, std::function<double(double)> Rdot,
                          ScalarField phi, ScalarField phi_t, VectorField grad_phi,
                          VectorField v, MatrixField grad_v) {
  SurfacePatch p;
  p.X = [R](double t, double a, double b) {
    const double th = kPi * a, ph = 2.0 * kPi * b;
    return R(t) * Vec3{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  };
  p.Xt = [R, Rdot](double t, double a, double b) {
    const double th = kPi * a, ph = 2.0 * kPi * b;
    (void)R;
    return Rdot(t) * Vec3{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  };
  p.Xa = [R](double t, double a, double b) {
    const double th = kPi * a, ph = 2.0 * kPi * b;
    return (kPi * R(t)) * Vec3{std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
  };
  p.Xb = [R](double t, double a, double b) {
    const double th = kPi * a, ph = 2.0 * kPi * b;
    return (2.0 * kPi * R(t)) * Vec3{-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0};
  };
  p.kappa = [R](double t, double, double) { return -2.0 / R(t); };  // outward normal
  p.phi = std::move(phi);
  p.phi_t = std::move(phi_t);
  p.grad_phi = std::move(grad_phi);
  p.v = std::move(v);
  p.grad_v = std::move(grad_v);
  return p;
}

ScalarField const_field(double value) {
  return [value](double, const Vec3&) { return value; };
}
VectorField zero_vector_field() {
  return [](double, const Vec3&) { return Vec3{}; };
}

// Tilted plane translating through the unit-ish box [-1,1]^3.
struct PlaneBox {
  Vec3 n = normalized({0.3, -0.2, 1.0});
  Vec3 u{0.05, 0.12, 0.35};  // rigid translation velocity
  Vec3 p0{0.07, -0.04, 0.11};

  struct Poly {
    std::vector<Vec3> v, vdot;
    std::vector<int> face;  // box face of edge (v[k], v[k+1]): 0..5 (+x,-x,+y,-y,+z,-z)
    Vec3 c, cdot;
  };

  Poly polygon(double t) const {
    // 12 box edges: origin corner + axis, length 2
    std::vector<std::pair<Vec3, Vec3>> edges;
    for (int axis = 0; axis < 3; ++axis)
      for (int s1 = -1; s1 <= 1; s1 += 2)
        for (int s2 = -1; s2 <= 1; s2 += 2) {
          Vec3 o{}, d{};
          double* oc = &o.x;
          double* dc = &d.x;
          dc[axis] = 1.0;
          oc[(axis + 1) % 3] = s1;
          oc[(axis + 2) % 3] = s2;
          oc[axis] = -1.0;
          edges.emplace_back(o, d);
        }
    const Vec3 pt = p0 + t * u;
    struct Tagged {
      Vec3 x, xdot;
      int tag;
      double ang;
    };
    std::vector<Tagged> verts;
    for (size_t e = 0; e < edges.size(); ++e) {
      const auto& [o, d] = edges[e];
      const double nd = dot(n, d);
      if (std::abs(nd) < 1e-12) continue;
      const double s = dot(n, pt - o) / nd;
      if (s < 0.0 || s > 2.0) continue;
      Tagged tv;
      tv.x = o + s * d;
      tv.xdot = (dot(n, u) / nd) * d;
      tv.tag = static_cast<int>(e);
      verts.push_back(tv);
    }
    if (verts.size() < 3) fail(Err::IllPosedCase, "plane does not cut the box");
    // order by angle in the plane, starting from the smallest edge tag
    Vec3 e1 = normalized(cross(n, Vec3{0, 0, 1}));
    if (norm(cross(n, Vec3{0, 0, 1})) < 1e-6) e1 = normalized(cross(n, Vec3{0, 1, 0}));
    const Vec3 e2 = cross(n, e1);
    Vec3 mean{};
    for (const auto& tv : verts) mean = mean + (1.0 / verts.size()) * tv.x;
    for (auto& tv : verts)
      tv.ang = std::atan2(dot(tv.x - mean, e2), dot(tv.x - mean, e1));
    std::sort(verts.begin(), verts.end(),
              [](const Tagged& a, const Tagged& b) { return a.ang < b.ang; });
    size_t start = 0;
    for (size_t i = 1; i < verts.size(); ++i)
      if (verts[i].tag < verts[start].tag) start = i;
    std::rotate(verts.begin(), verts.begin() + start, verts.end());

    Poly poly;
    for (const auto& tv : verts) {
      poly.v.push_back(tv.x);
      poly.vdot.push_back(tv.xdot);
    }
    const size_t M = poly.v.size();
    poly.c = Vec3{};
    poly.cdot = Vec3{};
    for (size_t i = 0; i < M; ++i) {
      poly.c = poly.c + (1.0 / M) * poly.v[i];
      poly.cdot = poly.cdot + (1.0 / M) * poly.vdot[i];
    }
    for (size_t i = 0; i < M; ++i) {
      const Vec3& a = poly.v[i];
      const Vec3& b = poly.v[(i + 1) % M];
      int face = -1;
      for (int axis = 0; axis < 3; ++axis) {
        const double ca = axis == 0 ? a.x : (axis == 1 ? a.y : a.z);
        const double cb = axis == 0 ? b.x : (axis == 1 ? b.y : b.z);
        for (int sgn = -1; sgn <= 1; sgn += 2)
          if (std::abs(ca - sgn) < 1e-9 && std::abs(cb - sgn) < 1e-9)
            face = 2 * axis + (sgn > 0 ? 0 : 1);
      }
      if (face < 0) fail(Err::Internal, "polygon edge not on a box face");
      poly.face.push_back(face);
    }
    return poly;
  }

  static Vec3 face_normal(int face) {
    const int axis = face / 2;
    const double sgn = face % 2 == 0 ? 1.0 : -1.0;
    Vec3 n{};
    (&n.x)[axis] = sgn;
    return n;
  }
};

SurfacePatch plane_box_patch() {
  auto pb = std::make_shared<PlaneBox>();
  const int M = static_cast<int>(pb->polygon(0.5).v.size());
  auto sector = [pb, M](double t, double b, Vec3& P, Vec3& Pdot, Vec3& dPdb, int& face) {
    const PlaneBox::Poly poly = pb->polygon(t);
    const int k = std::min(M - 1, static_cast<int>(b * M));
    const double beta = b * M - k;
    const Vec3& v0 = poly.v[k];
    const Vec3& v1 = poly.v[(k + 1) % M];
    P = v0 + beta * (v1 - v0);
    Pdot = poly.vdot[k] + beta * (poly.vdot[(k + 1) % M] - poly.vdot[k]);
    dPdb = static_cast<double>(M) * (v1 - v0);
    face = poly.face[k];
  };
  SurfacePatch p;
  p.X = [pb, sector](double t, double a, double b) {
    Vec3 P, Pd, dPdb;
    int face;
    sector(t, b, P, Pd, dPdb, face);
    const PlaneBox::Poly poly = pb->polygon(t);
    return poly.c + a * (P - poly.c);
  };
  p.Xt = [pb, sector](double t, double a, double b) {
    Vec3 P, Pd, dPdb;
    int face;
    sector(t, b, P, Pd, dPdb, face);
    const PlaneBox::Poly poly = pb->polygon(t);
    return poly.cdot + a * (Pd - poly.cdot);
  };
  p.Xa = [pb, sector](double t, double, double b) {
    Vec3 P, Pd, dPdb;
    int face;
    sector(t, b, P, Pd, dPdb, face);
    const PlaneBox::Poly poly = pb->polygon(t);
    return P - poly.c;
  };
  p.Xb = [sector](double t, double a, double b) {
    Vec3 P, Pd, dPdb;
    int face;
    sector(t, b, P, Pd, dPdb, face);
    return a * dPdb;
  };
  p.kappa = [](double, double, double) { return 0.0; };
  p.phi = [](double t, const Vec3& x) {
    return (1.0 + 0.5 * x.x + 0.3 * x.y * x.y + 0.2 * x.z) * (1.0 + 0.1 * std::sin(t));
  };
  p.phi_t = [](double t, const Vec3& x) {
    return (1.0 + 0.5 * x.x + 0.3 * x.y * x.y + 0.2 * x.z) * 0.1 * std::cos(t);
  };
  p.grad_phi = [](double t, const Vec3& x) {
    const double f = 1.0 + 0.1 * std::sin(t);
    return Vec3{0.5 * f, 0.6 * x.y * f, 0.2 * f};
  };
  p.v = [pb](double, const Vec3&) { return pb->u; };
  p.grad_v = [](double, const Vec3&) { return Mat3{}; };
  p.boundary_a1 = true;
  p.n_V = [](double, const Vec3& x) {
    // identify the face from the point itself (robust at quadrature nodes)
    double best = -1.0;
    int face = 0;
    const double c[3] = {x.x, x.y, x.z};
    for (int axis = 0; axis < 3; ++axis)
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        const double score = -std::abs(c[axis] - sgn);
        if (score > best) {
          best = score;
          face = 2 * axis + (sgn > 0 ? 0 : 1);
        }
      }
    return PlaneBox::face_normal(face);
  };
  p.nb_mult = M;
  p.guard = [pb, M](double t, double dt) {
    for (double tau : {t - dt, t, t + dt})
      if (static_cast<int>(pb->polygon(tau).v.size()) != M)
        fail(Err::IllPosedCase, "box polygon changes combinatorics over the FD window");
  };
  return p;
}

// Expanding sphere cut by the fixed half-space {z <= c}.
SurfacePatch cap_patch() {
  const double c = 0.6;
  auto R = [](double t) { return 1.2 + 0.2 * t; };
  auto Rdot = [](double) { return 0.2; };
  auto theta_b = [R, c](double t) { return std::acos(c / R(t)); };
  auto theta_b_dot = [R, Rdot, c, theta_b](double t) {
    return c * Rdot(t) / (R(t) * R(t) * std::sin(theta_b(t)));
  };
  SurfacePatch p;
  auto angles = [theta_b](double t, double a) {
    const double tb = theta_b(t);
    return tb + a * (kPi - tb);
  };
  p.X = [R, angles](double t, double a, double b) {
    const double th = angles(t, a), ph = 2.0 * kPi * b;
    return R(t) * Vec3{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  };
  p.Xt = [R, Rdot, angles, theta_b_dot](double t, double a, double b) {
    const double th = angles(t, a), ph = 2.0 * kPi * b;
    const Vec3 rhat{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    const Vec3 that{std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
    const double th_t = theta_b_dot(t) * (1.0 - a);
    return Rdot(t) * rhat + (R(t) * th_t) * that;
  };
  p.Xa = [R, angles, theta_b](double t, double a, double b) {
    const double th = angles(t, a), ph = 2.0 * kPi * b;
    const Vec3 that{std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
    return (R(t) * (kPi - theta_b(t))) * that;
  };
  p.Xb = [R, angles](double t, double a, double b) {
    const double th = angles(t, a), ph = 2.0 * kPi * b;
    return (2.0 * kPi * R(t) * std::sin(th)) * Vec3{-std::sin(ph), std::cos(ph), 0.0};
  };
  p.kappa = [R](double t, double, double) { return -2.0 / R(t); };
  p.phi = const_field(1.0);
  p.phi_t = const_field(0.0);
  p.grad_phi = zero_vector_field();
  p.v = [R, Rdot](double t, const Vec3& x) { return (Rdot(t) / R(t)) * x; };
  p.grad_v = [R, Rdot](double t, const Vec3&) { return identity_times(Rdot(t) / R(t)); };
  p.boundary_a0 = true;
  p.n_V = [](double, const Vec3&) { return Vec3{0, 0, 1}; };
  return p;
}

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> cat;

  // -- volume --
  {
    CatalogEntry e;
    e.name = "ball_expand_const";
    e.kind = CaseKind::Volume;
    e.t0 = 0.0;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double t) { return 4.0 * kPi * (1.0 + t) * (1.0 + t); };
    e.ball = [] {
      BallVolumeCase bc;
      bc.R = [](double t) { return 1.0 + t; };
      bc.Rdot = [](double) { return 1.0; };
      bc.c = [](double) { return Vec3{}; };
      bc.cdot = [](double) { return Vec3{}; };
      bc.phi_in = const_field(1.0);
      bc.phi_in_t = const_field(0.0);
      bc.phi_out = const_field(0.0);
      bc.phi_out_t = const_field(0.0);
      return bc;
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "ball_osc_smooth";
    e.kind = CaseKind::Volume;
    e.t0 = 0.7;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.ball = [] {
      BallVolumeCase bc;
      bc.R = [](double t) { return 1.0 + 0.3 * std::sin(t); };
      bc.Rdot = [](double t) { return 0.3 * std::cos(t); };
      bc.c = [](double) { return Vec3{}; };
      bc.cdot = [](double) { return Vec3{}; };
      bc.phi_in = [](double t, const Vec3& x) {
        return (1.0 + 0.5 * x.z * x.z) * (1.0 + 0.2 * std::sin(2.0 * t));
      };
      bc.phi_in_t = [](double t, const Vec3& x) {
        return (1.0 + 0.5 * x.z * x.z) * 0.4 * std::cos(2.0 * t);
      };
      bc.phi_out = [](double t, const Vec3& x) { return 0.3 * std::cos(t) * (1.0 + 0.1 * x.y); };
      bc.phi_out_t = [](double t, const Vec3& x) { return -0.3 * std::sin(t) * (1.0 + 0.1 * x.y); };
      return bc;
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "ball_translate_bodyframe";
    e.kind = CaseKind::Volume;
    e.t0 = 0.4;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double) { return 0.0; };
    e.ball = [] {
      BallVolumeCase bc;
      bc.R = [](double) { return 1.0; };
      bc.Rdot = [](double) { return 0.0; };
      bc.c = [](double t) { return Vec3{0.3 * t, 0.0, 0.0}; };
      bc.cdot = [](double) { return Vec3{0.3, 0.0, 0.0}; };
      bc.phi_in = [](double t, const Vec3& x) { return 1.0 + 0.2 * (x.x - 0.3 * t); };
      bc.phi_in_t = [](double, const Vec3&) { return -0.06; };
      bc.phi_out = const_field(0.1);
      bc.phi_out_t = const_field(0.0);
      return bc;
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "ball_static";
    e.kind = CaseKind::Volume;
    e.is_static = true;
    e.t0 = 0.5;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double) { return 0.0; };
    e.ball = [] {
      BallVolumeCase bc;
      bc.R = [](double) { return 1.2; };
      bc.Rdot = [](double) { return 0.0; };
      bc.c = [](double) { return Vec3{}; };
      bc.cdot = [](double) { return Vec3{}; };
      bc.phi_in = [](double, const Vec3& x) { return 1.0 + 0.3 * x.x * x.z; };
      bc.phi_in_t = const_field(0.0);
      bc.phi_out = [](double, const Vec3& x) { return 0.2 + 0.1 * x.y; };
      bc.phi_out_t = const_field(0.0);
      return bc;
    };
    cat.push_back(e);
  }

  // -- surface --
  {
    CatalogEntry e;
    e.name = "sphere_expand_const";
    e.kind = CaseKind::Surface;
    e.t0 = 0.0;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double t) { return 8.0 * kPi * (1.0 + t); };
    e.surface = [] {
      auto R = [](double t) { return 1.0 + t; };
      auto Rdot = [](double) { return 1.0; };
      return sphere_patch(
          R, Rdot, const_field(1.0), const_field(0.0), zero_vector_field(),
          [R, Rdot](double t, const Vec3& x) { return (Rdot(t) / R(t)) * x; },
          [R, Rdot](double t, const Vec3&) { return identity_times(Rdot(t) / R(t)); });
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "sphere_wobble_rotate";
    e.kind = CaseKind::Surface;
    e.t0 = 0.3;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double t) {
      const double R = 1.0 + 0.25 * std::sin(t);
      const double Rd = 0.25 * std::cos(t);
      // I(t) = (4 pi / 3) R^4 (1 + 0.3 cos t)
      return 4.0 * kPi / 3.0 *
             (4.0 * R * R * R * Rd * (1.0 + 0.3 * std::cos(t)) -
              R * R * R * R * 0.3 * std::sin(t));
    };
    e.surface = [] {
      auto R = [](double t) { return 1.0 + 0.25 * std::sin(t); };
      auto Rdot = [](double t) { return 0.25 * std::cos(t); };
      const Vec3 omega{0.0, 0.0, 0.7};
      auto phi = [](double t, const Vec3& x) {
        return x.x * x.x + x.y * x.z + 0.3 * std::cos(t) * x.z * x.z;
      };
      auto phi_t = [](double t, const Vec3& x) { return -0.3 * std::sin(t) * x.z * x.z; };
      auto grad = [](double t, const Vec3& x) {
        return Vec3{2.0 * x.x, x.z, x.y + 0.6 * std::cos(t) * x.z};
      };
      auto v = [R, Rdot, omega](double t, const Vec3& x) {
        return (Rdot(t) / R(t)) * x + cross(omega, x);
      };
      auto gv = [R, Rdot, omega](double t, const Vec3&) {
        Mat3 g = identity_times(Rdot(t) / R(t));
        g.m[0][1] -= omega.z;
        g.m[1][0] += omega.z;
        return g;
      };
      return sphere_patch(R, Rdot, phi, phi_t, grad, v, gv);
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "cap_expand";
    e.kind = CaseKind::Surface;
    e.t0 = 0.5;
    e.dt0 = 0.04;
    e.n0 = 8;
    e.reference = [](double t) {
      const double R = 1.2 + 0.2 * t;
      return (4.0 * kPi * R + 2.0 * kPi * 0.6) * 0.2;
    };
    e.surface = cap_patch;
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "plane_box_translate";
    e.kind = CaseKind::Surface;
    e.t0 = 0.5;
    e.dt0 = 0.04;
    e.n0 = 6;
    e.surface = plane_box_patch;
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "sphere_static";
    e.kind = CaseKind::Surface;
    e.is_static = true;
    e.t0 = 0.2;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double) { return 0.0; };
    e.surface = [] {
      auto R = [](double) { return 1.1; };
      auto Rdot = [](double) { return 0.0; };
      auto phi = [](double, const Vec3& x) { return 1.0 + 0.2 * x.x * x.x * x.z; };
      auto grad = [](double, const Vec3& x) {
        return Vec3{0.4 * x.x * x.z, 0.0, 0.2 * x.x * x.x};
      };
      return sphere_patch(R, Rdot, phi, const_field(0.0), grad, zero_vector_field(),
                          [](double, const Vec3&) { return Mat3{}; });
    };
    cat.push_back(e);
  }

  // -- line --
  {
    CatalogEntry e;
    e.name = "circle_expand";
    e.kind = CaseKind::Line;
    e.t0 = 0.0;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double) { return 2.0 * kPi; };
    e.line = [] {
      LineCase lc;
      auto R = [](double t) { return 1.0 + t; };
      lc.Y = [R](double t, double s) {
        return Vec3{R(t) * std::cos(2.0 * kPi * s), R(t) * std::sin(2.0 * kPi * s), 0.0};
      };
      lc.Ys = [R](double t, double s) {
        return (2.0 * kPi * R(t)) * Vec3{-std::sin(2.0 * kPi * s), std::cos(2.0 * kPi * s), 0.0};
      };
      lc.Yt = [](double t, double s) {
        (void)t;
        return Vec3{std::cos(2.0 * kPi * s), std::sin(2.0 * kPi * s), 0.0};
      };
      lc.Yts = [](double, double s) {
        return (2.0 * kPi) * Vec3{-std::sin(2.0 * kPi * s), std::cos(2.0 * kPi * s), 0.0};
      };
      lc.phi = const_field(1.0);
      lc.phi_t = const_field(0.0);
      lc.grad_phi = zero_vector_field();
      lc.closed = true;
      return lc;
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "curve_translate_bodyframe";
    e.kind = CaseKind::Line;
    e.is_static = true;  // exact invariance; residual at round-off
    e.t0 = 0.3;
    e.dt0 = 0.05;
    e.n0 = 8;
    e.reference = [](double) { return 0.0; };
    e.line = [] {
      LineCase lc;
      const Vec3 u{0.2, -0.1, 0.3};
      lc.Y = [u](double t, double s) {
        return Vec3{s, 0.3 * std::sin(kPi * s), 0.1 * s} + t * u;
      };
      lc.Ys = [](double, double s) {
        return Vec3{1.0, 0.3 * kPi * std::cos(kPi * s), 0.1};
      };
      lc.Yt = [u](double, double) { return u; };
      lc.Yts = [](double, double) { return Vec3{}; };
      lc.phi = [u](double t, const Vec3& x) {
        const Vec3 y = x - t * u;
        return 1.0 + y.x + y.y * y.y - 0.5 * y.z;
      };
      lc.phi_t = [u](double t, const Vec3& x) {
        const Vec3 y = x - t * u;
        const Vec3 g{1.0, 2.0 * y.y, -0.5};
        return -dot(u, g);
      };
      lc.grad_phi = [u](double t, const Vec3& x) {
        const Vec3 y = x - t * u;
        return Vec3{1.0, 2.0 * y.y, -0.5};
      };
      lc.closed = false;
      lc.material_velocity = true;
      return lc;
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "arc_sweep_endpoint";
    e.kind = CaseKind::Line;
    e.t0 = 0.4;
    e.dt0 = 0.04;
    e.n0 = 8;
    e.reference = [](double t) {
      const double alpha = 1.0 + 0.5 * t;
      const double x = std::cos(alpha), y = std::sin(alpha);
      return (1.0 + x + y * y) * 0.5;  // phi at the sweeping endpoint times alpha_dot
    };
    e.line = [] {
      LineCase lc;
      auto alpha = [](double t) { return 1.0 + 0.5 * t; };
      lc.Y = [alpha](double t, double s) {
        return Vec3{std::cos(s * alpha(t)), std::sin(s * alpha(t)), 0.0};
      };
      lc.Ys = [alpha](double t, double s) {
        return alpha(t) * Vec3{-std::sin(s * alpha(t)), std::cos(s * alpha(t)), 0.0};
      };
      lc.Yt = [alpha](double t, double s) {
        return (0.5 * s) * Vec3{-std::sin(s * alpha(t)), std::cos(s * alpha(t)), 0.0};
      };
      lc.Yts = [](double, double) { return Vec3{}; };  // unused (v = 0)
      lc.phi = [](double, const Vec3& x) { return 1.0 + x.x + x.y * x.y; };
      lc.phi_t = const_field(0.0);
      lc.grad_phi = [](double, const Vec3& x) { return Vec3{1.0, 2.0 * x.y, 0.0}; };
      lc.closed = false;
      lc.material_velocity = false;  // static curve; only the subset endpoint moves
      return lc;
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "helix_stretch";
    e.kind = CaseKind::Line;
    e.t0 = 0.6;
    e.dt0 = 0.04;
    e.n0 = 8;
    e.line = [] {
      LineCase lc;
      auto zf = [](double t) { return 0.6 + 0.1 * std::sin(t); };
      auto zfd = [](double t) { return 0.1 * std::cos(t); };
      lc.Y = [zf](double t, double s) {
        const double a = 0.4 * t + 1.5 * kPi * s;
        return Vec3{std::cos(a), std::sin(a), zf(t) * s};
      };
      lc.Ys = [zf](double t, double s) {
        const double a = 0.4 * t + 1.5 * kPi * s;
        return Vec3{-1.5 * kPi * std::sin(a), 1.5 * kPi * std::cos(a), zf(t)};
      };
      lc.Yt = [zfd](double t, double s) {
        const double a = 0.4 * t + 1.5 * kPi * s;
        return Vec3{-0.4 * std::sin(a), 0.4 * std::cos(a), zfd(t) * s};
      };
      lc.Yts = [zfd](double t, double s) {
        const double a = 0.4 * t + 1.5 * kPi * s;
        return Vec3{-0.4 * 1.5 * kPi * std::cos(a), -0.4 * 1.5 * kPi * std::sin(a), zfd(t)};
      };
      lc.phi = [](double t, const Vec3& x) { return 1.0 + 0.5 * x.z + 0.2 * x.x + 0.1 * std::sin(t); };
      lc.phi_t = [](double t, const Vec3&) { return 0.1 * std::cos(t); };
      lc.grad_phi = [](double, const Vec3&) { return Vec3{0.2, 0.0, 0.5}; };
      lc.closed = false;
      lc.material_velocity = true;
      return lc;
    };
    cat.push_back(e);
  }

  return cat;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> cat = make_catalog();
  return cat;
}

const CatalogEntry& find_case(const std::string& name) {
  for (const CatalogEntry& e : catalog())
    if (e.name == name) return e;
  fail(Err::Invalid, "unknown transport case '" + name + "'");
}

}  // namespace

std::vector<std::string> case_names() {
  std::vector<std::string> out;
  for (const CatalogEntry& e : catalog()) out.push_back(e.name);
  return out;
}

double volume_transport_residual(const std::string& name, double t, double dt, int n) {
  const CatalogEntry& e = find_case(name);
  if (e.kind != CaseKind::Volume) fail(Err::Invalid, name + " is not a volume case");
  const VolumeEval ev = evaluate_ball_case(e.ball(), t, dt, n);
  return std::abs(ev.lhs - ev.rhs);
}

double surface_transport_residual(const std::string& name, SurfaceForm form, double t,
                                  double dt, int n) {
  const CatalogEntry& e = find_case(name);
  if (e.kind != CaseKind::Surface) fail(Err::Invalid, name + " is not a surface case");
  const SurfaceEval ev = evaluate_surface_patch(e.surface(), t, dt, n);
  return std::abs(ev.lhs - ev.rhs[static_cast<int>(form)]);
}

double line_transport_residual(const std::string& name, double t, double dt, int n) {
  const CatalogEntry& e = find_case(name);
  if (e.kind != CaseKind::Line) fail(Err::Invalid, name + " is not a line case");
  const LineEval ev = evaluate_line_case(e.line(), t, dt, n);
  return std::abs(ev.lhs - ev.rhs);
}

CaseReport evaluate_case(const std::string& name, int refinements) {
  const CatalogEntry& e = find_case(name);
  CaseReport rep;
  rep.name = e.name;
  rep.kind = e.kind;
  rep.is_static = e.is_static;
  rep.has_reference = static_cast<bool>(e.reference);
  rep.reference = rep.has_reference ? e.reference(e.t0) : kNan;

  for (int lvl = 0; lvl <= refinements; ++lvl) {
    const int n = e.n0 << lvl;
    const double dt = e.dt0 / (1 << lvl);
    double residual = 0.0, lhs = 0.0;
    if (e.kind == CaseKind::Volume) {
      const VolumeEval ev = evaluate_ball_case(e.ball(), e.t0, dt, n);
      residual = std::abs(ev.lhs - ev.rhs);
      lhs = ev.lhs;
      rep.boundary_identity.push_back(kNan);
      rep.form_residuals.push_back({kNan, kNan, kNan});
      rep.form_pair_worst.push_back(kNan);
    } else if (e.kind == CaseKind::Surface) {
      const SurfaceEval ev = evaluate_surface_patch(e.surface(), e.t0, dt, n);
      std::array<double, 3> fr{};
      double pair = 0.0;
      for (int f = 0; f < 3; ++f) fr[f] = std::abs(ev.lhs - ev.rhs[f]);
      for (int f = 0; f < 3; ++f)
        for (int g = f + 1; g < 3; ++g) pair = std::max(pair, std::abs(ev.rhs[f] - ev.rhs[g]));
      residual = std::max({fr[0], fr[1], fr[2]});
      lhs = ev.lhs;
      rep.form_residuals.push_back(fr);
      rep.form_pair_worst.push_back(pair);
      rep.boundary_identity.push_back(ev.boundary_identity);
    } else {
      const LineEval ev = evaluate_line_case(e.line(), e.t0, dt, n);
      residual = std::abs(ev.lhs - ev.rhs);
      lhs = ev.lhs;
      rep.boundary_identity.push_back(kNan);
      rep.form_residuals.push_back({kNan, kNan, kNan});
      rep.form_pair_worst.push_back(kNan);
    }
    rep.residual.push_back(residual);
    rep.lhs.push_back(lhs);
    rep.order.push_back(lvl == 0 ? kNan
                                 : std::log2(rep.residual[lvl - 1] /
                                             std::max(residual, 1e-300)));
  }

  // least-squares slope of log(residual) against level
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int L = static_cast<int>(rep.residual.size());
    for (int l = 0; l < L; ++l) {
      const double x = -l;  // log2(h_l/h_0)
      const double y = std::log2(std::max(rep.residual[l], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rep.fitted_order = (L * sxy - sx * sy) / (L * sxx - sx * sx);
  }
  return rep;
}

std::string catalog_csv(const std::string& only_case, int refinements) {
  if (!only_case.empty()) find_case(only_case);  // throws on unknown names
  std::ostringstream os;
  os << "case,level,residual,order\n";
  for (const CatalogEntry& e : catalog()) {
    if (!only_case.empty() && e.name != only_case) continue;
    const CaseReport rep = evaluate_case(e.name, refinements);
    auto emit = [&](const std::string& name, const std::vector<double>& res) {
      for (size_t l = 0; l < res.size(); ++l) {
        os << name << ',' << l << ',' << res[l] << ',';
        if (l > 0) os << std::log2(res[l - 1] / std::max(res[l], 1e-300));
        os << "\n";
      }
    };
    if (e.kind == CaseKind::Surface) {
      const char* suffix[3] = {"/basic", "/lagrangian", "/normal-boundary"};
      for (int f = 0; f < 3; ++f) {
        std::vector<double> res;
        for (const auto& fr : rep.form_residuals) res.push_back(fr[f]);
        emit(e.name + suffix[f], res);
      }
    } else {
      emit(e.name, rep.residual);
    }
  }
  return os.str();
}

}  // namespace triline::transport
