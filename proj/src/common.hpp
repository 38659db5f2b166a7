#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace triline {

// Error taxonomy; mirrored one-to-one by the tl_status codes of the C API.
enum class Err {
  Ok = 0,
  Invalid,
  DegenerateGeometry,
  TopologyError,
  CurveTooShort,
  NonPositiveDensity,
  TensionDepleted,
  ClosureSolveFailed,
  SlipDegenerate,
  StepRejected,
  DegenerateJunction,
  IllPosedCase,
  ParseError,
  ValidationError,
  IoError,
  Internal,
};

class TrilineError : public std::runtime_error {
public:
  TrilineError(Err code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
  throw TrilineError(code, msg);
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }

inline Vec2 normalized(const Vec2& a) {
  double n = norm(a);
  if (n == 0.0) fail(Err::DegenerateGeometry, "cannot normalize zero vector");
  return {a.x / n, a.y / n};
}

// Left normal of a direction vector: rotate by +90 degrees.
inline Vec2 left_normal(const Vec2& t) { return {-t.y, t.x}; }

constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace triline
