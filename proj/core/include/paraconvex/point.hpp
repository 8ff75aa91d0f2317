#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace paraconvex {

/// A point of R^2 or R^3. Coordinates past `dim()` are kept at zero so the
/// arithmetic below never has to branch on dimension.
class Point {
 public:
  static constexpr std::size_t kMaxDim = 3;

  Point() = default;
  Point(double x, double y) : c_{x, y, 0.0}, dim_(2) {}
  Point(double x, double y, double z) : c_{x, y, z}, dim_(3) {}

  static Point zero(std::size_t dim) {
    Point p;
    p.dim_ = static_cast<std::uint8_t>(dim);
    return p;
  }
  static Point from_span(std::span<const double> coords);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }
  double x() const noexcept { return c_[0]; }
  double y() const noexcept { return c_[1]; }
  double z() const noexcept { return c_[2]; }

  bool is_finite() const noexcept {
    return std::isfinite(c_[0]) && std::isfinite(c_[1]) && std::isfinite(c_[2]);
  }

  Point& operator+=(const Point& o) noexcept {
    c_[0] += o.c_[0];
    c_[1] += o.c_[1];
    c_[2] += o.c_[2];
    return *this;
  }
  Point& operator-=(const Point& o) noexcept {
    c_[0] -= o.c_[0];
    c_[1] -= o.c_[1];
    c_[2] -= o.c_[2];
    return *this;
  }
  Point& operator*=(double s) noexcept {
    c_[0] *= s;
    c_[1] *= s;
    c_[2] *= s;
    return *this;
  }
  Point& operator/=(double s) noexcept {
    c_[0] /= s;
    c_[1] /= s;
    c_[2] /= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
  friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
  friend Point operator*(Point a, double s) noexcept { return a *= s; }
  friend Point operator*(double s, Point a) noexcept { return a *= s; }
  friend Point operator/(Point a, double s) noexcept { return a /= s; }
  friend bool operator==(const Point&, const Point&) = default;

  std::string to_string() const;

 private:
  std::array<double, kMaxDim> c_{};
  std::uint8_t dim_ = 0;
};

inline double dot(const Point& a, const Point& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double squared_norm(const Point& a) noexcept { return dot(a, a); }
inline double norm(const Point& a) noexcept { return std::sqrt(squared_norm(a)); }
inline double squared_distance(const Point& a, const Point& b) noexcept {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}
inline double distance(const Point& a, const Point& b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace paraconvex
