#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "eql/errors.hpp"

namespace eql {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Tolerances {
  double pt = 1e-12;   // boundary point coincidence, angle metric
  double det = 1e-10;  // determinant normalization
  double tr = 1e-10;   // hyperbolic classification
};

// Canonical representative in [0, 2pi).
double wrap_angle(double theta);
// Counterclockwise angular distance from `from` to `to`, in [0, 2pi).
double ccw_distance(double from, double to);
// Shortest angular distance, in [0, pi].
double angle_distance(double a, double b);

enum class Chart { Disk, HalfPlane };

// Ideal boundary point in the disk chart (angle) or the half-plane chart
// (extended real). Infinity is a tag, never a large float.
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  static BoundaryPoint disk(double theta);
  static BoundaryPoint real(double x);
  static BoundaryPoint infinity();

  Chart chart() const { return chart_; }
  bool is_infinity() const { return inf_; }
  // Angle in the disk chart, x in the half-plane chart. Throws on infinity.
  double value() const;
  // Disk angle in [0, 2pi) whatever the chart.
  double angle() const;
  Complex disk_point() const;

  BoundaryPoint to_disk() const;
  BoundaryPoint to_half_plane() const;
  BoundaryPoint in_chart(Chart c) const;

 private:
  Chart chart_ = Chart::Disk;
  double value_ = 0.0;
  bool inf_ = false;
};

double metric_circle(const BoundaryPoint& p, const BoundaryPoint& q);
bool same_point(const BoundaryPoint& p, const BoundaryPoint& q, double tol = 1e-12);

// +1 if (p, q, r) is counterclockwise, -1 if clockwise.
// Throws DegenerateTriple when two points coincide within tol.
int cyclic_orientation(const BoundaryPoint& p, const BoundaryPoint& q, const BoundaryPoint& r,
                       double tol = 1e-12);

// Membership of x in the counterclockwise arc from -> to.
bool in_arc(const BoundaryPoint& x, const BoundaryPoint& from, const BoundaryPoint& to,
            bool open_from = false, bool open_to = false, double tol = 1e-12);

// Unordered pair of distinct boundary points; stored with the orientation a -> b
// when one is needed (earthquakes, translations).
class Geodesic {
 public:
  Geodesic(const BoundaryPoint& a, const BoundaryPoint& b, double tol = 1e-12);
  static Geodesic disk(double alpha, double beta) {
    return Geodesic(BoundaryPoint::disk(alpha), BoundaryPoint::disk(beta));
  }

  const BoundaryPoint& a() const { return a_; }
  const BoundaryPoint& b() const { return b_; }
  Chart chart() const { return a_.chart(); }
  Geodesic reversed() const { return Geodesic(b_, a_, 0.0); }
  Geodesic in_chart(Chart c) const { return Geodesic(a_.in_chart(c), b_.in_chart(c), 0.0); }

 private:
  BoundaryPoint a_, b_;
};

double metric_geodesics(const Geodesic& g, const Geodesic& h);
bool same_geodesic(const Geodesic& g, const Geodesic& h, double tol = 1e-12);
bool shares_endpoint(const Geodesic& g, const Geodesic& h, double tol = 1e-12);
// Endpoints strictly interleave on the circle.
bool geodesics_cross(const Geodesic& g, const Geodesic& h, double tol = 1e-12);
// Distance between disjoint geodesics; 0 when asymptotic. Throws GeodesicsCross.
double hyperbolic_distance(const Geodesic& g, const Geodesic& h, double tol = 1e-12);

// Interior points live in the half-plane chart.
Complex disk_to_half_plane(Complex w);
Complex half_plane_to_disk(Complex z);
double hyperbolic_distance(Complex z, Complex w);

// Side of the oriented geodesic a -> b: +1 left, -1 right, 0 on it.
// The left side is bounded by the counterclockwise arc from b to a.
int side_of(const Geodesic& oriented, Complex z, double tol = 1e-12);
int side_of(const Geodesic& oriented, const BoundaryPoint& x, double tol = 1e-12);

// PSL(2,R) element acting on the half-plane chart, det normalized to 1.
class Mobius {
 public:
  Mobius() = default;
  Mobius(double a, double b, double c, double d);
  static Mobius identity() { return Mobius(); }
  static Mobius diagonal(double t) { return Mobius(std::exp(t / 2), 0, 0, std::exp(-t / 2)); }

  double a() const { return m_[0]; }
  double b() const { return m_[1]; }
  double c() const { return m_[2]; }
  double d() const { return m_[3]; }
  const std::array<double, 4>& entries() const { return m_; }
  double trace() const { return m_[0] + m_[3]; }
  double norm() const;

  Mobius operator*(const Mobius& o) const;
  Mobius inverse() const;
  // Sign representative with positive upper-left entry (ties: first nonzero entry).
  Mobius canonical_sign() const;

  BoundaryPoint apply(const BoundaryPoint& p) const;
  Complex apply(Complex z) const;
  Geodesic apply(const Geodesic& g) const;
  // Derivative of the induced circle map in the angle coordinate.
  double angle_derivative(double theta) const;
  // Derivative in the half-plane coordinate at finite x.
  double derivative(double x) const;

 private:
  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

bool approx_equal(const Mobius& m, const Mobius& n, double tol);

Mobius mobius_from_triples(const std::array<BoundaryPoint, 3>& src,
                           const std::array<BoundaryPoint, 3>& dst, double tol = 1e-12);

// Translation along the oriented axis a -> b by signed length t; t > 0 pushes toward b.
Mobius hyperbolic_translation(const Geodesic& axis, double t);

struct TranslationData {
  double length = 0.0;
  std::optional<Geodesic> axis;  // oriented repelling -> attracting
};
TranslationData translation_length_axis(const Mobius& m, const Tolerances& tol = {});

// Point at signed arclength s on the geodesic (-1, 1) of the half-plane, s = 0 at i.
Complex unit_circle_geodesic_point(double s);

}  // namespace eql
