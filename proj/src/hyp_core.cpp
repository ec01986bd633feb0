#include "eql/hyp_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eql/detail.hpp"

namespace eql {

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double ccw_distance(double from, double to) { return wrap_angle(to - from); }

double angle_distance(double a, double b) {
  double d = ccw_distance(a, b);
  return std::min(d, kTwoPi - d);
}

BoundaryPoint BoundaryPoint::disk(double theta) {
  if (!std::isfinite(theta)) throw NonFinite("disk angle is not finite");
  BoundaryPoint p;
  p.chart_ = Chart::Disk;
  p.value_ = wrap_angle(theta);
  return p;
}

BoundaryPoint BoundaryPoint::real(double x) {
  if (!std::isfinite(x)) throw NonFinite("half-plane coordinate is not finite; use infinity()");
  BoundaryPoint p;
  p.chart_ = Chart::HalfPlane;
  p.value_ = x;
  return p;
}

BoundaryPoint BoundaryPoint::infinity() {
  BoundaryPoint p;
  p.chart_ = Chart::HalfPlane;
  p.inf_ = true;
  return p;
}

double BoundaryPoint::value() const {
  if (inf_) throw Error("the point at infinity has no finite coordinate");
  return value_;
}

double BoundaryPoint::angle() const {
  if (chart_ == Chart::Disk) return value_;
  if (inf_) return 0.0;
  return wrap_angle(kPi + 2.0 * std::atan(value_));
}

Complex BoundaryPoint::disk_point() const { return std::polar(1.0, angle()); }

BoundaryPoint BoundaryPoint::to_disk() const {
  if (chart_ == Chart::Disk) return *this;
  return disk(angle());
}

BoundaryPoint BoundaryPoint::to_half_plane() const {
  if (chart_ == Chart::HalfPlane) return *this;
  if (value_ == 0.0) return infinity();
  double h = 0.5 * value_;
  return real(-std::cos(h) / std::sin(h));
}

BoundaryPoint BoundaryPoint::in_chart(Chart c) const {
  return c == Chart::Disk ? to_disk() : to_half_plane();
}

double metric_circle(const BoundaryPoint& p, const BoundaryPoint& q) {
  return angle_distance(p.angle(), q.angle());
}

bool same_point(const BoundaryPoint& p, const BoundaryPoint& q, double tol) {
  return metric_circle(p, q) <= tol;
}

int cyclic_orientation(const BoundaryPoint& p, const BoundaryPoint& q, const BoundaryPoint& r,
                       double tol) {
  if (same_point(p, q, tol) || same_point(q, r, tol) || same_point(p, r, tol))
    throw DegenerateTriple("triple has coincident points");
  double ap = p.angle();
  return ccw_distance(ap, q.angle()) < ccw_distance(ap, r.angle()) ? 1 : -1;
}

bool in_arc(const BoundaryPoint& x, const BoundaryPoint& from, const BoundaryPoint& to,
            bool open_from, bool open_to, double tol) {
  double ax = x.angle(), af = from.angle(), at = to.angle();
  if (angle_distance(ax, af) <= tol) return !open_from;
  if (angle_distance(ax, at) <= tol) return !open_to;
  return ccw_distance(af, ax) < ccw_distance(af, at);
}

Geodesic::Geodesic(const BoundaryPoint& a, const BoundaryPoint& b, double tol)
    : a_(a), b_(b.in_chart(a.chart())) {
  if (metric_circle(a_, b_) <= tol) throw DegenerateGeodesic("geodesic endpoints coincide");
}

double metric_geodesics(const Geodesic& g, const Geodesic& h) {
  double p1 = std::max(metric_circle(g.a(), h.a()), metric_circle(g.b(), h.b()));
  double p2 = std::max(metric_circle(g.a(), h.b()), metric_circle(g.b(), h.a()));
  return std::min(p1, p2);
}

bool same_geodesic(const Geodesic& g, const Geodesic& h, double tol) {
  return metric_geodesics(g, h) <= tol;
}

bool shares_endpoint(const Geodesic& g, const Geodesic& h, double tol) {
  return same_point(g.a(), h.a(), tol) || same_point(g.a(), h.b(), tol) ||
         same_point(g.b(), h.a(), tol) || same_point(g.b(), h.b(), tol);
}

bool geodesics_cross(const Geodesic& g, const Geodesic& h, double tol) {
  if (shares_endpoint(g, h, tol)) return false;
  bool c_in = in_arc(h.a(), g.a(), g.b(), true, true, 0.0);
  bool d_in = in_arc(h.b(), g.a(), g.b(), true, true, 0.0);
  return c_in != d_in;
}

double hyperbolic_distance(const Geodesic& g, const Geodesic& h, double tol) {
  if (shares_endpoint(g, h, tol)) return 0.0;
  auto [a, b, c, d] = detail::disjoint_order(g, h, tol);
  // (a-b)(c-d)/((a-d)(b-c)) = 1/sinh^2(D/2)
  double r = std::abs(detail::cross_ratio_raw(a, c, b, d));
  return 2.0 * std::asinh(1.0 / std::sqrt(r));
}

Complex disk_to_half_plane(Complex w) {
  const Complex i(0, 1);
  return i * (1.0 + w) / (1.0 - w);
}

Complex half_plane_to_disk(Complex z) {
  const Complex i(0, 1);
  return (z - i) / (z + i);
}

double hyperbolic_distance(Complex z, Complex w) {
  return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

namespace {

// Orientation-preserving map sending a -> 0 and b -> infinity.
Mobius normalizer(const Geodesic& oriented) {
  BoundaryPoint a = oriented.a().to_half_plane(), b = oriented.b().to_half_plane();
  if (b.is_infinity()) return Mobius(1, -a.value(), 0, 1);
  if (a.is_infinity()) return Mobius(0, -1, 1, -b.value());
  double x = a.value(), y = b.value();
  if (x > y) return Mobius(1, -x, 1, -y);
  return Mobius(-1, x, 1, -y);
}

}  // namespace

int side_of(const Geodesic& oriented, Complex z, double tol) {
  Complex w = normalizer(oriented).apply(z);
  if (std::abs(w.real()) <= tol * std::abs(w)) return 0;
  return w.real() < 0 ? 1 : -1;
}

int side_of(const Geodesic& oriented, const BoundaryPoint& x, double tol) {
  if (same_point(x, oriented.a(), tol) || same_point(x, oriented.b(), tol)) return 0;
  return in_arc(x, oriented.b(), oriented.a(), true, true, 0.0) ? 1 : -1;
}

Mobius::Mobius(double a, double b, double c, double d) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)))
    throw NonFinite("Mobius entries must be finite");
  double det = a * d - b * c;
  if (!(det > 0)) throw Error("Mobius map needs a positive determinant");
  double s = std::sqrt(det);
  m_ = {a / s, b / s, c / s, d / s};
}

double Mobius::norm() const {
  return std::sqrt(m_[0] * m_[0] + m_[1] * m_[1] + m_[2] * m_[2] + m_[3] * m_[3]);
}

Mobius Mobius::operator*(const Mobius& o) const {
  const auto& p = m_;
  const auto& q = o.m_;
  return Mobius(p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
                p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]);
}

Mobius Mobius::inverse() const { return Mobius(m_[3], -m_[1], -m_[2], m_[0]); }

Mobius Mobius::canonical_sign() const {
  for (double e : m_) {
    if (e > 0) return *this;
    if (e < 0) return Mobius(-m_[0], -m_[1], -m_[2], -m_[3]);
  }
  return *this;
}

BoundaryPoint Mobius::apply(const BoundaryPoint& p) const {
  const auto [a, b, c, d] = m_;
  if (p.chart() == Chart::HalfPlane) {
    if (p.is_infinity()) return c == 0.0 ? BoundaryPoint::infinity() : BoundaryPoint::real(a / c);
    double x = p.value();
    double den = c * x + d;
    if (den == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::real((a * x + b) / den);
  }
  // Conjugate by the Cayley map and act on e^{i theta} directly.
  Complex A(c - b, a + d), B(b + c, a - d), C(-b - c, a - d), D(b - c, a + d);
  Complex w = std::polar(1.0, p.value());
  return BoundaryPoint::disk(std::arg((A * w + B) / (C * w + D)));
}

Complex Mobius::apply(Complex z) const {
  const auto [a, b, c, d] = m_;
  return (a * z + b) / (c * z + d);
}

Geodesic Mobius::apply(const Geodesic& g) const { return Geodesic(apply(g.a()), apply(g.b()), 0.0); }

double Mobius::angle_derivative(double theta) const {
  const auto [a, b, c, d] = m_;
  Complex C(-b - c, a - d), D(b - c, a + d);
  return 4.0 / std::norm(C * std::polar(1.0, theta) + D);
}

double Mobius::derivative(double x) const {
  double den = m_[2] * x + m_[3];
  return 1.0 / (den * den);
}

bool approx_equal(const Mobius& m, const Mobius& n, double tol) {
  double plus = 0, minus = 0;
  for (int k = 0; k < 4; ++k) {
    plus = std::max(plus, std::abs(m.entries()[k] - n.entries()[k]));
    minus = std::max(minus, std::abs(m.entries()[k] + n.entries()[k]));
  }
  return std::min(plus, minus) <= tol;
}

namespace {

using Raw = std::array<double, 4>;

// Matrix of the map sending (z1, z2, z3) to (0, 1, infinity).
Raw to_standard(const std::array<BoundaryPoint, 3>& z) {
  std::array<BoundaryPoint, 3> h{z[0].to_half_plane(), z[1].to_half_plane(), z[2].to_half_plane()};
  if (h[0].is_infinity()) return {0, h[1].value() - h[2].value(), 1, -h[2].value()};
  if (h[1].is_infinity()) return {1, -h[0].value(), 1, -h[2].value()};
  if (h[2].is_infinity()) return {1, -h[0].value(), 0, h[1].value() - h[0].value()};
  double z1 = h[0].value(), z2 = h[1].value(), z3 = h[2].value();
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

}  // namespace

Mobius mobius_from_triples(const std::array<BoundaryPoint, 3>& src,
                           const std::array<BoundaryPoint, 3>& dst, double tol) {
  int os = cyclic_orientation(src[0], src[1], src[2], tol);
  int od = cyclic_orientation(dst[0], dst[1], dst[2], tol);
  if (os != od) throw OrientationMismatch("triples have opposite cyclic orders");
  Raw s = to_standard(src), t = to_standard(dst);
  Raw ti{t[3], -t[1], -t[2], t[0]};  // adjugate
  Raw m{ti[0] * s[0] + ti[1] * s[2], ti[0] * s[1] + ti[1] * s[3],
        ti[2] * s[0] + ti[3] * s[2], ti[2] * s[1] + ti[3] * s[3]};
  double det = m[0] * m[3] - m[1] * m[2];
  if (!(det > 0)) throw OrientationMismatch("triple map reverses orientation");
  return Mobius(m[0], m[1], m[2], m[3]);
}

Mobius hyperbolic_translation(const Geodesic& axis, double t) {
  if (t == 0.0) return Mobius::identity();
  BoundaryPoint p = axis.a().to_half_plane(), q = axis.b().to_half_plane();
  double ch = std::cosh(t / 2), sh = std::sinh(t / 2);
  // closed form of g diag(e^{t/2}, e^{-t/2}) g^{-1} with g(0) = p, g(infinity) = q
  if (q.is_infinity()) return Mobius(ch + sh, -2 * sh * p.value(), 0, ch - sh);
  if (p.is_infinity()) return Mobius(ch - sh, 2 * sh * q.value(), 0, ch + sh);
  double x = p.value(), y = q.value(), k = 1.0 / (y - x);
  return Mobius(ch + (y + x) * k * sh, -2 * x * y * k * sh, 2 * k * sh, ch - (y + x) * k * sh);
}

TranslationData translation_length_axis(const Mobius& m, const Tolerances& tol) {
  TranslationData out;
  const auto [a, b, c, d] = m.entries();
  double disc = (a - d) * (a - d) + 4.0 * b * c;  // tr^2 - 4
  if (!(disc > 0)) return out;
  double len = 2.0 * std::asinh(0.5 * std::sqrt(disc));
  if (len <= tol.tr) return out;
  out.length = len;
  BoundaryPoint attract, repel;
  if (c == 0.0) {
    BoundaryPoint finite = BoundaryPoint::real(b / (d - a));
    bool inf_attracts = std::abs(a) > std::abs(d);
    attract = inf_attracts ? BoundaryPoint::infinity() : finite;
    repel = inf_attracts ? finite : BoundaryPoint::infinity();
  } else {
    // c x^2 + (d - a) x - b = 0, stable root pair
    double B = d - a;
    double sq = std::sqrt(disc);
    double q = -0.5 * (B + (B >= 0 ? sq : -sq));
    double x1 = q / c, x2 = -b / q;
    bool x1_attracts = std::abs(c * x1 + d) > 1.0;
    attract = BoundaryPoint::real(x1_attracts ? x1 : x2);
    repel = BoundaryPoint::real(x1_attracts ? x2 : x1);
  }
  out.axis = Geodesic(repel, attract, 0.0);
  return out;
}

Complex unit_circle_geodesic_point(double s) { return {std::tanh(s), 1.0 / std::cosh(s)}; }

}  // namespace eql
