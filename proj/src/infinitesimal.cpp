#include "eql/infinitesimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eql {

namespace {

// Endpoints of l ordered so that (a, z, b) is counterclockwise.
bool ordered_around(const BoundaryPoint& z, const Geodesic& l, BoundaryPoint& a, BoundaryPoint& b) {
  if (same_point(z, l.a()) || same_point(z, l.b())) return false;
  if (in_arc(z, l.a(), l.b(), true, true)) {
    a = l.a();
    b = l.b();
  } else {
    a = l.b();
    b = l.a();
  }
  return true;
}

double half_plane_e(double x, const BoundaryPoint& a, const BoundaryPoint& b) {
  BoundaryPoint ha = a.to_half_plane(), hb = b.to_half_plane();
  if (hb.is_infinity()) return x - ha.value();
  if (ha.is_infinity()) return hb.value() - x;
  double av = ha.value(), bv = hb.value();
  return (x - av) * (x - bv) / (av - bv);
}

bool separates(const Geodesic& g, Complex base, const BoundaryPoint& z) {
  int s = side_of(g, z);
  return s != 0 && s != side_of(g, base);
}

double chart_scale(const BoundaryPoint& z) {
  BoundaryPoint h = z.to_half_plane();
  if (h.is_infinity()) return 1.0;
  double x = h.value();
  return 0.5 * (1.0 + x * x);
}

}  // namespace

Complex e_tilde_disk(const BoundaryPoint& z, const Geodesic& l) {
  BoundaryPoint a, b;
  if (!ordered_around(z, l, a, b)) return {0.0, 0.0};
  Complex w = z.disk_point(), A = a.disk_point(), B = b.disk_point();
  return (w - A) * (w - B) / (A - B);
}

double e_tilde(const BoundaryPoint& z, const Geodesic& l) {
  BoundaryPoint a, b;
  if (z.chart() == Chart::HalfPlane) {
    if (z.is_infinity()) throw Error("e_tilde: no finite half-plane value at infinity");
    if (!ordered_around(z, l, a, b)) return 0.0;
    return half_plane_e(z.value(), a, b);
  }
  Complex w = z.disk_point();
  return (e_tilde_disk(z, l) / (Complex(0, 1) * w)).real();
}

FieldValue leaf_field(const Geodesic& oriented, const BoundaryPoint& z) {
  FieldValue out;
  if (!in_arc(z, oriented.a(), oriented.b(), true, true)) {
    if (z.chart() == Chart::HalfPlane && !z.is_infinity()) out.half_plane = 0.0;
    return out;
  }
  if (z.chart() == Chart::HalfPlane && !z.is_infinity()) {
    double v = half_plane_e(z.value(), oriented.a(), oriented.b());
    out.half_plane = v;
    out.angular = v / chart_scale(z);
  } else {
    Complex w = z.disk_point();
    out.angular = (e_tilde_disk(z, oriented) / (Complex(0, 1) * w)).real();
  }
  return out;
}

RayFrame::RayFrame(Complex base_point, const BoundaryPoint& z) {
  BoundaryPoint h = z.to_half_plane();
  Mobius m1;
  if (!h.is_infinity()) m1 = Mobius(0.0, -1.0, 1.0, -h.value());
  Complex p = m1.apply(base_point);
  double r = std::sqrt(p.imag());
  Mobius affine(1.0 / r, -p.real() / r, 0.0, r);
  to_frame_ = affine * m1;
  from_frame_ = to_frame_.inverse();
}

std::optional<double> RayFrame::crossing(const Geodesic& g) const {
  BoundaryPoint a = to_frame_.apply(g.a().to_half_plane()).to_half_plane();
  BoundaryPoint b = to_frame_.apply(g.b().to_half_plane()).to_half_plane();
  if (a.is_infinity() || b.is_infinity()) return std::nullopt;
  double prod = a.value() * b.value();
  if (prod >= 0.0) return std::nullopt;
  double s = 0.5 * std::log(-prod);
  if (s <= 0.0) return std::nullopt;
  return s;
}

Complex RayFrame::point(double s) const { return from_frame_.apply(Complex(0.0, std::exp(s))); }

DecayConstants decay_constants(const LaminationOracle& lambda, Complex base_point, const BoundaryPoint& z) {
  DecayConstants out;
  RayFrame frame(base_point, z);
  auto crossing = [&](const Geodesic& g) { return frame.crossing(g).has_value(); };
  double first = std::numeric_limits<double>::infinity();
  for (const Geodesic& g : lambda.extremes_where(crossing))
    if (auto s = frame.crossing(g)) first = std::min(first, *s);
  if (!std::isfinite(first)) return out;
  out.crossing = true;
  out.start = first;
  out.d0 = hyperbolic_distance(Complex(0.0, 1.0), frame.point(first));
  out.c1 = 8.0 * std::exp(out.d0) * std::cosh(out.d0 + 1.0);
  out.c2 = out.c1 / (1.0 - std::exp(-1.0));
  return out;
}

namespace {

double thurston_value(const LaminationOracle& lambda, std::optional<double> given) {
  if (given) return *given;
  return thurston_norm(lambda).lower;
}

}  // namespace

DotEResult dot_E(const LaminationOracle& lambda, const BoundaryPoint& z, Complex base_point, double tol,
                 std::optional<double> thurston) {
  if (!(tol > 0.0)) throw Error("dot_E: tol must be positive");
  DotEResult out;
  out.tol = tol;
  auto field = [&](const Geodesic& g) { return (e_tilde_disk(z, g) / (Complex(0, 1) * z.disk_point())).real(); };
  auto sep = [&](const Geodesic& g) { return separates(g, base_point, z); };
  double angular = 0.0;
  if (lambda.as_discrete()) {
    out.exact = true;
    out.truncation_depth = std::numeric_limits<double>::infinity();
    angular = lambda.integrate_where(field, sep);
  } else {
    DecayConstants k = decay_constants(lambda, base_point, z);
    if (k.crossing) {
      double th = thurston_value(lambda, thurston);
      double scale = z.chart() == Chart::HalfPlane ? chart_scale(z) : 1.0;
      double depth = std::max(0.0, std::log(k.c2 * th * scale / tol));
      out.truncation_depth = depth;
      out.tail_bound = k.c2 * th * std::exp(-depth);
      RayFrame frame(base_point, z);
      angular = lambda.integrate_where(field, [&](const Geodesic& g) {
        auto s = frame.crossing(g);
        return s && *s - k.start <= depth;
      });
    }
  }
  out.value.angular = angular;
  BoundaryPoint h = z.to_half_plane();
  if (!h.is_infinity()) out.value.half_plane = angular * chart_scale(z);
  return out;
}

CircleVectorField dot_E_field(const DiscreteLamination& lambda, Complex base_point) {
  std::vector<Geodesic> oriented;
  std::vector<double> weights;
  for (const auto& [g, w] : lambda.leaves()) {
    oriented.push_back(side_of(g, base_point) > 0 ? g : g.reversed());
    weights.push_back(w);
  }
  return CircleVectorField::angular([oriented, weights](double theta) {
    BoundaryPoint z = BoundaryPoint::disk(theta);
    double v = 0.0;
    for (std::size_t i = 0; i < oriented.size(); ++i) v += weights[i] * leaf_field(oriented[i], z).angular;
    return v;
  });
}

TailBoundReport tail_report(const LaminationOracle& lambda, const BoundaryPoint& z, Complex base_point, double d,
                            std::optional<double> thurston) {
  TailBoundReport out;
  out.d = d;
  out.constants = decay_constants(lambda, base_point, z);
  out.thurston = thurston_value(lambda, thurston);
  if (!out.constants.crossing) return out;
  out.analytic_bound = out.constants.c2 * out.thurston * std::exp(-d);
  RayFrame frame(base_point, z);
  double start = out.constants.start;
  out.measured_tail = lambda.integrate_where([&](const Geodesic& g) { return std::abs(e_tilde_disk(z, g)); },
                                             [&](const Geodesic& g) {
                                               auto s = frame.crossing(g);
                                               return s && *s - start >= d;
                                             });
  return out;
}

FdReport fd_check(const DiscreteLamination& lambda, const BoundaryPoint& z, Complex base_point,
                  const std::vector<double>& t_grid) {
  FdReport out;
  double dot = dot_E(lambda, z, base_point).value.angular;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw Error("fd_check: t must be positive");
    FiniteEarthquake e = earthquake_path(lambda, t, base_point);
    double moved = std::remainder(e.eval_boundary(z).angle() - z.angle(), kTwoPi);
    FdRow row{t, moved / t, dot, 0.0};
    row.discrepancy = std::abs(row.fd - dot);
    out.rows.push_back(row);
    if (row.discrepancy > 0.0) {
      double x = std::log(t), y = std::log(row.discrepancy);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  out.exact = n == 0;
  if (n >= 2) out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace eql
