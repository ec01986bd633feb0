#include "eql/boxes.hpp"

#include <algorithm>
#include <cmath>

#include "eql/detail.hpp"

namespace eql {

std::vector<std::string> BoxFlags::names() const {
  std::vector<std::string> out;
  if (open_a) out.push_back("open_a");
  if (open_b) out.push_back("open_b");
  if (open_c) out.push_back("open_c");
  if (open_d) out.push_back("open_d");
  if (point_ab) out.push_back("point_ab");
  if (point_cd) out.push_back("point_cd");
  return out;
}

BoxFlags BoxFlags::from_names(const std::vector<std::string>& names) {
  BoxFlags f;
  for (const auto& n : names) {
    if (n == "open_a") f.open_a = true;
    else if (n == "open_b") f.open_b = true;
    else if (n == "open_c") f.open_c = true;
    else if (n == "open_d") f.open_d = true;
    else if (n == "point_ab") f.point_ab = true;
    else if (n == "point_cd") f.point_cd = true;
    else throw InputParseError("unknown box flag: " + n);
  }
  return f;
}

GeodesicBox::GeodesicBox(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                         const BoundaryPoint& d, BoxFlags flags, double tol)
    : a_(a),
      b_(b.in_chart(a.chart())),
      c_(c.in_chart(a.chart())),
      d_(d.in_chart(a.chart())),
      flags_(flags) {
  if (flags_.point_ab) b_ = a_;
  if (flags_.point_cd) d_ = c_;
  double aa = a_.angle();
  double db = flags_.point_ab ? 0.0 : ccw_distance(aa, b_.angle());
  double dc = ccw_distance(aa, c_.angle());
  double dd = flags_.point_cd ? dc : ccw_distance(aa, d_.angle());
  bool ok = (flags_.point_ab || db > tol) && dc - db > tol && (flags_.point_cd || dd - dc > tol) &&
            kTwoPi - dd > tol;
  if (!ok) throw DegenerateBox("box corners are not strictly counterclockwise");
}

GeodesicBox GeodesicBox::disk(double a, double b, double c, double d, BoxFlags flags) {
  return GeodesicBox(BoundaryPoint::disk(a), BoundaryPoint::disk(b), BoundaryPoint::disk(c),
                     BoundaryPoint::disk(d), flags);
}

GeodesicBox GeodesicBox::in_chart(Chart c) const {
  return GeodesicBox(a_.in_chart(c), b_.in_chart(c), c_.in_chart(c), d_.in_chart(c), flags_, 0.0);
}

GeodesicBox GeodesicBox::with_flags(BoxFlags f) const { return GeodesicBox(a_, b_, c_, d_, f, 0.0); }

bool GeodesicBox::first_arc_contains(const BoundaryPoint& x, double tol) const {
  if (flags_.point_ab) return !flags_.open_a && same_point(x, a_, tol);
  return in_arc(x, a_, b_, flags_.open_a, flags_.open_b, tol);
}

bool GeodesicBox::second_arc_contains(const BoundaryPoint& x, double tol) const {
  if (flags_.point_cd) return !flags_.open_c && same_point(x, c_, tol);
  return in_arc(x, c_, d_, flags_.open_c, flags_.open_d, tol);
}

bool GeodesicBox::contains(const Geodesic& g, double tol) const {
  return (first_arc_contains(g.a(), tol) && second_arc_contains(g.b(), tol)) ||
         (first_arc_contains(g.b(), tol) && second_arc_contains(g.a(), tol));
}

namespace {

bool arc_inside(double from, double len, double outer_from, double outer_len, double tol) {
  double off = ccw_distance(outer_from, from);
  if (off > kTwoPi - tol) off -= kTwoPi;
  return off >= -tol && off + len <= outer_len + tol;
}

bool arcs_meet(double f1, double l1, double f2, double l2, double tol) {
  return ccw_distance(f1, f2) <= l1 + tol || ccw_distance(f2, f1) <= l2 + tol;
}

}  // namespace

bool GeodesicBox::contains_box(const GeodesicBox& in, double tol) const {
  double l1 = first_arc_length(), l2 = second_arc_length();
  double m1 = in.first_arc_length(), m2 = in.second_arc_length();
  double oa = a_.angle(), oc = c_.angle(), ia = in.a().angle(), ic = in.c().angle();
  return (arc_inside(ia, m1, oa, l1, tol) && arc_inside(ic, m2, oc, l2, tol)) ||
         (arc_inside(ia, m1, oc, l2, tol) && arc_inside(ic, m2, oa, l1, tol));
}

bool GeodesicBox::meets(const GeodesicBox& o, double tol) const {
  double l1 = first_arc_length(), l2 = second_arc_length();
  double m1 = o.first_arc_length(), m2 = o.second_arc_length();
  double oa = a_.angle(), oc = c_.angle(), ia = o.a().angle(), ic = o.c().angle();
  return (arcs_meet(oa, l1, ia, m1, tol) && arcs_meet(oc, l2, ic, m2, tol)) ||
         (arcs_meet(oa, l1, ic, m2, tol) && arcs_meet(oc, l2, ia, m1, tol));
}

double GeodesicBox::first_arc_length() const {
  return flags_.point_ab ? 0.0 : ccw_distance(a_.angle(), b_.angle());
}

double GeodesicBox::second_arc_length() const {
  return flags_.point_cd ? 0.0 : ccw_distance(c_.angle(), d_.angle());
}

double cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                   const BoundaryPoint& d, double tol) {
  const BoundaryPoint* p[4] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (same_point(*p[i], *p[j], tol)) throw DegenerateQuadruple("cross ratio of coincident points");
  return detail::cross_ratio_raw(a, b, c, d);
}

double liouville(const GeodesicBox& q) {
  if (q.degenerate()) throw DegenerateBox("Liouville measure of a box with a point side");
  return std::abs(std::log(std::abs(cross_ratio(q.a(), q.b(), q.c(), q.d(), 0.0))));
}

GeodesicBox transform(const Mobius& m, const GeodesicBox& q) {
  return GeodesicBox(m.apply(q.a()), m.apply(q.b()), m.apply(q.c()), m.apply(q.d()), q.flags(), 0.0);
}

double omega0() { return 3.0 + 2.0 * std::sqrt(2.0); }

double log_two() { return std::log(2.0); }

GeodesicBox q_star() { return GeodesicBox::disk(1.5 * kPi, 0.0, 0.5 * kPi, kPi); }

GeodesicBox q_star_0() {
  return GeodesicBox::disk(13 * kPi / 8, 15 * kPi / 8, 5 * kPi / 8, 7 * kPi / 8);
}

Geodesic q_star_center() { return Geodesic::disk(1.75 * kPi, 0.75 * kPi); }

Mobius gamma_Q(const GeodesicBox& q, double tol_l) {
  double l = liouville(q);
  if (std::abs(l - log_two()) > tol_l) throw NotLogTwoBox("box Liouville measure is not log 2");
  GeodesicBox s = q_star().in_chart(q.chart());
  return mobius_from_triples({s.a(), s.b(), s.c()}, {q.a(), q.b(), q.c()}, 0.0).canonical_sign();
}

Geodesic box_center(const GeodesicBox& q, double tol_l) {
  return gamma_Q(q, tol_l).apply(q_star_center().in_chart(q.chart()));
}

Mobius center_frame(const Geodesic& center) {
  double x = center.a().angle(), y = center.b().angle();
  double len = ccw_distance(x, y);
  // alpha -> beta is the shorter counterclockwise arc; a tie keeps the smaller angle first.
  bool swap = len > kPi || (len == kPi && y < x);
  double alpha = swap ? y : x;
  double beta = swap ? x : y;
  double mid = alpha + 0.5 * ccw_distance(alpha, beta);
  Chart ch = center.chart();
  BoundaryPoint pa = swap ? center.b() : center.a();
  BoundaryPoint pb = swap ? center.a() : center.b();
  return mobius_from_triples(
      {BoundaryPoint::disk(1.75 * kPi).in_chart(ch), BoundaryPoint::disk(0.25 * kPi).in_chart(ch),
       BoundaryPoint::disk(0.75 * kPi).in_chart(ch)},
      {pa, BoundaryPoint::disk(mid).in_chart(ch), pb}, 0.0);
}

GeodesicBox log2_box_tau(const Geodesic& center, double tau) {
  Chart ch = center.chart();
  Mobius t = hyperbolic_translation(q_star_center().in_chart(Chart::HalfPlane), tau);
  GeodesicBox base = transform(t, q_star().in_chart(Chart::HalfPlane)).in_chart(ch);
  return transform(center_frame(center), base);
}

GeodesicBox log2_box_family(const Geodesic& center, double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error("log2_box_family: s must lie in (0, 1)");
  return log2_box_tau(center, std::log(s / (1.0 - s)));
}

GeodesicBox box_between(const Geodesic& g, const Geodesic& h) {
  auto [a, b, c, d] = detail::disjoint_order(g, h);
  BoxFlags f;
  f.point_ab = same_point(b, c);
  f.point_cd = same_point(d, a);
  return GeodesicBox(b, c, d, a, f, 0.0);
}

GeodesicBox inflate_to(const GeodesicBox& q, double target) {
  if (!q.degenerate() && liouville(q) >= target) return q;
  // Both arcs grow by delta at each end, so point sides open up as well.
  double a = q.a().angle(), c = q.c().angle();
  double l1 = q.first_arc_length(), l2 = q.second_arc_length();
  double gap_bc = ccw_distance(a + l1, c), gap_da = ccw_distance(c + l2, a);
  double dmax = 0.5 * std::min(gap_bc, gap_da);
  auto value = [&](double delta) {
    double cr = detail::cross_ratio_raw(
        BoundaryPoint::disk(a - delta), BoundaryPoint::disk(a + l1 + delta),
        BoundaryPoint::disk(c - delta), BoundaryPoint::disk(c + l2 + delta));
    return std::abs(std::log(std::abs(cr)));
  };
  double lo = 0.0, hi = dmax;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    double mid = 0.5 * (lo + hi);
    if (value(mid) < target) lo = mid;
    else hi = mid;
  }
  double delta = 0.5 * (lo + hi);
  return GeodesicBox::disk(a - delta, a + l1 + delta, c - delta, c + l2 + delta).in_chart(q.chart());
}

}  // namespace eql
