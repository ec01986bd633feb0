#include "eql/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eql/detail.hpp"

namespace eql {

namespace {

constexpr double kCollar = kPi / 8;

void check_nu(double nu) {
  if (!(nu > 0.0 && nu <= 1.0)) throw BadExponent("exponent nu must lie in (0, 1]");
}

// Angular distance from x to the counterclockwise arc [lo, lo + len].
double arc_distance(double x, double lo, double len) {
  if (ccw_distance(lo, x) <= len) return 0.0;
  return std::min(angle_distance(x, lo), angle_distance(x, lo + len));
}

// Quintic smoothstep on [0, 1]: C^2, flat at both ends.
double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (6.0 * u - 15.0));
}

double collar_value(double x, double y) {
  double dx = arc_distance(x, 13 * kPi / 8, kPi / 4), dy = arc_distance(y, 5 * kPi / 8, kPi / 4);
  if (dx >= kCollar || dy >= kCollar) return 0.0;
  return smoothstep(1.0 - dx / kCollar) * smoothstep(1.0 - dy / kCollar);
}

GeodesicBox disk_box(const GeodesicBox& q) { return q.chart() == Chart::Disk ? q : q.in_chart(Chart::Disk); }

// Below this corner separation, sampled differences of the field (or of the map)
// carry no significant digits, so such boxes are skipped.
constexpr double kMinCornerGap = 1e-5;  // rounding floor of the quotients is ~1e-15 / gap

bool resolvable(const GeodesicBox& q) {
  std::array<double, 4> t{q.a().angle(), q.b().angle(), q.c().angle(), q.d().angle()};
  for (int k = 0; k < 4; ++k)
    if (angle_distance(t[k], t[(k + 1) % 4]) < kMinCornerGap) return false;
  return true;
}

std::vector<Geodesic> circle_grid(int m) {
  std::vector<Geodesic> out;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) out.push_back(Geodesic::disk(kTwoPi * i / m, kTwoPi * j / m));
  return out;
}

}  // namespace

double phi0(const Geodesic& g) {
  double x = g.a().angle(), y = g.b().angle();
  return std::max(collar_value(x, y), collar_value(y, x));
}

double psi_scale(double nu) {
  check_nu(nu);
  return 1.0 / (std::pow(kPi / 2, 1.0 - nu) * kPhi0Norm1);
}

TestFunction make_test_function(const GeodesicBox& q, double nu) {
  check_nu(nu);
  GeodesicBox d = disk_box(q);
  Mobius g = gamma_Q(d);
  return TestFunction{d, g, g.inverse(), nu, psi_scale(nu), phi0};
}

HolderEstimate holder_norm(const Profile& f, double nu, const HolderOptions& opt) {
  check_nu(nu);
  HolderEstimate est;
  GeodesicBox focus = disk_box(opt.focus.value_or(q_star()));
  double a0 = focus.a().angle(), l1 = focus.first_arc_length();
  double c0 = focus.c().angle(), l2 = focus.second_arc_length();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](double lo, double len) { return lo - 0.25 * len + 1.5 * len * unit(rng); };
  auto jitter = [&] {
    double mag = std::pow(10.0, -5.0 + 5.0 * unit(rng)) * kCollar;
    return unit(rng) < 0.5 ? -mag : mag;
  };
  double best = 0.0;
  for (std::size_t k = 0; k < opt.pairs; ++k) {
    double x = pick(a0, l1), y = pick(c0, l2);
    double mode = unit(rng);
    double dx = mode < 0.67 ? jitter() : 0.0, dy = mode > 0.33 ? jitter() : 0.0;
    try {
      Geodesic g = Geodesic::disk(x, y), h = Geodesic::disk(x + dx, y + dy);
      double fg = f(g), fh = f(h);
      best = std::max({best, std::abs(fg), std::abs(fh)});
      double d = metric_geodesics(g, h);
      if (d > 0.0) best = std::max(best, std::abs(fg - fh) / std::pow(d, nu));
    } catch (const DegenerateGeodesic&) {
    }
  }
  est.lower = best;
  if (opt.lipschitz && opt.sup_abs) {
    double lip = *opt.lipschitz, sup = *opt.sup_abs;
    double osc = opt.oscillation.value_or(2.0 * sup);
    // sup over d in (0, pi] of min(lip d, osc) / d^nu
    double q = osc <= lip * kPi ? std::pow(lip, nu) * std::pow(osc, 1.0 - nu) : lip * std::pow(kPi, 1.0 - nu);
    est.upper = std::max(sup, q);
    est.comparison = std::pow(kPi / 2, 1.0 - nu) * std::max(sup, lip);
  }
  return est;
}

double audit_test_function(const TestFunction& tf, std::size_t pairs, std::uint64_t seed) {
  HolderOptions opt;
  opt.pairs = pairs;
  opt.seed = seed;
  return holder_norm([&tf](const Geodesic& g) { return tf.pulled_back(g); }, tf.nu, opt).lower;
}

double pairing(const LaminationOracle& l1, const LaminationOracle& l2, const Profile& profile,
               const GeodesicBox& q) {
  if (&l1 == &l2) return 0.0;
  GeodesicBox d = disk_box(q);
  Mobius inv = gamma_Q(d).inverse();
  GeodesicFunction f = [&](const Geodesic& g) { return profile(inv.apply(g)); };
  return l1.integrate_box(f, d) - l2.integrate_box(f, d);
}

BoxSearchResult pairing_sup(const LaminationOracle& l1, const LaminationOracle& l2, const Profile& profile,
                            const SearchBudget& budget, const std::vector<GeodesicBox>& extra) {
  if (&l1 == &l2) return {};
  std::vector<Geodesic> centers = l1.sample_leaves(budget.sample_leaves);
  for (const auto& g : l2.sample_leaves(budget.sample_leaves)) centers.push_back(g);
  std::vector<GeodesicBox> boxes = tau_sweep(centers, budget);
  boxes.insert(boxes.end(), extra.begin(), extra.end());
  auto f = [&](const GeodesicBox& q) { return std::abs(pairing(l1, l2, profile, q)); };
  return maximize_over_boxes(f, std::move(boxes), budget);
}

namespace {

// Atom-wise positive parts of l1 - l2 and l2 - l1.
std::pair<DiscreteLamination, DiscreteLamination> disagreement(const DiscreteLamination& l1,
                                                               const DiscreteLamination& l2) {
  auto part = [](const DiscreteLamination& p, const DiscreteLamination& q) {
    std::vector<WeightedLeaf> out;
    for (const auto& l : p.leaves()) {
      double w = l.w;
      for (const auto& m : q.leaves())
        if (same_geodesic(l.g, m.g)) w -= m.w;
      if (w > kAtomFloor) out.push_back({l.g, w});
    }
    return DiscreteLamination(out);
  };
  return {part(l1, l2), part(l2, l1)};
}

}  // namespace

FrechetResult frechet_norm(const LaminationOracle& l1, const LaminationOracle& l2, double nu,
                           const SearchBudget& budget, const std::vector<GeodesicBox>& extra) {
  double scale = psi_scale(nu);
  FrechetResult res;
  if (&l1 == &l2) return res;
  BoxSearchResult found = pairing_sup(l1, l2, phi0, budget, extra);
  res.lower = scale * found.value;
  res.witness = found.witness;
  res.evaluations = found.evaluations;
  res.budget_exhausted = found.budget_exhausted;
  const auto *d1 = l1.as_discrete(), *d2 = l2.as_discrete();
  if (d1 && d2) {
    auto [p, q] = disagreement(*d1, *d2);
    res.upper = box_sup(p, budget).value + box_sup(q, budget).value;
    res.upper_certified = true;
  } else {
    BoxSupResult s1 = box_sup(l1, budget), s2 = box_sup(l2, budget);
    res.upper = s1.value + s2.value;
    res.budget_exhausted = res.budget_exhausted || s1.budget_exhausted || s2.budget_exhausted;
  }
  res.upper = std::max(res.upper, res.lower);
  return res;
}

BoxSearchResult uweak_distance(const LaminationOracle& l1, const LaminationOracle& l2, const Profile& f,
                               const SearchBudget& budget) {
  return pairing_sup(l1, l2, f, budget);
}

const StarCover& q_star_cover() {
  static const StarCover cover = [] {
    StarCover c;
    GeodesicBox qs = q_star(), q0 = q_star_0();
    double target = liouville(q0);
    double a0 = qs.a().angle(), c0 = qs.c().angle();
    double l1 = qs.first_arc_length(), l2 = qs.second_arc_length();
    for (int k = 1;; ++k) {
      std::vector<GeodesicBox> cells;
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        for (int j = 0; j < k && ok; ++j) {
          GeodesicBox cell = GeodesicBox::disk(a0 + l1 * i / k, a0 + l1 * (i + 1) / k, c0 + l2 * j / k,
                                               c0 + l2 * (j + 1) / k);
          if (liouville(cell) > target) ok = false;
          cells.push_back(cell);
        }
      }
      if (!ok) continue;
      c.divisions = k;
      c.cells = cells;
      for (const auto& cell : cells) {
        GeodesicBox big = inflate_to(cell, target);
        c.maps.push_back(mobius_from_triples({q0.a(), q0.b(), q0.c()}, {big.a(), big.b(), big.c()}));
      }
      return c;
    }
  }();
  return cover;
}

double box_frechet_constant(double nu) { return double(q_star_cover().cells.size()) / psi_scale(nu); }

std::vector<GeodesicBox> cover_seeds(const GeodesicBox& q) {
  Mobius g = gamma_Q(disk_box(q));
  std::vector<GeodesicBox> out;
  for (const auto& m : q_star_cover().maps) out.push_back(transform(g * m, q_star()));
  return out;
}

// ---------------------------------------------------------------------------
// Vector fields

CircleVectorField CircleVectorField::angular(std::function<double(double)> v) { return CircleVectorField(std::move(v)); }

CircleVectorField CircleVectorField::half_plane(std::function<double(double)> v, double at_infinity) {
  return CircleVectorField([v = std::move(v), at_infinity](double theta) {
    theta = wrap_angle(theta);
    if (theta == 0.0) return at_infinity;
    double x = -1.0 / std::tan(0.5 * theta);
    return v(x) * 2.0 / (1.0 + x * x);
  });
}

double CircleVectorField::angular_value(double theta) const { return v_(theta); }

Complex CircleVectorField::disk_value(double theta) const {
  return Complex(0, 1) * std::polar(1.0, theta) * v_(theta);
}

double CircleVectorField::half_plane_value(double x) const {
  return v_(BoundaryPoint::real(x).angle()) * (1.0 + x * x) / 2.0;
}

CircleVectorField CircleVectorField::operator+(const CircleVectorField& o) const {
  return CircleVectorField([p = v_, q = o.v_](double t) { return p(t) + q(t); });
}

CircleVectorField CircleVectorField::scaled(double c) const {
  return CircleVectorField([p = v_, c](double t) { return c * p(t); });
}

double cross_ratio_term(const CircleVectorField& v, const GeodesicBox& q) {
  std::array<double, 4> th{q.a().angle(), q.b().angle(), q.c().angle(), q.d().angle()};
  std::array<Complex, 4> z, V;
  for (int k = 0; k < 4; ++k) {
    z[k] = std::polar(1.0, th[k]);
    double s = v.angular_value(th[k]);
    if (!std::isfinite(s)) throw NonFinite("vector field returned a non-finite value");
    V[k] = Complex(0, 1) * z[k] * s;
  }
  auto dq = [&](int i, int j) { return (V[i] - V[j]) / (z[i] - z[j]); };
  return std::real(dq(0, 2) + dq(1, 3) - dq(0, 3) - dq(1, 2));
}

BoxSearchResult crossratio_norm(const CircleVectorField& v, const SearchBudget& budget,
                                const CrossRatioOptions& opt) {
  std::vector<Geodesic> centers = circle_grid(opt.center_grid);
  centers.insert(centers.end(), opt.centers.begin(), opt.centers.end());
  auto f = [&v](const GeodesicBox& q) { return resolvable(q) ? std::abs(cross_ratio_term(v, q)) : 0.0; };
  return maximize_over_boxes(f, tau_sweep(centers, budget), budget);
}

double zygmund_norm(const CircleVectorField& v, const ZygmundGrid& grid) {
  double v0 = v.angular_value(0.0), v1 = v.angular_value(0.5 * kPi), v2 = v.angular_value(kPi);
  double p = 0.5 * (v0 + v2), q = 0.5 * (v0 - v2), r = v1 - p;
  auto w = [&](double th) { return v.angular_value(th) - (p + q * std::cos(th) + r * std::sin(th)); };
  double best = 0.0;
  for (int j = 0; j < grid.scales; ++j) {
    double u = grid.scales == 1 ? 0.0 : double(j) / (grid.scales - 1);
    double t = std::exp(std::log(grid.t_min) + u * (std::log(grid.t_max) - std::log(grid.t_min)));
    Complex ep = std::polar(1.0, t), em = std::conj(ep);
    for (int k = 0; k < grid.points; ++k) {
      double x = kTwoPi * k / grid.points;
      Complex s = ep * w(x + t) + em * w(x - t) - 2.0 * w(x);
      best = std::max(best, std::abs(s) / t);
    }
  }
  return best;
}

namespace {

// Liouville measure from corner angles; chords as sines of half differences
// keep digits when the corners cluster.
double liouville_angles(double a, double b, double c, double d) {
  auto chord = [](double x, double y) { return std::abs(std::sin(0.5 * (x - y))); };
  double num = chord(a, c) * chord(b, d), den = chord(a, d) * chord(b, c);
  if (num == 0.0 || den == 0.0) throw DegenerateQuadruple("box corners coincide");
  return std::abs(std::log(num / den));
}

}  // namespace

double box_distortion(const CircleMap& h, const GeodesicBox& q) {
  double l0 = liouville_angles(q.a().angle(), q.b().angle(), q.c().angle(), q.d().angle());
  double l1 = liouville_angles(h(q.a()).angle(), h(q.b()).angle(), h(q.c()).angle(), h(q.d()).angle());
  // l0 is log 2 up to the rounding of the corners themselves
  return std::abs(l1 - l0);
}

BoxSearchResult qs_distortion(const CircleMap& h, const SearchBudget& budget, const CrossRatioOptions& opt) {
  std::vector<Geodesic> centers = circle_grid(opt.center_grid);
  centers.insert(centers.end(), opt.centers.begin(), opt.centers.end());
  auto f = [&h](const GeodesicBox& q) {
    if (!resolvable(q)) return 0.0;
    std::array<double, 4> t{h(q.a()).angle(), h(q.b()).angle(), h(q.c()).angle(), h(q.d()).angle()};
    for (int k = 0; k < 4; ++k)
      if (angle_distance(t[k], t[(k + 1) % 4]) < kMinCornerGap) return 0.0;
    return box_distortion(h, q);
  };
  return maximize_over_boxes(f, tau_sweep(centers, budget), budget);
}

double qs_constant(const CircleMap& h, const QsGrid& grid) {
  double best = 1.0;
  for (int j = 0; j < grid.scales; ++j) {
    double u = grid.scales == 1 ? 0.0 : double(j) / (grid.scales - 1);
    double t = std::exp(std::log(grid.t_min) + u * (std::log(kPi / 2) - std::log(grid.t_min)));
    for (int k = 0; k < grid.points; ++k) {
      double x = kTwoPi * k / grid.points;
      double p = h(BoundaryPoint::disk(x - t)).angle(), m = h(BoundaryPoint::disk(x)).angle();
      double n = h(BoundaryPoint::disk(x + t)).angle();
      double r = ccw_distance(p, m) / ccw_distance(m, n);
      best = std::max({best, r, 1.0 / r});
    }
  }
  return best;
}

}  // namespace eql
