#include "eql/laminations.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

namespace eql {

namespace {

const GeodesicFunction kOne = [](const Geodesic&) { return 1.0; };

bool holds(const GeodesicPredicate& pred, const Geodesic& g) { return !pred || pred(g); }

GeodesicPredicate both(const GeodesicPredicate& p, const GeodesicPredicate& q) {
  if (!p) return q;
  if (!q) return p;
  return [p, q](const Geodesic& g) { return p(g) && q(g); };
}

}  // namespace

double LaminationOracle::integrate_box(const GeodesicFunction& f, const GeodesicBox& q) const {
  return integrate_where(f, [&q](const Geodesic& g) { return q.contains(g); });
}

double LaminationOracle::box_mass(const GeodesicBox& q) const { return integrate_box(kOne, q); }

double LaminationOracle::mass_where(const GeodesicPredicate& pred) const {
  return integrate_where(kOne, pred);
}

std::pair<double, double> chain_key(const GeodesicBox& q, const Geodesic& g) {
  bool a_first = q.first_arc_contains(g.a());
  const BoundaryPoint& x = a_first ? g.a() : g.b();
  const BoundaryPoint& y = a_first ? g.b() : g.a();
  auto offset = [](const BoundaryPoint& from, const BoundaryPoint& p) {
    if (same_point(from, p)) return 0.0;
    return ccw_distance(from.angle(), p.angle());
  };
  return {offset(q.a(), x), -offset(q.c(), y)};
}

std::vector<Geodesic> LaminationOracle::peaks_in(const GeodesicBox& q) const {
  std::vector<Geodesic> cand = extremes_where([&q](const Geodesic& g) { return q.contains(g); });
  if (cand.empty()) return {};
  auto less = [&q](const Geodesic& g, const Geodesic& h) { return chain_key(q, g) < chain_key(q, h); };
  auto [lo, hi] = std::minmax_element(cand.begin(), cand.end(), less);
  if (same_geodesic(*lo, *hi)) return {*lo};
  return {*lo, *hi};
}

std::optional<Geodesic> LaminationOracle::some_leaf_in(const GeodesicBox& q) const {
  auto p = peaks_in(q);
  if (p.empty()) return std::nullopt;
  return p.front();
}

// ---------------------------------------------------------------------------
// DiscreteLamination

DiscreteLamination::DiscreteLamination(std::vector<WeightedLeaf> leaves) {
  for (const auto& l : leaves) {
    if (!(l.w > 0) || !std::isfinite(l.w)) throw Error("leaf weights must be positive and finite");
  }
  auto span = [](const Geodesic& g) {
    double x = g.a().angle(), y = g.b().angle();
    return std::make_pair(std::min(x, y), std::max(x, y));
  };
  std::sort(leaves.begin(), leaves.end(), [&](const WeightedLeaf& p, const WeightedLeaf& q) {
    auto sp = span(p.g), sq = span(q.g);
    if (sp.first != sq.first) return sp.first < sq.first;
    return sp.second > sq.second;
  });
  for (auto& l : leaves) {
    if (!leaves_.empty() && same_geodesic(leaves_.back().g, l.g)) {
      leaves_.back().w += l.w;
    } else {
      leaves_.push_back(l);
    }
  }
  std::erase_if(leaves_, [](const WeightedLeaf& l) { return l.w < kAtomFloor; });
  // Laminar check on [0, 2pi): nested or disjoint spans only.
  const double tol = 1e-12;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    auto si = span(leaves_[i].g);
    while (!stack.empty() && span(leaves_[stack.back()].g).second <= si.first + tol) stack.pop_back();
    if (!stack.empty() && si.second > span(leaves_[stack.back()].g).second + tol)
      throw CrossingLeaves("leaves " + std::to_string(stack.back()) + " and " + std::to_string(i) +
                           " cross");
    stack.push_back(i);
  }
}

DiscreteLamination DiscreteLamination::scaled(double c) const {
  if (c == 0.0) return {};
  auto copy = leaves_;
  for (auto& l : copy) l.w *= c;
  return DiscreteLamination(std::move(copy));
}

DiscreteLamination DiscreteLamination::operator+(const DiscreteLamination& o) const {
  auto copy = leaves_;
  copy.insert(copy.end(), o.leaves_.begin(), o.leaves_.end());
  return DiscreteLamination(std::move(copy));
}

bool DiscreteLamination::has_leaf(const Geodesic& g, double tol) const {
  return std::any_of(leaves_.begin(), leaves_.end(),
                     [&](const WeightedLeaf& l) { return same_geodesic(l.g, g, tol); });
}

double DiscreteLamination::integrate_where(const GeodesicFunction& f,
                                           const GeodesicPredicate& pred) const {
  double s = 0.0;
  for (const auto& l : leaves_)
    if (holds(pred, l.g)) s += l.w * f(l.g);
  return s;
}

double DiscreteLamination::box_mass(const GeodesicBox& q) const {
  double s = 0.0;
  for (const auto& l : leaves_)
    if (q.contains(l.g)) s += l.w;
  return s;
}

std::vector<WeightedLeaf> DiscreteLamination::atoms_in(const GeodesicBox& q) const {
  std::vector<WeightedLeaf> out;
  for (const auto& l : leaves_)
    if (q.contains(l.g)) out.push_back(l);
  return out;
}

std::vector<Geodesic> DiscreteLamination::extremes_where(const GeodesicPredicate& pred) const {
  std::vector<Geodesic> out;
  for (const auto& l : leaves_)
    if (holds(pred, l.g)) out.push_back(l.g);
  return out;
}

std::optional<GeodesicBox> DiscreteLamination::support_window() const {
  if (leaves_.empty()) return std::nullopt;
  std::vector<double> ends;
  for (const auto& l : leaves_) {
    ends.push_back(l.g.a().angle());
    ends.push_back(l.g.b().angle());
  }
  std::sort(ends.begin(), ends.end());
  // Cut points p sit in the gaps between endpoints; every leaf must separate p from some q.
  for (std::size_t k = 0; k < ends.size(); ++k) {
    double lo = ends[k], hi = k + 1 < ends.size() ? ends[k + 1] : ends[0] + kTwoPi;
    if (hi - lo < 1e-9) continue;
    double p = 0.5 * (lo + hi);
    double max_u1 = 0, min_u1 = kTwoPi, max_u2 = 0, min_u2 = kTwoPi;
    for (const auto& l : leaves_) {
      double u = ccw_distance(p, l.g.a().angle()), v = ccw_distance(p, l.g.b().angle());
      double u1 = std::min(u, v), u2 = std::max(u, v);
      max_u1 = std::max(max_u1, u1);
      min_u1 = std::min(min_u1, u1);
      max_u2 = std::max(max_u2, u2);
      min_u2 = std::min(min_u2, u2);
    }
    if (min_u2 - max_u1 <= 1e-12) continue;
    BoxFlags f;
    f.point_ab = max_u1 - min_u1 <= 1e-12;
    f.point_cd = max_u2 - min_u2 <= 1e-12;
    return GeodesicBox::disk(p + min_u1, p + max_u1, p + min_u2, p + max_u2, f);
  }
  return std::nullopt;
}

std::vector<Geodesic> DiscreteLamination::sample_leaves(std::size_t max_count) const {
  std::vector<Geodesic> out;
  if (max_count == 0) return out;
  std::size_t n = leaves_.size();
  if (n <= max_count) {
    for (const auto& l : leaves_) out.push_back(l.g);
    return out;
  }
  for (std::size_t k = 0; k < max_count; ++k) out.push_back(leaves_[k * n / max_count].g);
  return out;
}

double DiscreteLamination::total_mass() const {
  double s = 0.0;
  for (const auto& l : leaves_) s += l.w;
  return s;
}

OraclePtr DiscreteLamination::continuous_part() const {
  return std::make_shared<DiscreteLamination>();
}

DiscreteLamination pullback(const Mobius& gamma, const DiscreteLamination& lambda) {
  Mobius inv = gamma.inverse();
  std::vector<WeightedLeaf> out;
  for (const auto& l : lambda.leaves()) out.push_back({inv.apply(l.g), l.w});
  return DiscreteLamination(std::move(out));
}

// ---------------------------------------------------------------------------
// BandLamination

double Polynomial::operator()(double t) const {
  double s = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * t + *it;
  return s;
}

double Polynomial::derivative(double t) const {
  double s = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) s = s * t + double(k) * coeffs[k];
  return s;
}

BandLamination::BandLamination(Polynomial alpha, Polynomial beta, Polynomial rho, double tol_q)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), rho_(std::move(rho)), tol_q_(tol_q) {
  if (alpha_.coeffs.empty() || beta_.coeffs.empty() || rho_.coeffs.empty())
    throw InvalidBand("band specs need at least one coefficient");
  const int grid = 46;  // 1035 leaf pairs
  int sa = 0, sb = 0;
  for (int i = 0; i <= 4 * grid; ++i) {
    double t = double(i) / (4 * grid);
    if (rho_(t) < -1e-14) throw InvalidBand("band density is negative");
    double da = alpha_.derivative(t), db = beta_.derivative(t);
    int ka = da > 0 ? 1 : (da < 0 ? -1 : 0), kb = db > 0 ? 1 : (db < 0 ? -1 : 0);
    if ((ka && sa && ka != sa) || (kb && sb && kb != sb))
      throw InvalidBand("band endpoint functions must be monotone");
    if (ka) sa = ka;
    if (kb) sb = kb;
    if (angle_distance(alpha_(t), beta_(t)) < 1e-9) throw InvalidBand("band leaf degenerates");
  }
  if (std::abs(alpha_(1) - alpha_(0)) >= kTwoPi || std::abs(beta_(1) - beta_(0)) >= kTwoPi)
    throw InvalidBand("band endpoints wind around the circle");
  std::vector<Geodesic> g;
  for (int i = 0; i < grid; ++i) g.push_back(leaf(double(i) / (grid - 1)));
  for (int i = 0; i < grid; ++i)
    for (int j = i + 1; j < grid; ++j)
      if (geodesics_cross(g[i], g[j])) throw InvalidBand("band leaves cross");
}

BandLamination BandLamination::fixture() {
  return BandLamination({{1.0, 1.0}, "affine"}, {{5.0, -1.0}, "affine"}, {{1.0}, "polynomial"});
}

Geodesic BandLamination::leaf(double t) const { return Geodesic::disk(alpha_(t), beta_(t)); }

double BandLamination::mass_between(double t0, double t1) const {
  return integrate_parameter(kOne, {{t0, t1}});
}

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

// Kronrod sums of the two halves against the parent's. Boost's own estimate is
// the Gauss-Kronrod gap, which tracks the Gauss rule and never meets small
// tolerances on narrow bumps.
template <class F>
double bisect_kronrod(const F& f, double a, double b, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double l = Rule::integrate(f, a, m, 0, 0.0), r = Rule::integrate(f, m, b, 0, 0.0);
  double floor = 1e-14 * (std::abs(l) + std::abs(r));
  if (std::abs(l + r - whole) <= std::max(tol, floor) || depth >= 30) return l + r;
  return bisect_kronrod(f, a, m, l, 0.5 * tol, depth + 1) + bisect_kronrod(f, m, b, r, 0.5 * tol, depth + 1);
}

}  // namespace

double BandLamination::integrate_parameter(const GeodesicFunction& f,
                                           const std::vector<Interval>& set) const {
  double s = 0.0;
  for (auto [lo, hi] : set) {
    if (!(hi > lo)) continue;
    auto integrand = [&](double t) { return f(leaf(t)) * rho_(t); };
    double whole = Rule::integrate(integrand, lo, hi, 0, 0.0);
    s += bisect_kronrod(integrand, lo, hi, whole, tol_q_, 0);
  }
  return s;
}

std::vector<Interval> BandLamination::parameter_set(const GeodesicPredicate& pred) const {
  if (!pred) return {{0.0, 1.0}};
  const int n = 256;
  std::vector<char> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = pred(leaf(double(i) / n));
  // boundary between t_in (pred true) and t_out (false)
  auto refine = [&](double t_in, double t_out) {
    for (int it = 0; it < 60; ++it) {
      double m = 0.5 * (t_in + t_out);
      if (pred(leaf(m))) t_in = m;
      else t_out = m;
    }
    return t_in;
  };
  std::vector<Interval> out;
  int i = 0;
  while (i <= n) {
    if (!v[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 <= n && v[j + 1]) ++j;
    double lo = i == 0 ? 0.0 : refine(double(i) / n, double(i - 1) / n);
    double hi = j == n ? 1.0 : refine(double(j) / n, double(j + 1) / n);
    out.push_back({lo, hi});
    i = j + 1;
  }
  return out;
}

std::vector<Interval> BandLamination::preimage(const Polynomial& p, double from, double len) const {
  double p0 = p(0.0), p1 = p(1.0);
  double lo = std::min(p0, p1), hi = std::max(p0, p1);
  bool increasing = p1 >= p0;
  auto inverse = [&](double v) {
    if (v <= lo) return increasing ? 0.0 : 1.0;
    if (v >= hi) return increasing ? 1.0 : 0.0;
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 80; ++it) {
      double m = 0.5 * (a + b);
      if ((p(m) < v) == increasing) a = m;
      else b = m;
    }
    return 0.5 * (a + b);
  };
  std::vector<Interval> out;
  double base = from - kTwoPi * std::floor((from - lo) / kTwoPi);  // lift with base >= lo
  for (int k = -2; k <= 1; ++k) {
    double s = base + k * kTwoPi, e = s + len;
    double cs = std::max(s, lo), ce = std::min(e, hi);
    if (ce < cs) continue;
    double t0 = inverse(cs), t1 = inverse(ce);
    out.push_back({std::min(t0, t1), std::max(t0, t1)});
  }
  return out;
}

namespace {

std::vector<Interval> intersect(const std::vector<Interval>& x, const std::vector<Interval>& y) {
  std::vector<Interval> out;
  for (auto [a, b] : x)
    for (auto [c, d] : y) {
      double lo = std::max(a, c), hi = std::min(b, d);
      if (hi >= lo) out.push_back({lo, hi});
    }
  return out;
}

}  // namespace

std::vector<Interval> BandLamination::box_parameter_set(const GeodesicBox& q) const {
  double a = q.a().angle(), c = q.c().angle();
  double l1 = q.first_arc_length(), l2 = q.second_arc_length();
  auto s1 = intersect(preimage(alpha_, a, l1), preimage(beta_, c, l2));
  auto s2 = intersect(preimage(alpha_, c, l2), preimage(beta_, a, l1));
  s1.insert(s1.end(), s2.begin(), s2.end());
  std::sort(s1.begin(), s1.end());
  return s1;
}

double BandLamination::integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const {
  return integrate_parameter(f, parameter_set(pred));
}

double BandLamination::integrate_box(const GeodesicFunction& f, const GeodesicBox& q) const {
  return integrate_parameter(f, box_parameter_set(q));
}

double BandLamination::box_mass(const GeodesicBox& q) const { return integrate_box(kOne, q); }

std::vector<Geodesic> BandLamination::extremes_where(const GeodesicPredicate& pred) const {
  std::vector<Geodesic> out;
  for (auto [lo, hi] : parameter_set(pred)) {
    out.push_back(leaf(lo));
    if (hi > lo) out.push_back(leaf(hi));
  }
  return out;
}

std::vector<Geodesic> BandLamination::peaks_in(const GeodesicBox& q) const {
  auto set = box_parameter_set(q);
  std::vector<Geodesic> cand;
  for (auto [lo, hi] : set) {
    // the preimage ends may sit a rounding step outside the closed box
    for (double t : {lo, hi}) {
      Geodesic g = leaf(t);
      if (q.contains(g, 1e-10)) cand.push_back(g);
    }
  }
  if (cand.empty()) return {};
  auto less = [&q](const Geodesic& g, const Geodesic& h) { return chain_key(q, g) < chain_key(q, h); };
  auto [lo, hi] = std::minmax_element(cand.begin(), cand.end(), less);
  if (same_geodesic(*lo, *hi)) return {*lo};
  return {*lo, *hi};
}

std::optional<GeodesicBox> BandLamination::support_window() const {
  double a0 = alpha_(0), a1 = alpha_(1), b0 = beta_(0), b1 = beta_(1);
  double alo = std::min(a0, a1), ahi = std::max(a0, a1), blo = std::min(b0, b1), bhi = std::max(b0, b1);
  BoxFlags f;
  f.point_ab = ahi - alo <= 1e-12;
  f.point_cd = bhi - blo <= 1e-12;
  try {
    return GeodesicBox::disk(alo, ahi, blo, bhi, f);
  } catch (const DegenerateBox&) {
  }
  BoxFlags g;
  g.point_ab = f.point_cd;
  g.point_cd = f.point_ab;
  try {
    return GeodesicBox::disk(blo, bhi, alo, ahi, g);
  } catch (const DegenerateBox&) {
  }
  return std::nullopt;
}

std::vector<Geodesic> BandLamination::sample_leaves(std::size_t max_count) const {
  std::vector<Geodesic> out;
  if (max_count == 1) return {leaf(0.5)};
  for (std::size_t k = 0; k < max_count; ++k) out.push_back(leaf(double(k) / double(max_count - 1)));
  return out;
}

double BandLamination::total_mass() const { return mass_between(0.0, 1.0); }

OraclePtr BandLamination::continuous_part() const { return std::make_shared<BandLamination>(*this); }

// ---------------------------------------------------------------------------
// Segments and derived oracles

bool crosses(const Geodesic& g, const Segment& s) {
  int s1 = side_of(g, s.start);
  int s2 = std::visit([&g](const auto& e) { return side_of(g, e); }, s.end);
  return s1 * s2 <= 0;
}

FilteredOracle::FilteredOracle(OraclePtr base, GeodesicPredicate keep)
    : base_(std::move(base)), keep_(std::move(keep)) {}

double FilteredOracle::integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const {
  return base_->integrate_where(f, both(pred, keep_));
}

std::vector<WeightedLeaf> FilteredOracle::atoms_in(const GeodesicBox& q) const {
  auto all = base_->atoms_in(q);
  std::erase_if(all, [this](const WeightedLeaf& l) { return !keep_(l.g); });
  return all;
}

std::vector<Geodesic> FilteredOracle::extremes_where(const GeodesicPredicate& pred) const {
  return base_->extremes_where(both(pred, keep_));
}

std::vector<Geodesic> FilteredOracle::sample_leaves(std::size_t max_count) const {
  auto all = base_->sample_leaves(max_count);
  std::erase_if(all, [this](const Geodesic& g) { return !keep_(g); });
  return all;
}

double FilteredOracle::total_mass() const { return base_->integrate_where(kOne, keep_); }

OraclePtr FilteredOracle::continuous_part() const {
  return std::make_shared<FilteredOracle>(base_->continuous_part(), keep_);
}

PullbackOracle::PullbackOracle(Mobius gamma, OraclePtr base)
    : gamma_(gamma), inverse_(gamma.inverse()), base_(std::move(base)) {}

double PullbackOracle::integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const {
  GeodesicFunction fb = [this, f](const Geodesic& g) { return f(inverse_.apply(g)); };
  GeodesicPredicate pb;
  if (pred) pb = [this, pred](const Geodesic& g) { return pred(inverse_.apply(g)); };
  return base_->integrate_where(fb, pb);
}

double PullbackOracle::box_mass(const GeodesicBox& q) const { return base_->box_mass(transform(gamma_, q)); }

std::vector<WeightedLeaf> PullbackOracle::atoms_in(const GeodesicBox& q) const {
  auto all = base_->atoms_in(transform(gamma_, q));
  for (auto& l : all) l.g = inverse_.apply(l.g);
  return all;
}

std::vector<Geodesic> PullbackOracle::extremes_where(const GeodesicPredicate& pred) const {
  GeodesicPredicate pb;
  if (pred) pb = [this, pred](const Geodesic& g) { return pred(inverse_.apply(g)); };
  auto all = base_->extremes_where(pb);
  for (auto& g : all) g = inverse_.apply(g);
  return all;
}

std::optional<GeodesicBox> PullbackOracle::support_window() const {
  auto w = base_->support_window();
  if (!w) return std::nullopt;
  return transform(inverse_, *w);
}

std::vector<Geodesic> PullbackOracle::sample_leaves(std::size_t max_count) const {
  auto all = base_->sample_leaves(max_count);
  for (auto& g : all) g = inverse_.apply(g);
  return all;
}

OraclePtr PullbackOracle::continuous_part() const {
  return std::make_shared<PullbackOracle>(gamma_, base_->continuous_part());
}

OraclePtr pullback(const Mobius& gamma, OraclePtr lambda) {
  if (const auto* d = lambda->as_discrete()) return std::make_shared<DiscreteLamination>(pullback(gamma, *d));
  return std::make_shared<PullbackOracle>(gamma, std::move(lambda));
}

OraclePtr restrict(OraclePtr lambda, const Segment& segment) {
  return std::make_shared<FilteredOracle>(std::move(lambda),
                                          [segment](const Geodesic& g) { return crosses(g, segment); });
}

SumOracle::SumOracle(std::vector<OraclePtr> parts) : parts_(std::move(parts)) {}

double SumOracle::integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const {
  double s = 0.0;
  for (const auto& p : parts_) s += p->integrate_where(f, pred);
  return s;
}

double SumOracle::integrate_box(const GeodesicFunction& f, const GeodesicBox& q) const {
  double s = 0.0;
  for (const auto& p : parts_) s += p->integrate_box(f, q);
  return s;
}

double SumOracle::box_mass(const GeodesicBox& q) const {
  double s = 0.0;
  for (const auto& p : parts_) s += p->box_mass(q);
  return s;
}

std::vector<WeightedLeaf> SumOracle::atoms_in(const GeodesicBox& q) const {
  std::vector<WeightedLeaf> out;
  for (const auto& p : parts_) {
    auto a = p->atoms_in(q);
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

std::vector<Geodesic> SumOracle::extremes_where(const GeodesicPredicate& pred) const {
  std::vector<Geodesic> out;
  for (const auto& p : parts_) {
    auto a = p->extremes_where(pred);
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

std::optional<GeodesicBox> SumOracle::support_window() const {
  std::vector<GeodesicBox> windows;
  for (const auto& p : parts_) {
    if (p->total_mass() <= 0.0) continue;
    auto w = p->support_window();
    if (!w) return std::nullopt;
    windows.push_back(*w);
  }
  for (const auto& w : windows) {
    bool all = std::all_of(windows.begin(), windows.end(),
                           [&w](const GeodesicBox& o) { return w.contains_box(o, 1e-12); });
    if (all) return w;
  }
  return std::nullopt;
}

std::vector<Geodesic> SumOracle::sample_leaves(std::size_t max_count) const {
  std::vector<Geodesic> out;
  for (const auto& p : parts_) {
    auto a = p->sample_leaves(max_count);
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

double SumOracle::total_mass() const {
  double s = 0.0;
  for (const auto& p : parts_) s += p->total_mass();
  return s;
}

OraclePtr SumOracle::continuous_part() const {
  std::vector<OraclePtr> c;
  for (const auto& p : parts_) c.push_back(p->continuous_part());
  return std::make_shared<SumOracle>(std::move(c));
}

}  // namespace eql
