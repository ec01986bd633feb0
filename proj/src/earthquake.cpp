#include "eql/earthquake.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace eql {

namespace {

constexpr double kArcTol = 1e-12;

using Wide = std::array<long double, 4>;

Wide wide_mul(const Wide& p, const Wide& q) {
  return {p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2],
          p[2] * q[1] + p[3] * q[3]};
}

// det is 1 up to rounding
Wide wide_inverse(const Wide& p) { return {p[3], -p[1], -p[2], p[0]}; }

Mobius narrow(const Wide& p) { return Mobius(double(p[0]), double(p[1]), double(p[2]), double(p[3])); }

// Translation along the oriented axis by t, as in hyperbolic_translation.
Wide wide_translation(const Geodesic& axis, double t) {
  BoundaryPoint p = axis.a().to_half_plane(), q = axis.b().to_half_plane();
  long double ch = std::cosh((long double)t / 2), sh = std::sinh((long double)t / 2);
  if (q.is_infinity()) return {ch + sh, -2 * sh * p.value(), 0, ch - sh};
  if (p.is_infinity()) return {ch - sh, 2 * sh * q.value(), 0, ch + sh};
  long double x = p.value(), y = q.value(), k = 1 / (y - x);
  return {ch + (y + x) * k * sh, -2 * x * y * k * sh, 2 * k * sh, ch - (y + x) * k * sh};
}

BoundaryPoint midpoint_ccw(const BoundaryPoint& from, const BoundaryPoint& to) {
  double len = ccw_distance(from.angle(), to.angle());
  if (len <= 0.0) len = kTwoPi;
  return BoundaryPoint::disk(from.angle() + 0.5 * len);
}

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseMobius

PiecewiseMobius::PiecewiseMobius(std::vector<MobiusPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error("piecewise map needs at least one piece");
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& next = pieces_[(k + 1) % pieces_.size()];
    if (!same_point(pieces_[k].to, next.from, 1e-12))
      throw Error("piecewise map: piece " + std::to_string(k) + " does not end where the next begins");
  }
  double total = 0.0;
  for (const auto& p : pieces_) {
    double len = ccw_distance(p.from.angle(), p.to.angle());
    total += pieces_.size() == 1 && len == 0.0 ? kTwoPi : len;
  }
  if (std::abs(total - kTwoPi) > 1e-9) throw Error("piecewise map: pieces do not wind once around the circle");
}

std::size_t PiecewiseMobius::piece_index(const BoundaryPoint& x) const {
  if (pieces_.size() == 1) return 0;
  double start = pieces_[0].from.angle();
  double off = ccw_distance(start, x.angle());
  if (off > kTwoPi - kArcTol) off = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    acc += ccw_distance(pieces_[k].from.angle(), pieces_[k].to.angle());
    if (off < acc - kArcTol) return k;
  }
  return pieces_.size() - 1;
}

BoundaryPoint PiecewiseMobius::operator()(const BoundaryPoint& x) const {
  return pieces_[piece_index(x)].map.apply(x);
}

PiecewiseMobius PiecewiseMobius::post_compose(const Mobius& m) const {
  auto p = pieces_;
  for (auto& q : p) q.map = m * q.map;
  return PiecewiseMobius(std::move(p));
}

PiecewiseMobius PiecewiseMobius::pre_compose(const Mobius& m) const {
  Mobius inv = m.inverse();
  std::vector<MobiusPiece> p;
  for (const auto& q : pieces_) p.push_back({inv.apply(q.from), inv.apply(q.to), q.map * m});
  return PiecewiseMobius(std::move(p));
}

PiecewiseMobius PiecewiseMobius::normalized() const { return post_compose(normalizer(as_function())); }

CircleMap PiecewiseMobius::as_function() const {
  auto self = *this;
  return [self](const BoundaryPoint& x) { return self(x); };
}

Mobius normalizer(const CircleMap& h) {
  using BP = BoundaryPoint;
  std::array<BP, 3> fixed{BP::disk(0.0), BP::disk(0.5 * kPi), BP::disk(kPi)};
  std::array<BP, 3> img{h(fixed[0]).to_disk(), h(fixed[1]).to_disk(), h(fixed[2]).to_disk()};
  return mobius_from_triples(img, fixed);
}

// ---------------------------------------------------------------------------
// FiniteEarthquake

FiniteEarthquake::FiniteEarthquake(DiscreteLamination lambda, Complex base_point)
    : lambda_(std::move(lambda)), base_(base_point) {
  const auto& L = lambda_.leaves();
  const std::size_t n = L.size();
  if (n > kMaxEarthquakeLeaves) throw Error("earthquake: more than " + std::to_string(kMaxEarthquakeLeaves) + " leaves");
  if (!(base_.imag() > 0)) throw Error("earthquake: base point must lie in the upper half-plane");
  std::vector<double> start(n), len(n);
  for (std::size_t i = 0; i < n; ++i) {
    int s = side_of(L[i].g, base_);
    if (s == 0) throw BasePointOnLeaf("base point lies on leaf " + std::to_string(i));
    oriented_.push_back(s > 0 ? L[i].g : L[i].g.reversed());
    start[i] = oriented_[i].a().angle();
    len[i] = ccw_distance(start[i], oriented_[i].b().angle());
  }

  // Cut point: an endpoint strictly inside no far arc (one exists on the base stratum).
  std::vector<double> los, his;
  for (std::size_t i = 0; i < n; ++i) {
    double e = start[i] + len[i];
    if (e <= kTwoPi) {
      los.push_back(start[i]);
      his.push_back(e);
    } else {
      los.push_back(start[i]);
      his.push_back(2 * kTwoPi);
      los.push_back(-kTwoPi);
      his.push_back(e - kTwoPi);
    }
  }
  std::sort(los.begin(), los.end());
  std::sort(his.begin(), his.end());
  auto covering = [&](double x) {
    auto a = std::lower_bound(los.begin(), los.end(), x - kArcTol) - los.begin();
    auto b = std::upper_bound(his.begin(), his.end(), x + kArcTol) - his.begin();
    return a - b;
  };
  bool found = n == 0;
  for (std::size_t i = 0; i < n && !found; ++i) {
    for (double x : {start[i], wrap_angle(start[i] + len[i])}) {
      if (covering(x) <= 0) {
        cut_ = x;
        found = true;
        break;
      }
    }
  }
  if (!found) throw Error("earthquake: no boundary point of the base stratum found");

  lo_.resize(n);
  hi_.resize(n);
  order_.resize(n);
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = ccw_distance(cut_, start[i]);
    if (lo[i] > kTwoPi - kArcTol) lo[i] = 0.0;
    hi[i] = lo[i] + len[i];
    order_[i] = i;
  }
  std::sort(order_.begin(), order_.end(), [&](std::size_t p, std::size_t q) {
    if (lo[p] != lo[q]) return lo[p] < lo[q];
    return hi[p] > hi[q];
  });
  parent_.assign(n, -1);
  pos_.assign(n, -1);
  maps_.assign(n, Mobius());
  wide_.assign(n, Wide{1, 0, 0, 1});
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = order_[k];
    lo_[k] = lo[i];
    hi_[k] = hi[i];
    pos_[i] = int(k);
    while (!stack.empty() && lo[i] >= hi[stack.back()] - kArcTol) stack.pop_back();
    if (!stack.empty()) parent_[i] = int(stack.back());
    stack.push_back(i);
    Wide t = wide_translation(oriented_[i], L[i].w);
    wide_[i] = parent_[i] < 0 ? t : wide_mul(wide_[parent_[i]], t);
    maps_[i] = narrow(wide_[i]);
  }
}

Mobius FiniteEarthquake::comparison(std::size_t i) const {
  if (parent_[i] < 0) return maps_[i];
  return narrow(wide_mul(wide_inverse(wide_[parent_[i]]), wide_[i]));
}

const Mobius& FiniteEarthquake::map_of(int stratum) const {
  return stratum < 0 ? identity_ : maps_[std::size_t(stratum)];
}

int FiniteEarthquake::stratum_of(const BoundaryPoint& x) const {
  if (order_.empty()) return -1;
  double off = ccw_distance(cut_, x.angle());
  if (off > kTwoPi - kArcTol) off = 0.0;
  // last far arc (in preorder) starting strictly before x, then climb to one containing x
  auto it = std::lower_bound(lo_.begin(), lo_.end(), off - kArcTol);
  if (it == lo_.begin()) return -1;
  int leaf = int(order_[std::size_t(it - lo_.begin()) - 1]);
  while (leaf >= 0 && !(hi_[std::size_t(pos_[leaf])] > off + kArcTol)) leaf = parent_[leaf];
  return leaf;
}

int FiniteEarthquake::stratum_of(Complex z) const {
  int best = -1, depth = -1;
  for (std::size_t i = 0; i < oriented_.size(); ++i) {
    if (side_of(oriented_[i], z) >= 0) continue;
    int d = 0;
    for (int p = parent_[i]; p >= 0; p = parent_[p]) ++d;
    if (d > depth) best = int(i), depth = d;
  }
  return best;
}

// The base stratum is fixed pointwise; skipping the identity map avoids chart round-off.
BoundaryPoint FiniteEarthquake::eval_boundary(const BoundaryPoint& x) const {
  int s = stratum_of(x);
  return s < 0 ? x : map_of(s).apply(x);
}

Complex FiniteEarthquake::eval(Complex z) const {
  int s = stratum_of(z);
  return s < 0 ? z : map_of(s).apply(z);
}

PiecewiseMobius FiniteEarthquake::boundary_table() const {
  if (oriented_.empty()) return PiecewiseMobius();
  std::vector<BoundaryPoint> pts;
  for (const auto& g : oriented_) {
    pts.push_back(g.a().to_disk());
    pts.push_back(g.b().to_disk());
  }
  std::sort(pts.begin(), pts.end(), [](const BoundaryPoint& p, const BoundaryPoint& q) { return p.angle() < q.angle(); });
  std::vector<BoundaryPoint> uniq;
  for (const auto& p : pts)
    if (uniq.empty() || !same_point(uniq.back(), p)) uniq.push_back(p);
  if (uniq.size() > 1 && same_point(uniq.front(), uniq.back())) uniq.pop_back();
  std::vector<MobiusPiece> pieces;
  std::vector<int> strata;
  for (std::size_t k = 0; k < uniq.size(); ++k) {
    const BoundaryPoint& from = uniq[k];
    const BoundaryPoint& to = uniq[(k + 1) % uniq.size()];
    int s = stratum_of(midpoint_ccw(from, to));
    if (!strata.empty() && strata.back() == s) {
      pieces.back().to = to;
      continue;
    }
    pieces.push_back({from, to, map_of(s)});
    strata.push_back(s);
  }
  if (pieces.size() > 1 && strata.front() == strata.back()) {
    pieces.front().from = pieces.back().from;
    pieces.pop_back();
  }
  return PiecewiseMobius(std::move(pieces));
}

CircleMap FiniteEarthquake::as_function() const {
  auto self = std::make_shared<FiniteEarthquake>(*this);
  return [self](const BoundaryPoint& x) { return self->eval_boundary(x); };
}

FiniteEarthquake build_earthquake(const DiscreteLamination& lambda, Complex base_point) {
  return FiniteEarthquake(lambda, base_point);
}

FiniteEarthquake earthquake_path(const DiscreteLamination& lambda, double t, Complex base_point) {
  if (t < 0) throw Error("earthquake_path: t must be non-negative");
  // base-point validity does not depend on t
  FiniteEarthquake check(lambda, base_point);
  (void)check;
  return FiniteEarthquake(lambda.scaled(t), base_point);
}

Complex default_base_point(const DiscreteLamination& lambda) {
  for (int k = 0; k < 64; ++k) {
    Complex w = k == 0 ? Complex(0, 0) : std::polar(0.01 * k, 2.399963 * k);
    Complex z = disk_to_half_plane(w);
    bool on_leaf = false;
    for (const auto& l : lambda.leaves())
      if (side_of(l.g, z, 1e-9) == 0) on_leaf = true;
    if (!on_leaf) return z;
  }
  throw BasePointOnLeaf("no base point found off the leaves");
}

// ---------------------------------------------------------------------------
// Measure extraction

namespace {

// Translation length of left^-1 right read off its derivative e^{+-w} at a
// shared fixed point. The trace of the product cancels about eps * |left|^2,
// the ratio of the two derivatives does not.
double weight_at_fixed_point(const Mobius& left, const Mobius& right, const BoundaryPoint& x,
                             const BoundaryPoint& y, double fallback) {
  std::optional<double> at;
  for (const BoundaryPoint& p : {x, y}) {
    BoundaryPoint h = p.to_half_plane();
    if (!h.is_infinity() && (!at || std::abs(h.value()) < std::abs(*at))) at = h.value();
  }
  if (!at) return fallback;
  const auto [a, b, c, d] = left.entries();
  const auto [A, B, C, D] = right.entries();
  double w = 2.0 * std::abs(std::log(std::abs((c * *at + d) / (C * *at + D))));
  return std::isfinite(w) ? w : fallback;
}

}  // namespace

DiscreteLamination extract_measure(const PiecewiseMobius& h, const Tolerances& tol) {
  const auto& P = h.pieces();
  const std::size_t m = P.size();
  std::vector<WeightedLeaf> found;
  if (m < 2) {
    if (!approx_equal(P[0].map, Mobius(), 1e-9))
      throw NotAnEarthquake("single piece is not the identity up to the base normalization");
    return {};
  }
  const double ep = 1e-8;
  auto is_break = [&](const BoundaryPoint& y) {
    return std::any_of(P.begin(), P.end(), [&](const MobiusPiece& p) { return metric_circle(p.from, y) < ep; });
  };
  for (std::size_t k = 0; k < m; ++k) {
    const MobiusPiece& left = P[k];
    const MobiusPiece& right = P[(k + 1) % m];
    std::string pair = "pieces " + std::to_string(k) + " and " + std::to_string((k + 1) % m);
    Mobius cmp = left.map.inverse() * right.map;
    TranslationData td = translation_length_axis(cmp, tol);
    if (!td.axis) {
      if (approx_equal(cmp, Mobius(), 1e-9)) continue;  // redundant breakpoint
      throw NotAnEarthquake(pair + ": comparison map is not hyperbolic");
    }
    const Geodesic& axis = *td.axis;
    const BoundaryPoint& x = right.from;
    bool at_a = metric_circle(axis.a(), x) < ep, at_b = metric_circle(axis.b(), x) < ep;
    if (!at_a && !at_b)
      throw NotAnEarthquake(pair + ": comparison axis does not end at the shared breakpoint "
                                   "(leaves sharing an endpoint are not supported)");
    const BoundaryPoint& y = at_a ? axis.b() : axis.a();
    if (!is_break(y)) throw NotAnEarthquake(pair + ": comparison axis does not separate the pieces");
    if (side_of(axis, midpoint_ccw(left.from, left.to)) < 0)
      throw NotAnEarthquake(pair + ": comparison map translates to the right");
    Geodesic leaf(x.to_disk(), y.to_disk());
    double w = weight_at_fixed_point(left.map, right.map, x, y, td.length);
    auto dup = std::find_if(found.begin(), found.end(),
                            [&](const WeightedLeaf& l) { return same_geodesic(l.g, leaf, ep); });
    if (dup == found.end()) {
      found.push_back({leaf, w});
    } else if (std::abs(dup->w - w) > 1e-7 * std::max(1.0, w)) {
      throw NotAnEarthquake(pair + ": the two ends of a leaf disagree on its weight");
    }
  }
  return DiscreteLamination(std::move(found));
}

}  // namespace eql
