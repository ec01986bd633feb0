#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double norm_angle(double x) {
  x = std::fmod(x, kTwoPi);
  return x < 0 ? x + kTwoPi : x;
}

// x in the closed counterclockwise arc from -> to
bool in_arc(double x, double from, double to, double tol = 1e-12) {
  double len = norm_angle(to - from), off = norm_angle(x - from);
  return off <= len + tol || off >= kTwoPi - tol;
}

cd point(double theta) { return std::polar(1.0, theta); }

void match(std::mt19937_64& rng, const std::vector<double>& pts, int lo, int hi, std::vector<Leaf>& out) {
  // points lo..hi-1, even count
  while (hi - lo >= 2) {
    int half = (hi - lo) / 2;
    int k = std::uniform_int_distribution<int>(0, half - 1)(rng);
    int partner = lo + 2 * k + 1;
    out.push_back({pts[lo], pts[partner], 0.0});
    match(rng, pts, lo + 1, partner, out);
    lo = partner + 1;
  }
}

}  // namespace

std::vector<Leaf> random_leaves(std::mt19937_64& rng, int n, double wlo, double whi) {
  std::uniform_real_distribution<double> ua(0, kTwoPi);
  std::vector<double> pts;
  for (;;) {
    pts.clear();
    for (int i = 0; i < 2 * n; ++i) pts.push_back(ua(rng));
    std::sort(pts.begin(), pts.end());
    bool ok = true;
    for (int i = 0; i < 2 * n; ++i) {
      double gap = i + 1 < 2 * n ? pts[i + 1] - pts[i] : pts[0] + kTwoPi - pts[i];
      if (gap < 1e-3) ok = false;
    }
    if (ok) break;
  }
  std::vector<Leaf> out;
  match(rng, pts, 0, 2 * n, out);
  std::uniform_real_distribution<double> uw(wlo, whi);
  for (auto& l : out) l.w = uw(rng);
  return out;
}

double liouville(double a, double b, double c, double d) {
  cd A = point(a), B = point(b), C = point(c), D = point(d);
  if (std::abs(A - B) < 1e-12 || std::abs(C - D) < 1e-12) return 0.0;
  cd cr = (A - C) * (B - D) / ((A - D) * (B - C));
  return std::abs(std::log(std::abs(cr)));
}

double box_sup_pairs(const std::vector<Leaf>& leaves) {
  double best = 0.0;
  for (const auto& l : leaves) best = std::max(best, l.w);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      double p1 = leaves[i].p, p2 = leaves[i].q;
      double q1 = leaves[j].p, q2 = leaves[j].q;
      // put h inside the arc p1 -> p2
      if (!(in_arc(q1, p1, p2) && in_arc(q2, p1, p2))) std::swap(p1, p2);
      if (norm_angle(q1 - p1) > norm_angle(q2 - p1)) std::swap(q1, q2);
      // box [p1, q1] x [q2, p2]
      if (liouville(p1, q1, q2, p2) > std::log(2.0) + 1e-12) continue;
      double m = 0.0;
      for (const auto& k : leaves) {
        bool in = (in_arc(k.p, p1, q1) && in_arc(k.q, q2, p2)) || (in_arc(k.q, p1, q1) && in_arc(k.p, q2, p2));
        if (in) m += k.w;
      }
      best = std::max(best, m);
    }
  }
  return best;
}

double disk_distance(cd z, cd w) {
  double r = std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
  return 2.0 * std::atanh(std::min(r, 1.0 - 1e-16));
}

std::pair<cd, double> leaf_circle(const Leaf& g) {
  double mid = 0.5 * (g.p + g.q), half = 0.5 * std::abs(g.q - g.p);
  // orthogonal circle: center on the bisector at distance 1/cos(half)
  cd center = std::polar(1.0 / std::cos(half), mid);
  double radius = std::abs(std::tan(half));
  return {center, radius};
}

int circle_side(const Leaf& g, cd z, double tol) {
  double half = 0.5 * std::abs(g.q - g.p);
  if (std::abs(std::cos(half)) < 1e-12) {
    // diameter: side of the line through 0 and e^{i p}
    double s = std::imag(std::conj(point(g.p)) * z);
    return std::abs(s) <= tol ? 0 : (s > 0 ? 1 : -1);
  }
  auto [c, r] = leaf_circle(g);
  double v = std::abs(z - c) - r;
  return std::abs(v) <= tol ? 0 : (v > 0 ? 1 : -1);
}

namespace {

// Point on the leaf at parameter u in (0, 1) along the circular arc.
cd leaf_point(const Leaf& g, double u) {
  double half = 0.5 * std::abs(g.q - g.p);
  double lo = std::min(g.p, g.q), hi = std::max(g.p, g.q);
  if (std::abs(std::cos(half)) < 1e-12) return point(lo) * (1.0 - 2.0 * u);
  // endpoints as seen from the circle center; interpolate the angle around it
  auto [c, r] = leaf_circle(g);
  double a0 = std::arg(point(lo) - c), a1 = std::arg(point(hi) - c);
  double da = std::remainder(a1 - a0, kTwoPi);
  cd z = c + std::polar(r, a0 + u * da);
  return z;
}

}  // namespace

Feet closest_points(const Leaf& g, const Leaf& h, double resolution) {
  // Coarse grid in a logit-type parameter, then shrinking local grids.
  auto param = [](double s) { return 1.0 / (1.0 + std::exp(-s)); };
  const int n = 80;
  double best = 1e300, bs = 0, bt = 0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      double s = -30 + 60.0 * i / n, t = -30 + 60.0 * j / n;
      double d = disk_distance(leaf_point(g, param(s)), leaf_point(h, param(t)));
      if (d < best) best = d, bs = s, bt = t;
    }
  }
  double step = 60.0 / n;
  while (step > resolution * 1e-3) {
    double cs = bs, ct = bt;
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        double s = cs + i * step / 4, t = ct + j * step / 4;
        double d = disk_distance(leaf_point(g, param(s)), leaf_point(h, param(t)));
        if (d < best) best = d, bs = s, bt = t;
      }
    }
    step *= 0.5;
  }
  return {leaf_point(g, param(bs)), leaf_point(h, param(bt)), best};
}

double thurston_bruteforce(const std::vector<Leaf>& leaves, double r, double resolution) {
  double best = 0.0;
  for (const auto& l : leaves) best = std::max(best, l.w);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      Feet f = closest_points(leaves[i], leaves[j], resolution);
      if (f.d > r) continue;
      double m = leaves[i].w + leaves[j].w;
      for (std::size_t k = 0; k < leaves.size(); ++k) {
        if (k == i || k == j) continue;
        int s1 = circle_side(leaves[k], f.z), s2 = circle_side(leaves[k], f.w);
        if (s1 * s2 <= 0) m += leaves[k].w;
      }
      best = std::max(best, m);
    }
  }
  return best;
}

Mat translation(double u, double v, double t) {
  // G sends 0 -> u and infinity -> v; G diag(e^{t/2}, e^{-t/2}) G^{-1}
  // G = [[v, u], [1, 1]] / sqrt(v - u) up to sign
  double s = std::sqrt(std::abs(v - u));
  Mat G{v / s, u / s, 1 / s, 1 / s};
  double det = G.a * G.d - G.b * G.c;
  Mat Gi{G.d / det, -G.b / det, -G.c / det, G.a / det};
  Mat D{std::exp(t / 2), 0, 0, std::exp(-t / 2)};
  return G * D * Gi;
}

}  // namespace oracle
