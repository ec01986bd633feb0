#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eql/earthquake.hpp"
#include "oracles.hpp"

using namespace eql;

namespace {

BoundaryPoint r(double x) { return BoundaryPoint::real(x); }
const BoundaryPoint inf = BoundaryPoint::infinity();
const double e = std::exp(1.0);

DiscreteLamination to_lamination(const std::vector<oracle::Leaf>& leaves) {
  std::vector<WeightedLeaf> w;
  for (const auto& l : leaves) w.push_back({Geodesic::disk(l.p, l.q), l.w});
  return DiscreteLamination(w);
}

Mobius random_mobius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a * d - b * c > 0.3) return Mobius(a, b, c, d);
  }
}

}  // namespace

TEST(Build, SingleLeafClosedForm) {
  DiscreteLamination lam({{Geodesic(r(0), inf), 1.0}});
  FiniteEarthquake E = build_earthquake(lam, Complex(-1, 1));
  EXPECT_NEAR(E.eval_boundary(r(1)).value(), e, 1e-12);
  EXPECT_NEAR(E.eval_boundary(r(3.5)).value(), 3.5 * e, 1e-12);
  EXPECT_NEAR(E.eval_boundary(r(-2)).value(), -2.0, 1e-15);
  EXPECT_TRUE(E.eval_boundary(inf).is_infinity());
  EXPECT_NEAR(E.eval_boundary(r(0)).value(), 0.0, 1e-15);
  Complex z = E.eval(Complex(1, 1));
  EXPECT_NEAR(std::abs(z - e * Complex(1, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(E.eval(Complex(-1, 2)) - Complex(-1, 2)), 0.0, 1e-15);
  EXPECT_THROW(build_earthquake(lam, Complex(0, 1)), BasePointOnLeaf);
}

TEST(Build, EmptyIsIdentity) {
  FiniteEarthquake E = build_earthquake(DiscreteLamination(), Complex(0, 1));
  for (double x : {-3.0, 0.0, 0.5, 7.0}) EXPECT_DOUBLE_EQ(E.eval_boundary(r(x)).value(), x);
  EXPECT_TRUE(extract_measure(E.boundary_table()).empty());
}

TEST(Build, TwoDisjointLeavesMatchDirectComposition) {
  double w1 = 0.7, w2 = 1.3;
  DiscreteLamination lam({{Geodesic(r(-2), r(-1)), w1}, {Geodesic(r(1), r(2)), w2}});
  FiniteEarthquake E = build_earthquake(lam, Complex(0, 1));
  oracle::Mat left = oracle::translation(-2, -1, w1), right = oracle::translation(1, 2, w2);
  for (double x = -3; x <= 3; x += 0.0625) {
    double expect = x;
    if (x > -2 && x < -1) expect = left.apply(x);
    if (x > 1 && x < 2) expect = right.apply(x);
    EXPECT_NEAR(E.eval_boundary(r(x)).value(), expect, 1e-12) << x;
  }
}

TEST(Build, NestedLeavesComposeFromBaseOutward) {
  double w1 = 0.4, w2 = 0.9;
  DiscreteLamination lam({{Geodesic(r(0), r(4)), w1}, {Geodesic(r(1), r(2)), w2}});
  FiniteEarthquake E = build_earthquake(lam, Complex(-5, 1));
  oracle::Mat outer = oracle::translation(0, 4, w1), inner = oracle::translation(1, 2, w2);
  for (double x = 0.05; x < 4; x += 0.1) {
    double expect = (x > 1 && x < 2) ? (outer * inner).apply(x) : outer.apply(x);
    EXPECT_NEAR(E.eval_boundary(r(x)).value(), expect, 1e-11) << x;
  }
}

TEST(Build, ElementaryClosedForm) {
  for (int n : {1, 10, 100, 1000}) {
    DiscreteLamination lam({{Geodesic(r(1.0 / n), inf), 1.0}});
    FiniteEarthquake E = build_earthquake(lam, Complex(-1, 1));
    for (double x : {1.0 / n, 1.0 / n + 0.01, 2.0, 50.0}) {
      EXPECT_NEAR(E.eval_boundary(r(x)).value(), e * (x - 1.0 / n) + 1.0 / n, 1e-12 * std::max(1.0, x));
    }
    EXPECT_DOUBLE_EQ(E.eval_boundary(r(-3)).value(), -3.0);
  }
}

TEST(Build, ComparisonIsometryLaw) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 50));
    FiniteEarthquake E = build_earthquake(lam, default_base_point(lam));
    for (std::size_t i = 0; i < E.size(); ++i) {
      TranslationData td = translation_length_axis(E.comparison(i));
      ASSERT_TRUE(td.axis.has_value());
      EXPECT_NEAR(td.length, lam.leaves()[i].w, 1e-9 * lam.leaves()[i].w);
      const Geodesic& g = E.oriented_leaf(i);
      EXPECT_LT(metric_circle(td.axis->a(), g.a()), 1e-8);
      EXPECT_LT(metric_circle(td.axis->b(), g.b()), 1e-8);
      // base stratum on the left
      EXPECT_EQ(side_of(g, E.base_point()), 1);
    }
  }
}

TEST(Eval, MonotoneOnGrid) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 50));
    FiniteEarthquake E = build_earthquake(lam, default_base_point(lam));
    const int n = 10000;
    double prev = E.eval_boundary(BoundaryPoint::disk(0)).angle(), wound = 0.0;
    for (int k = 1; k <= n; ++k) {
      double cur = E.eval_boundary(BoundaryPoint::disk(kTwoPi * k / n)).angle();
      double step = ccw_distance(prev, cur);
      EXPECT_LT(step, kPi);  // never steps backward
      wound += step;
      prev = cur;
    }
    EXPECT_NEAR(wound, kTwoPi, 1e-9);
  }
}

TEST(Extract, RoundTrip) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 20));
    FiniteEarthquake E = build_earthquake(lam, default_base_point(lam));
    DiscreteLamination back = extract_measure(E.boundary_table());
    ASSERT_EQ(back.size(), lam.size());
    for (const auto& l : lam.leaves()) {
      bool matched = false;
      for (const auto& b : back.leaves()) {
        if (!same_geodesic(b.g, l.g, 1e-8)) continue;
        matched = true;
        EXPECT_NEAR(b.w, l.w, 1e-9 * l.w);
      }
      EXPECT_TRUE(matched);
    }
  }
}

TEST(Extract, ElementaryMap) {
  for (int n : {1, 10}) {
    double a = 1.0 / n;
    Mobius hn = Mobius(e, a * (1 - e), 0, 1);
    PiecewiseMobius h({{r(a), inf, hn}, {inf, r(a), Mobius()}});
    DiscreteLamination lam = extract_measure(h);
    ASSERT_EQ(lam.size(), 1u);
    EXPECT_TRUE(same_geodesic(lam.leaves()[0].g, Geodesic(r(a), inf), 1e-10));
    EXPECT_NEAR(lam.leaves()[0].w, 1.0, 1e-12);
  }
  EXPECT_TRUE(extract_measure(PiecewiseMobius()).empty());
}

TEST(Extract, RejectsNonEarthquakes) {
  // translation to the right
  PiecewiseMobius right({{r(0), inf, Mobius::diagonal(-1.0)}, {inf, r(0), Mobius()}});
  EXPECT_THROW(extract_measure(right), NotAnEarthquake);
  // parabolic jump
  PiecewiseMobius para({{r(0), inf, Mobius(1, 1, 0, 1)}, {inf, r(0), Mobius()}});
  EXPECT_THROW(extract_measure(para), NotAnEarthquake);
  // hyperbolic jump along an axis that does not end at the breakpoint
  Mobius off = hyperbolic_translation(Geodesic(r(5), r(6)), 1.0);
  PiecewiseMobius bad({{r(0), inf, off}, {inf, r(0), Mobius()}});
  EXPECT_THROW(extract_measure(bad), NotAnEarthquake);
}

TEST(Path, Examples) {
  DiscreteLamination lam({{Geodesic(r(0), inf), 1.0}});
  for (double t : {0.0, 0.3, 1.0, 2.5}) {
    FiniteEarthquake E = earthquake_path(lam, t, Complex(-1, 1));
    EXPECT_NEAR(E.eval_boundary(r(1)).value(), std::exp(t), 1e-12);
  }
  std::mt19937_64 rng(2);
  DiscreteLamination rl = to_lamination(oracle::random_leaves(rng, 10));
  Complex base = default_base_point(rl);
  FiniteEarthquake E0 = earthquake_path(rl, 0.0, base);
  for (double x = 0; x < kTwoPi; x += 0.1)
    EXPECT_NEAR(metric_circle(E0.eval_boundary(BoundaryPoint::disk(x)), BoundaryPoint::disk(x)), 0.0, 1e-15);
  // angles on the far side move monotonically with t
  FiniteEarthquake E1 = earthquake_path(rl, 1.0, base);
  for (double x = 0.05; x < kTwoPi; x += 0.2) {
    BoundaryPoint p = BoundaryPoint::disk(x);
    if (E1.stratum_of(p) < 0) continue;
    double prev = 0.0;
    for (double t = 0.1; t <= 1.0; t += 0.1) {
      double moved = std::remainder(earthquake_path(rl, t, base).eval_boundary(p).angle() - x, kTwoPi);
      EXPECT_GE(std::abs(moved), std::abs(prev) - 1e-12);
      if (prev != 0.0) EXPECT_EQ(moved > 0, prev > 0);
      prev = moved;
    }
  }
}

TEST(Eval, Equivariance) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 8));
    Complex base = default_base_point(lam);
    Mobius g = random_mobius(rng);
    FiniteEarthquake E = build_earthquake(lam, base);
    FiniteEarthquake Eg = build_earthquake(pullback(g, lam), g.inverse().apply(base));
    CircleMap lhs = [&](const BoundaryPoint& x) { return E.eval_boundary(g.apply(x)); };
    CircleMap rhs = Eg.as_function();
    Mobius nl = normalizer(lhs), nr = normalizer(rhs);
    for (double x = 0.01; x < kTwoPi; x += 0.05) {
      BoundaryPoint p = BoundaryPoint::disk(x);
      EXPECT_LT(metric_circle(nl.apply(lhs(p)), nr.apply(rhs(p))), 1e-8);
    }
  }
}

TEST(Table, NormalizationFixesThreePoints) {
  std::mt19937_64 rng(41);
  DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 12));
  PiecewiseMobius h = build_earthquake(lam, default_base_point(lam)).boundary_table().normalized();
  for (double x : {0.0, 0.5 * kPi, kPi})
    EXPECT_LT(metric_circle(h(BoundaryPoint::disk(x)), BoundaryPoint::disk(x)), 1e-12);
}
