#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eql/laminations.hpp"
#include "eql/search.hpp"
#include "oracles.hpp"

using namespace eql;

namespace {

BoundaryPoint r(double x) { return BoundaryPoint::real(x); }
const BoundaryPoint inf = BoundaryPoint::infinity();

DiscreteLamination to_lamination(const std::vector<oracle::Leaf>& leaves) {
  std::vector<WeightedLeaf> w;
  for (const auto& l : leaves) w.push_back({Geodesic::disk(l.p, l.q), l.w});
  return DiscreteLamination(w);
}

GeodesicBox example_box(int n) {
  double a = 1.0 / (std::sqrt(omega0()) * n);
  return GeodesicBox(r(-a), r(a), r(omega0() * a), r(-omega0() * a));
}

Mobius random_mobius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3, 3);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a * d - b * c > 0.2) return Mobius(a, b, c, d);
  }
}

}  // namespace

TEST(Discrete, RejectsLinkedLeaves) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, kTwoPi);
  int linked = 0;
  for (int i = 0; i < 500; ++i) {
    Geodesic g = Geodesic::disk(u(rng), u(rng)), h = Geodesic::disk(u(rng), u(rng));
    if (geodesics_cross(g, h)) {
      ++linked;
      EXPECT_THROW(DiscreteLamination({{g, 1.0}, {h, 1.0}}), CrossingLeaves);
    } else {
      EXPECT_NO_THROW(DiscreteLamination({{g, 1.0}, {h, 1.0}}));
    }
  }
  EXPECT_GT(linked, 50);
  EXPECT_THROW(DiscreteLamination({{Geodesic::disk(0, 1), -1.0}}), Error);
}

TEST(Discrete, MergesDuplicatesAndSharedEndpoints) {
  Geodesic g = Geodesic::disk(1.0, 2.0);
  DiscreteLamination lam({{g, 0.5}, {Geodesic::disk(2.0, 1.0), 0.25}, {Geodesic::disk(2.0, 3.0), 1.0}});
  EXPECT_EQ(lam.size(), 2u);
  EXPECT_DOUBLE_EQ(lam.total_mass(), 1.75);
  EXPECT_TRUE(lam.has_leaf(g));
  EXPECT_DOUBLE_EQ(lam.scaled(2.0).total_mass(), 3.5);
}

TEST(BoxMass, Examples) {
  DiscreteLamination delta({{Geodesic(r(0), inf), 1.0}});
  EXPECT_DOUBLE_EQ(delta.box_mass(example_box(3)), 1.0);
  for (int n : {1, 2, 8, 32, 128}) {
    DiscreteLamination ln({{Geodesic(r(1.0 / n), inf), 1.0}});
    EXPECT_DOUBLE_EQ(ln.box_mass(example_box(n)), 0.0);
    EXPECT_DOUBLE_EQ(delta.box_mass(example_box(n)), 1.0);
  }
  BandLamination band = BandLamination::fixture();
  // sub-band t in [0.2, 0.5]: alpha in [1.2, 1.5], beta in [4.5, 4.8]
  GeodesicBox q = GeodesicBox::disk(1.2, 1.5, 4.5, 4.8);
  EXPECT_NEAR(band.box_mass(q), 0.3, 1e-9);
  EXPECT_NEAR(band.total_mass(), 1.0, 1e-12);
}

TEST(BoxMass, AdditiveOverPartition) {
  BandLamination band = BandLamination::fixture();
  GeodesicBox whole = GeodesicBox::disk(0.5, 2.5, 3.5, 5.5);
  double sum = 0.0;
  const int k = 5;
  for (int i = 0; i < k; ++i) {
    BoxFlags f;
    f.open_b = i + 1 < k;  // half-open cells
    sum += band.box_mass(GeodesicBox::disk(0.5 + 2.0 * i / k, 0.5 + 2.0 * (i + 1) / k, 3.5, 5.5, f));
  }
  EXPECT_NEAR(sum, band.box_mass(whole), k * 1e-9);
  EXPECT_NEAR(band.box_mass(whole), 1.0, 1e-9);
  // monotone under inclusion
  EXPECT_LE(band.box_mass(GeodesicBox::disk(1.0, 1.5, 4.0, 5.0)), band.box_mass(whole) + 1e-12);
}

TEST(BoxMass, DiscreteAdditivityRandom) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 8));
    GeodesicBox q = GeodesicBox::disk(0.3, 2.1, 3.0, 5.9);
    double split = 1.2;
    BoxFlags left;
    left.open_b = true;
    double parts = lam.box_mass(GeodesicBox::disk(0.3, split, 3.0, 5.9, left)) +
                   lam.box_mass(GeodesicBox::disk(split, 2.1, 3.0, 5.9));
    EXPECT_NEAR(parts, lam.box_mass(q), 1e-12);
  }
}

TEST(Band, Validation) {
  EXPECT_THROW(BandLamination({{1.0, 1.0}}, {{5.0, -1.0}}, {{-1.0}}), InvalidBand);
  EXPECT_THROW(BandLamination({{1.0, 3.0}}, {{2.0, 3.0}}, {{1.0}}), InvalidBand);  // leaves cross
  EXPECT_THROW(BandLamination({{1.0, 1.0}}, {{2.0, 0.0}}, {{1.0}}), InvalidBand);  // degenerates at t = 1
  EXPECT_NO_THROW(BandLamination({{1.0, 0.5}}, {{4.0, -0.5, 0.2}}, {{1.0, 2.0}}));
}

TEST(Band, PeaksAndWindow) {
  BandLamination band = BandLamination::fixture();
  GeodesicBox q = GeodesicBox::disk(1.2, 1.5, 4.5, 4.8);
  auto peaks = band.peaks_in(q);
  ASSERT_EQ(peaks.size(), 2u);
  EXPECT_TRUE(same_geodesic(peaks[0], band.leaf(0.2), 1e-9) || same_geodesic(peaks[0], band.leaf(0.5), 1e-9));
  EXPECT_TRUE(same_geodesic(peaks[1], band.leaf(0.2), 1e-9) || same_geodesic(peaks[1], band.leaf(0.5), 1e-9));
  auto w = band.support_window();
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(band.box_mass(*w), 1.0, 1e-9);
}

TEST(Discrete, SupportWindow) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 6));
    auto w = lam.support_window();
    if (!w) continue;
    EXPECT_NEAR(lam.box_mass(*w), lam.total_mass(), 1e-12);
  }
  DiscreteLamination nested({{Geodesic::disk(1, 5), 1}, {Geodesic::disk(2, 4), 1}});
  ASSERT_TRUE(nested.support_window().has_value());
}

TEST(Pullback, MatchesTransportedBoxes) {
  std::mt19937_64 rng(12);
  DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 6));
  Mobius g = random_mobius(rng);
  DiscreteLamination pb = pullback(g, lam);
  EXPECT_EQ(pb.size(), lam.size());
  for (const auto& l : lam.leaves()) EXPECT_TRUE(pb.has_leaf(g.inverse().apply(l.g), 1e-9));
  EXPECT_TRUE(pullback(Mobius(), lam).has_leaf(lam.leaves()[0].g));
  // generic path through the oracle wrapper
  auto band = std::make_shared<BandLamination>(BandLamination::fixture());
  OraclePtr pbb = pullback(g, band);
  GeodesicBox q = GeodesicBox::disk(1.2, 1.5, 4.5, 4.8);
  EXPECT_NEAR(pbb->box_mass(transform(g.inverse(), q)), band->box_mass(q), 1e-9);
}

TEST(Restrict, Examples) {
  auto delta = std::make_shared<DiscreteLamination>(
      std::vector<WeightedLeaf>{{Geodesic(r(0), inf), 1.0}});
  Complex p = std::polar(1.0, kPi / 4), q = std::polar(1.0, 3 * kPi / 4);
  EXPECT_DOUBLE_EQ(restrict(delta, {p, q})->total_mass(), 1.0);
  EXPECT_DOUBLE_EQ(restrict(delta, {Complex(1, 1), Complex(2, 1)})->total_mass(), 0.0);
  auto band = std::make_shared<BandLamination>(BandLamination::fixture());
  // segment between points on leaf(0.1) and leaf(0.4) crosses exactly t in [0.1, 0.4]
  auto mid = [&](double t) {
    Geodesic g = band->leaf(t);
    Mobius m = mobius_from_triples({g.a(), g.b(), BoundaryPoint::disk(0.0)},
                                   {r(-1), r(1), inf});
    return m.inverse().apply(Complex(0, 1));
  };
  OraclePtr ri = restrict(band, {mid(0.1), mid(0.4)});
  EXPECT_NEAR(ri->total_mass(), 0.3, 1e-8);
}

TEST(BoxSup, Examples) {
  DiscreteLamination delta({{Geodesic::disk(1, 4), 2.5}});
  EXPECT_DOUBLE_EQ(box_sup(delta).value, 2.5);
  DiscreteLamination linf({{Geodesic(r(0), inf), 1.0}});
  auto bs = box_sup(linf);
  EXPECT_DOUBLE_EQ(bs.value, 1.0);
  EXPECT_NEAR(liouville(*bs.witness), std::log(2.0), 1e-9);
  // two leaves more than 10 apart
  double e = std::exp(11.0);
  DiscreteLamination far({{Geodesic(r(-1), r(1)), 1.0}, {Geodesic(r(e), r(-e)), 1.0}});
  EXPECT_DOUBLE_EQ(box_sup(far).value, 1.0);
  // exactly at the log 2 threshold both fit
  double w = omega0();
  DiscreteLamination edge({{Geodesic(r(-1), r(1)), 1.0}, {Geodesic(r(w), r(-w)), 1.0}});
  EXPECT_DOUBLE_EQ(box_sup(edge).value, 2.0);
}

TEST(BoxSup, MatchesPairOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 12;
    auto leaves = oracle::random_leaves(rng, n);
    DiscreteLamination lam = to_lamination(leaves);
    auto bs = box_sup(lam);
    EXPECT_NEAR(bs.value, oracle::box_sup_pairs(leaves), 1e-12) << "trial " << trial;
    ASSERT_TRUE(bs.witness.has_value());
    EXPECT_NEAR(bs.witness_mass, bs.value, 1e-12);
    EXPECT_NEAR(liouville(*bs.witness), std::log(2.0), 1e-8);
  }
}

TEST(Thurston, ExactAgainstBruteForceArcs) {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 8;
    auto leaves = oracle::random_leaves(rng, n);
    DiscreteLamination lam = to_lamination(leaves);
    ThurstonResult th = thurston_norm(lam);
    EXPECT_TRUE(th.exact);
    EXPECT_GE(th.lower, oracle::thurston_bruteforce(leaves, 1.0 - 1e-3) - 1e-12);
    EXPECT_LE(th.lower, oracle::thurston_bruteforce(leaves, 1.0 + 1e-3) + 1e-12);
    EXPECT_LE(th.lower, th.upper);
    double bs = box_sup(lam).value;
    EXPECT_LE(th.lower, th.constants.C0 * bs + 1e-12);
    EXPECT_LE(bs, th.constants.reverse * th.lower + 1e-12);
  }
}

TEST(Thurston, WitnessArcHasUnitLength) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 6));
    ThurstonResult th = thurston_norm(lam);
    ASSERT_TRUE(th.witness_arc.has_value());
    const Segment& s = *th.witness_arc;
    EXPECT_NEAR(hyperbolic_distance(s.start, std::get<Complex>(s.end)), 1.0, 1e-9);
    double crossed = 0.0;
    for (const auto& l : lam.leaves())
      if (crosses(l.g, s)) crossed += l.w;
    EXPECT_NEAR(crossed, th.lower, 1e-12);
  }
}

TEST(Thurston, Examples) {
  DiscreteLamination single({{Geodesic::disk(0.5, 2.0), 0.7}});
  ThurstonResult th = thurston_norm(single);
  EXPECT_DOUBLE_EQ(th.lower, 0.7);
  EXPECT_DOUBLE_EQ(th.upper, 0.7);
  // parallel leaves x = const in the half-plane all cross a short horizontal arc
  std::vector<WeightedLeaf> par;
  double total = 0.0;
  for (int k = 0; k < 6; ++k) {
    double w = 0.1 * (k + 1);
    par.push_back({Geodesic(r(0.1 * k), inf), w});
    total += w;
  }
  EXPECT_GE(thurston_norm(DiscreteLamination(par)).lower, total - 1e-12);
  auto cc = comparison_constants();
  EXPECT_NEAR(cc.L_prime, 2 * std::log(std::cosh(0.5)), 1e-12);
  EXPECT_DOUBLE_EQ(cc.C0, 1.0);
  EXPECT_DOUBLE_EQ(cc.reverse, 2.0);
}

TEST(Thurston, PullbackIsometry) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    DiscreteLamination lam = to_lamination(oracle::random_leaves(rng, 7));
    Mobius g = random_mobius(rng);
    DiscreteLamination pb = pullback(g, lam);
    EXPECT_NEAR(thurston_norm(pb).lower, thurston_norm(lam).lower, 1e-9);
    EXPECT_NEAR(box_sup(pb).value, box_sup(lam).value, 1e-9);
  }
}

TEST(Band, SearchSandwich) {
  BandLamination band = BandLamination::fixture();
  SearchBudget budget;
  budget.sample_leaves = 24;
  budget.tau_steps = 17;
  auto bs = box_sup(band, budget);
  ThurstonResult th = thurston_norm(band, budget);
  EXPECT_GT(bs.value, 0.0);
  EXPECT_LE(bs.value, 1.0 + 1e-9);
  EXPECT_LE(th.lower, th.upper + 1e-12);
  ASSERT_TRUE(th.certified_upper.has_value());
  EXPECT_LE(th.lower, *th.certified_upper + 1e-9);
  ASSERT_TRUE(bs.witness.has_value());
  EXPECT_NEAR(band.box_mass(*bs.witness), bs.value, 1e-9);
}
