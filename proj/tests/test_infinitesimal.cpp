#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eql/infinitesimal.hpp"
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

Mobius random_mobius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a * d - b * c > 0.3) return Mobius(a, b, c, d);
  }
}

// Plain disk arithmetic: the field of the leaves separating `base` (disk) from exp(i theta).
double oracle_dot(const std::vector<oracle::Leaf>& leaves, oracle::cd base, double theta) {
  oracle::cd z = std::polar(1.0, theta);
  double v = 0;
  for (const auto& l : leaves) {
    oracle::cd p = std::polar(1.0, l.p), q = std::polar(1.0, l.q);
    auto [c, rad] = oracle::leaf_circle(l);
    bool base_in = std::abs(base - c) < rad;
    bool z_in = std::abs(z - c) < rad;
    if (base_in == z_in) continue;
    // order the endpoints so that (a, z, b) is counterclockwise
    double off_q = std::fmod(std::fmod(l.q - l.p, kTwoPi) + kTwoPi, kTwoPi);
    double off_z = std::fmod(std::fmod(theta - l.p, kTwoPi) + kTwoPi, kTwoPi);
    oracle::cd a = p, b = q;
    if (off_z > off_q) std::swap(a, b);
    oracle::cd e = (z - a) * (z - b) / (a - b);
    v += l.w * (e / (oracle::cd(0, 1) * z)).real();
  }
  return v;
}

}  // namespace

TEST(ETilde, SingleLeafHalfPlane) {
  Geodesic l(r(0), inf);
  for (double x : {0.1, 1.0, 3.5, 40.0}) EXPECT_NEAR(e_tilde(r(x), l), x, 1e-12 * x);
  // (a, z, b) counterclockwise for negative x means a = infinity: b - x
  for (double x : {-0.1, -2.0}) EXPECT_NEAR(e_tilde(r(x), l), -x, 1e-12);
  EXPECT_EQ(e_tilde(r(0), l), 0.0);
  EXPECT_THROW(e_tilde(inf, l), Error);
}

TEST(ETilde, DiskAndHalfPlaneAgree) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.05, kTwoPi - 0.05);
  for (int k = 0; k < 200; ++k) {
    Geodesic l = Geodesic::disk(ang(rng), ang(rng));
    BoundaryPoint z = BoundaryPoint::disk(ang(rng));
    double x = z.to_half_plane().value();
    double via_disk = e_tilde(z, l) * 0.5 * (1 + x * x);
    EXPECT_NEAR(e_tilde(z.to_half_plane(), l), via_disk, 1e-9 * (1 + std::abs(via_disk)));
  }
}

TEST(ETilde, Equivariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  int checked = 0;
  while (checked < 1000) {
    Mobius m = random_mobius(rng);
    double a = u(rng), b = u(rng), x = u(rng);
    if (std::abs(a - b) < 0.05 || std::abs(x - a) < 0.05 || std::abs(x - b) < 0.05) continue;
    BoundaryPoint tx = m.apply(r(x));
    if (tx.is_infinity() || std::abs(tx.value()) > 1e3) continue;
    Geodesic l(r(a), r(b));
    double lhs = e_tilde(tx, m.apply(l)) / m.derivative(x);
    double rhs = e_tilde(r(x), l);
    EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(rhs)));
    ++checked;
  }
}

TEST(ETilde, DecayNearRadialRay) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, kTwoPi), dd(0, 8), dr(0.05, 2.0), ux(-4, 4);
  for (int k = 0; k < 2000; ++k) {
    double theta = ang(rng), d = dd(rng), d0 = dr(rng);
    Complex wd = disk_to_half_plane(std::polar(std::tanh(d / 2), theta));
    Mobius to_wd(std::sqrt(wd.imag()), wd.real() / std::sqrt(wd.imag()), 0, 1 / std::sqrt(wd.imag()));
    double phi = ang(rng);
    Mobius rot(std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi));
    double rho = d0 * std::uniform_real_distribution<double>(0, 0.999)(rng);
    Complex q = (to_wd * rot).apply(Complex(0, std::exp(rho)));
    Mobius to_q(std::sqrt(q.imag()), q.real() / std::sqrt(q.imag()), 0, 1 / std::sqrt(q.imag()));
    double x = ux(rng);
    if (std::abs(x) < 1e-3) continue;
    Geodesic through_q = to_q.apply(Geodesic(r(x), r(-1 / x)));
    double e = std::abs(e_tilde_disk(BoundaryPoint::disk(theta), through_q));
    EXPECT_LE(e, 8 * std::cosh(d0) * std::exp(-d) * (1 + 1e-9));
  }
}

TEST(DotE, SingleLeafGivesIdentityOnFarSide) {
  DiscreteLamination l({{Geodesic(r(0), inf), 1.0}});
  Complex base(-1, 1);
  for (double x : {0.5, 1.0, 7.0}) {
    auto v = dot_E(l, r(x), base);
    ASSERT_TRUE(v.value.half_plane);
    EXPECT_NEAR(*v.value.half_plane, x, 1e-12 * x);
    EXPECT_TRUE(v.exact);
  }
  EXPECT_EQ(*dot_E(l, r(-2), base).value.half_plane, 0.0);
  EXPECT_FALSE(dot_E(l, inf, base).value.half_plane);
}

TEST(DotE, MatchesDiskOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0, kTwoPi);
  for (int k = 0; k < 30; ++k) {
    auto leaves = oracle::random_leaves(rng, 1 + k % 12);
    DiscreteLamination l = to_lamination(leaves);
    Complex base = default_base_point(l);
    oracle::cd base_disk = half_plane_to_disk(base);
    for (int j = 0; j < 20; ++j) {
      double theta = ang(rng);
      double expect = oracle_dot(leaves, base_disk, theta);
      EXPECT_NEAR(dot_E(l, BoundaryPoint::disk(theta), base).value.angular, expect, 1e-10);
    }
  }
}

TEST(DotE, Linearity) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ang(0, kTwoPi);
  auto leaves = oracle::random_leaves(rng, 8);
  std::vector<oracle::Leaf> first(leaves.begin(), leaves.begin() + 4), second(leaves.begin() + 4, leaves.end());
  DiscreteLamination a = to_lamination(first), b = to_lamination(second), ab = to_lamination(leaves);
  Complex base = default_base_point(ab);
  for (int j = 0; j < 50; ++j) {
    BoundaryPoint z = BoundaryPoint::disk(ang(rng));
    double sum = 2.0 * dot_E(a, z, base).value.angular + dot_E(b, z, base).value.angular;
    EXPECT_NEAR(dot_E(a.scaled(2.0) + b, z, base).value.angular, sum, 1e-12);
  }
}

TEST(DotE, FieldConvergesAlongConvergingLeaves) {
  Geodesic limit = Geodesic::disk(1.0, 4.0);
  Complex base = disk_to_half_plane(0);
  BoundaryPoint z = BoundaryPoint::disk(2.5);
  double target = dot_E(DiscreteLamination({{limit, 1.0}}), z, base).value.angular;
  double prev = 1e9;
  for (double eps : {0.1, 0.01, 0.001}) {
    DiscreteLamination l({{Geodesic::disk(1.0 + eps, 4.0 - eps), 1.0}});
    double gap = std::abs(dot_E(l, z, base).value.angular - target);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(DotE, BandConvergesAsTolShrinks) {
  BandLamination band = BandLamination::fixture();
  Complex base = disk_to_half_plane(0);
  BoundaryPoint z = BoundaryPoint::disk(3.0);
  double th = thurston_norm(band).lower;
  auto coarse = dot_E(band, z, base, 1e-4, th);
  auto fine = dot_E(band, z, base, 5e-5, th);
  EXPECT_FALSE(coarse.exact);
  EXPECT_GT(fine.truncation_depth, coarse.truncation_depth);
  EXPECT_NEAR(coarse.value.angular, fine.value.angular, 2e-4);
  EXPECT_GT(std::abs(fine.value.angular), 0.0);
}

TEST(Tail, DiscreteBoundHolds) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ang(0, kTwoPi);
  int nonzero = 0;
  for (int k = 0; k < 20; ++k) {
    DiscreteLamination l = to_lamination(oracle::random_leaves(rng, 12));
    Complex base = default_base_point(l);
    double th = thurston_norm(l).lower;
    for (int j = 0; j < 10; ++j) {
      BoundaryPoint z = BoundaryPoint::disk(ang(rng));
      for (double d : {0.0, 1.0, 2.0, 4.0, 8.0}) {
        auto rep = tail_report(l, z, base, d, th);
        EXPECT_TRUE(rep.holds()) << rep.measured_tail << " > " << rep.analytic_bound;
        if (rep.measured_tail > 0) ++nonzero;
      }
    }
  }
  EXPECT_GT(nonzero, 100);
}

TEST(Tail, BandBoundHoldsAndDecays) {
  BandLamination band = BandLamination::fixture();
  Complex base = disk_to_half_plane(0);
  BoundaryPoint z = BoundaryPoint::disk(3.0);
  double th = thurston_norm(band).lower;
  double prev = 1e9;
  for (double d : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    auto rep = tail_report(band, z, base, d, th);
    ASSERT_TRUE(rep.constants.crossing);
    EXPECT_TRUE(rep.holds());
    EXPECT_LE(rep.measured_tail, prev);
    prev = rep.measured_tail;
  }
}

TEST(Tail, NoCrossingIsEmpty) {
  DiscreteLamination l({{Geodesic::disk(1.0, 2.0), 1.0}});
  auto rep = tail_report(l, BoundaryPoint::disk(4.0), disk_to_half_plane(0), 0.0);
  EXPECT_FALSE(rep.constants.crossing);
  EXPECT_EQ(rep.measured_tail, 0.0);
}

TEST(FiniteDifference, SlopeAndSize) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(0, kTwoPi);
  std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  for (int k = 0; k < 10; ++k) {
    DiscreteLamination l = to_lamination(oracle::random_leaves(rng, 10));
    Complex base = default_base_point(l);
    for (int j = 0; j < 5; ++j) {
      auto rep = fd_check(l, BoundaryPoint::disk(ang(rng)), base, grid);
      EXPECT_LT(rep.rows.back().discrepancy, 1e-3);
      if (!rep.exact) {
        EXPECT_NEAR(rep.slope, 1.0, 0.2);
      }
    }
  }
}

TEST(FiniteDifference, SingleLeafClosedForm) {
  // E^{t delta}(x) = e^t x on the far side
  DiscreteLamination l({{Geodesic(r(0), inf), 1.0}});
  auto rep = fd_check(l, r(2.0), Complex(-1, 1), {1e-2, 1e-3});
  for (const auto& row : rep.rows) {
    double theta_t = BoundaryPoint::real(2.0 * std::exp(row.t)).angle();
    double expect = std::remainder(theta_t - r(2.0).angle(), kTwoPi) / row.t;
    EXPECT_NEAR(row.fd, expect, 1e-9);
  }
}
