#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "eql/earthquake.hpp"
#include "eql/search.hpp"

namespace eql {

using Profile = std::function<double(const Geodesic&)>;

// Built-in bump: 1 on Q*_0, 0 off the interior of Q*. In between it is
// S(1 - dx/c) S(1 - dy/c) with S the quintic smoothstep, dx, dy the endpoint
// distances to the arcs of Q*_0 and c = pi/8 the collar width. C^2, so band
// quadrature converges fast.
double phi0(const Geodesic& g);
// max over u of 2 S(u) S'(u), attained at u = 0.62976535...
inline constexpr double kSmoothstepProductSlope = 2.3896422191463413;
// Lipschitz constant for the max-of-endpoints metric on geodesics.
inline constexpr double kPhi0Lipschitz = 8.0 / kPi * kSmoothstepProductSlope;
// max(sup |phi0|, Lipschitz constant)
inline constexpr double kPhi0Norm1 = kPhi0Lipschitz;

// ((pi/2)^(1-nu) ||phi0||_1)^(-1), the normalization of psi_{0,nu}.
double psi_scale(double nu);

// scale * profile(gamma^{-1}(g)), supported in box = gamma(Q*).
struct TestFunction {
  GeodesicBox box;
  Mobius gamma;
  Mobius gamma_inverse;
  double nu = 1.0;
  double scale = 1.0;
  Profile profile;

  double operator()(const Geodesic& g) const { return scale * profile(gamma_inverse.apply(g)); }
  // Value composed back to Q*: scale * profile.
  double pulled_back(const Geodesic& g) const { return scale * profile(g); }
};

// psi_{0,nu} transported to the log 2 box q.
TestFunction make_test_function(const GeodesicBox& q, double nu);

struct HolderOptions {
  std::size_t pairs = 10'000;
  std::uint64_t seed = 1;
  // Pairs are drawn near the arcs of this box (default Q*).
  std::optional<GeodesicBox> focus;
  // Known bounds of the function; enable the analytic upper bound.
  std::optional<double> sup_abs;
  std::optional<double> lipschitz;
  std::optional<double> oscillation;  // defaults to 2 * sup_abs
};

struct HolderEstimate {
  double lower = 0.0;                // sampled max(sup |f|, Holder quotient)
  std::optional<double> upper;       // max(sup, Lip^nu * osc^(1-nu))
  std::optional<double> comparison;  // (pi/2)^(1-nu) max(sup, Lip)
};

HolderEstimate holder_norm(const Profile& f, double nu, const HolderOptions& opt = {});
// Largest Holder quotient of tf composed back to Q*, on fresh pairs.
double audit_test_function(const TestFunction& tf, std::size_t pairs, std::uint64_t seed);

// Integral of profile o gamma_Q^{-1} against lambda1 - lambda2; profile supported in Q*.
double pairing(const LaminationOracle& l1, const LaminationOracle& l2, const Profile& profile,
               const GeodesicBox& q);

// Sup over log 2 boxes of |pairing|. Candidates: tau sweeps around sampled
// leaves of both laminations, plus `extra` boxes.
BoxSearchResult pairing_sup(const LaminationOracle& l1, const LaminationOracle& l2, const Profile& profile,
                            const SearchBudget& budget = {}, const std::vector<GeodesicBox>& extra = {});

struct FrechetResult {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_certified = false;  // both parts discrete, so box sups are exact
  std::optional<GeodesicBox> witness;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

// Interval for ||lambda1 - lambda2||_nu.
FrechetResult frechet_norm(const LaminationOracle& l1, const LaminationOracle& l2, double nu,
                           const SearchBudget& budget = {}, const std::vector<GeodesicBox>& extra = {});

// Sup over log 2 boxes of |int f d(gamma_Q^* l1 - gamma_Q^* l2)|; a lower bound.
BoxSearchResult uweak_distance(const LaminationOracle& l1, const LaminationOracle& l2, const Profile& f,
                               const SearchBudget& budget = {});

// Cover of Q* by grid cells with L <= L(Q*_0), each inside a Mobius image of Q*_0.
struct StarCover {
  std::vector<GeodesicBox> cells;
  std::vector<Mobius> maps;  // maps[j](Q*_0) contains cells[j]
  int divisions = 0;
};
const StarCover& q_star_cover();
// Constant with sup_Q lambda(Q) <= C1 * ||lambda||_nu, from the cover.
double box_frechet_constant(double nu);
// Log 2 boxes gamma_Q(maps[j](Q*)) whose psi-test functions dominate the cells of q.
std::vector<GeodesicBox> cover_seeds(const GeodesicBox& q);

// Real boundary vector field. Stored as the angular coefficient v with
// V(z) = i z v(theta) in the disk chart.
class CircleVectorField {
 public:
  CircleVectorField() : v_([](double) { return 0.0; }) {}
  static CircleVectorField angular(std::function<double(double)> v);
  // V(x) in the half-plane chart; at_infinity = lim 2 V(x) / (1 + x^2).
  static CircleVectorField half_plane(std::function<double(double)> v, double at_infinity = 0.0);

  double angular_value(double theta) const;
  Complex disk_value(double theta) const;
  // Half-plane value at a finite x.
  double half_plane_value(double x) const;
  CircleVectorField operator+(const CircleVectorField& o) const;
  CircleVectorField scaled(double c) const;

 private:
  explicit CircleVectorField(std::function<double(double)> v) : v_(std::move(v)) {}
  std::function<double(double)> v_;
};

// Four-term difference quotient V[Q]; throws NonFinite.
double cross_ratio_term(const CircleVectorField& v, const GeodesicBox& q);

struct CrossRatioOptions {
  int center_grid = 24;  // geodesics between grid points of the circle
  std::vector<Geodesic> centers;  // extra centers
};

// Sup of |V[Q]| over log 2 boxes; a lower bound. Boxes with corners closer
// than 1e-5 are skipped (no significant digits survive there).
BoxSearchResult crossratio_norm(const CircleVectorField& v, const SearchBudget& budget = {},
                                const CrossRatioOptions& opt = {});

struct ZygmundGrid {
  int points = 512;
  int scales = 24;
  double t_min = 1e-4;
  double t_max = 3.0;
};
// Sampled second-difference quotient of V minus its quadratic interpolant at
// angles 0, pi/2, pi; a lower bound of the Zygmund norm modulo quadratics.
double zygmund_norm(const CircleVectorField& v, const ZygmundGrid& grid = {});

// |L(h(Q)) - L(Q)|, i.e. |L(h(Q)) - log 2| on log 2 boxes.
double box_distortion(const CircleMap& h, const GeodesicBox& q);
BoxSearchResult qs_distortion(const CircleMap& h, const SearchBudget& budget = {},
                              const CrossRatioOptions& opt = {});

struct QsGrid {
  int points = 512;
  int scales = 16;
  double t_min = 1e-3;
};
// Sampled sup of max(r, 1/r) for adjacent equal arcs in angle measure.
double qs_constant(const CircleMap& h, const QsGrid& grid = {});

}  // namespace eql
