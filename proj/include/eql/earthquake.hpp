#pragma once

#include <array>
#include <functional>
#include <vector>

#include "eql/laminations.hpp"

namespace eql {

inline constexpr std::size_t kMaxEarthquakeLeaves = 10'000;

// Boundary map as a function on BoundaryPoint (chart preserved).
using CircleMap = std::function<BoundaryPoint(const BoundaryPoint&)>;

// One Mobius map on the counterclockwise arc [from, to).
struct MobiusPiece {
  BoundaryPoint from, to;
  Mobius map;
};

// Circle map given piece by piece; the pieces cover the circle counterclockwise.
class PiecewiseMobius {
 public:
  PiecewiseMobius() : pieces_{{BoundaryPoint::disk(0), BoundaryPoint::disk(0), Mobius()}} {}
  explicit PiecewiseMobius(std::vector<MobiusPiece> pieces);

  const std::vector<MobiusPiece>& pieces() const { return pieces_; }
  std::size_t piece_index(const BoundaryPoint& x) const;
  BoundaryPoint operator()(const BoundaryPoint& x) const;
  PiecewiseMobius post_compose(const Mobius& m) const;
  PiecewiseMobius pre_compose(const Mobius& m) const;
  // Post-composed so that 1, i, -1 are fixed.
  PiecewiseMobius normalized() const;
  CircleMap as_function() const;

 private:
  std::vector<MobiusPiece> pieces_;
};

// Mobius map fixing 1, i, -1 after h.
Mobius normalizer(const CircleMap& h);

// Earthquake of a finite lamination, identity on the stratum holding the base point.
// Interior points (base point included) live in the half-plane chart.
class FiniteEarthquake {
 public:
  FiniteEarthquake(DiscreteLamination lambda, Complex base_point);

  const DiscreteLamination& lamination() const { return lambda_; }
  Complex base_point() const { return base_; }
  std::size_t size() const { return lambda_.size(); }

  // Leaf i oriented with the base stratum on its left; its far arc runs a -> b.
  const Geodesic& oriented_leaf(std::size_t i) const { return oriented_[i]; }
  int parent(std::size_t i) const { return parent_[i]; }
  // Map on the stratum just beyond leaf i.
  const Mobius& far_map(std::size_t i) const { return maps_[i]; }
  // (map on the near side)^{-1} * (map on the far side).
  Mobius comparison(std::size_t i) const;

  // Deepest leaf whose far side strictly contains the point, or -1 for the base stratum.
  int stratum_of(const BoundaryPoint& x) const;
  int stratum_of(Complex z) const;
  const Mobius& map_of(int stratum) const;

  BoundaryPoint eval_boundary(const BoundaryPoint& x) const;
  Complex eval(Complex z) const;
  PiecewiseMobius boundary_table() const;
  CircleMap as_function() const;

 private:
  DiscreteLamination lambda_;
  Complex base_;
  std::vector<Geodesic> oriented_;
  std::vector<int> parent_;
  std::vector<Mobius> maps_;
  // extended-precision copies; comparisons of deep strata cancel heavily
  std::vector<std::array<long double, 4>> wide_;
  Mobius identity_;
  // far arcs unwrapped from a cut point outside every far arc, in preorder
  double cut_ = 0.0;
  std::vector<std::size_t> order_;
  std::vector<double> lo_, hi_;  // indexed by position in order_
  std::vector<int> pos_;         // leaf -> position in order_
};

FiniteEarthquake build_earthquake(const DiscreteLamination& lambda, Complex base_point);
// Earthquake of t * lambda with the same base point; t >= 0.
FiniteEarthquake earthquake_path(const DiscreteLamination& lambda, double t, Complex base_point);
// A point off every leaf, preferring i (the disk origin).
Complex default_base_point(const DiscreteLamination& lambda);

// Earthquake measure of a finite piecewise-Mobius earthquake.
// Throws NotAnEarthquake naming the offending pieces.
DiscreteLamination extract_measure(const PiecewiseMobius& h, const Tolerances& tol = {});

}  // namespace eql
