#pragma once

#include <string>
#include <vector>

#include "eql/hyp_core.hpp"

namespace eql {

// Side flags for generalized boxes. A point side has coinciding corners.
struct BoxFlags {
  bool open_a = false, open_b = false, open_c = false, open_d = false;
  bool point_ab = false, point_cd = false;

  bool operator==(const BoxFlags&) const = default;
  std::vector<std::string> names() const;
  static BoxFlags from_names(const std::vector<std::string>& names);
};

// Q = [a, b] x [c, d] with a, b, c, d counterclockwise.
class GeodesicBox {
 public:
  GeodesicBox(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
              const BoundaryPoint& d, BoxFlags flags = {}, double tol = 1e-12);
  static GeodesicBox disk(double a, double b, double c, double d, BoxFlags flags = {});

  const BoundaryPoint& a() const { return a_; }
  const BoundaryPoint& b() const { return b_; }
  const BoundaryPoint& c() const { return c_; }
  const BoundaryPoint& d() const { return d_; }
  const BoxFlags& flags() const { return flags_; }
  bool degenerate() const { return flags_.point_ab || flags_.point_cd; }
  Chart chart() const { return a_.chart(); }
  GeodesicBox in_chart(Chart c) const;
  GeodesicBox with_flags(BoxFlags f) const;

  bool first_arc_contains(const BoundaryPoint& x, double tol = 1e-12) const;
  bool second_arc_contains(const BoundaryPoint& x, double tol = 1e-12) const;
  bool contains(const Geodesic& g, double tol = 1e-12) const;
  // Arc-wise inclusion of closed boxes (flags ignored).
  bool contains_box(const GeodesicBox& inner, double tol = 1e-12) const;
  // Some geodesic lies in both closed boxes.
  bool meets(const GeodesicBox& other, double tol = 1e-12) const;

  double first_arc_length() const;
  double second_arc_length() const;

 private:
  BoundaryPoint a_, b_, c_, d_;
  BoxFlags flags_;
};

// (a-c)(b-d)/((a-d)(b-c)); throws DegenerateQuadruple.
double cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                   const BoundaryPoint& d, double tol = 1e-12);

// |log |cr(a,b,c,d)||; throws DegenerateBox for point sides.
double liouville(const GeodesicBox& q);

GeodesicBox transform(const Mobius& m, const GeodesicBox& q);

double omega0();
GeodesicBox q_star();
GeodesicBox q_star_0();
Geodesic q_star_center();
double log_two();

inline constexpr double kLogTwoTolerance = 1e-8;

// Mobius map with gamma_Q(Q*) = Q corner by corner; throws NotLogTwoBox.
Mobius gamma_Q(const GeodesicBox& q, double tol_l = kLogTwoTolerance);
Geodesic box_center(const GeodesicBox& q, double tol_l = kLogTwoTolerance);

// Log-2 box with the given center; s in (0, 1), s = 1/2 symmetric.
GeodesicBox log2_box_family(const Geodesic& center, double s);
// Same family indexed by tau = log(s / (1 - s)).
GeodesicBox log2_box_tau(const Geodesic& center, double tau);
// Orientation-preserving map sending the center of Q* to `center` (fixed convention).
Mobius center_frame(const Geodesic& center);

// Smallest box [a, b] x [c, d] whose arcs contain the endpoints of every listed
// geodesic, given that all of them are nested between `outer1` and `outer2`.
GeodesicBox box_between(const Geodesic& outer1, const Geodesic& outer2);

// Grow both arcs symmetrically until liouville = target; returns the input
// unchanged when already at or above the target.
GeodesicBox inflate_to(const GeodesicBox& q, double target);

}  // namespace eql
