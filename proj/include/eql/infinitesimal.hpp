#pragma once

#include <optional>
#include <vector>

#include "eql/norms.hpp"

namespace eql {

// Tangent value at a boundary point: the angular coefficient V(z)/(iz) and,
// at finite points of the half-plane chart, the real value V(x).
struct FieldValue {
  double angular = 0.0;
  std::optional<double> half_plane;
};

// (z-a)(z-b)/(a-b) in the disk chart with (a, z, b) counterclockwise; 0 at the endpoints.
Complex e_tilde_disk(const BoundaryPoint& z, const Geodesic& l);
// Same function in the chart of z: V(x) for finite half-plane points, the
// angular coefficient for disk points. Throws Error at the half-plane infinity.
double e_tilde(const BoundaryPoint& z, const Geodesic& l);

// Field of a unit-weight leaf oriented a -> b with the base stratum on its
// left: e_tilde on the far arc a -> b, 0 elsewhere.
FieldValue leaf_field(const Geodesic& oriented, const BoundaryPoint& z);

// Geodesic ray from the base point to z, sent to the ray from i to infinity.
class RayFrame {
 public:
  RayFrame(Complex base_point, const BoundaryPoint& z);
  // Distance from the base point to where g crosses the ray; nullopt when g
  // does not separate the base point from z (or ends at z).
  std::optional<double> crossing(const Geodesic& g) const;
  // Point of the ray at distance s from the base point (half-plane chart).
  Complex point(double s) const;

 private:
  Mobius to_frame_, from_frame_;
};

struct DecayConstants {
  double d0 = 0.0;  // distance from the disk origin to the start z0 of the ray
  double c1 = 0.0;  // 8 e^{D0} cosh(D0 + 1)
  double c2 = 0.0;  // C1 / (1 - e^{-1})
  double start = 0.0;  // distance from the base point to z0
  bool crossing = false;  // some leaf separates the base stratum from z
};

DecayConstants decay_constants(const LaminationOracle& lambda, Complex base_point, const BoundaryPoint& z);

struct DotEResult {
  FieldValue value;
  double tol = 0.0;
  bool exact = false;             // finite sum, no truncation
  double truncation_depth = 0.0;  // band case: leaves deeper than this are dropped
  double tail_bound = 0.0;        // angular bound on the dropped part
};

// Infinitesimal earthquake at z, normalized to vanish on the base stratum.
// Discrete laminations: exact sum. Otherwise: quadrature truncated where the
// decay bound drops below tol (in the chart of the reported value).
DotEResult dot_E(const LaminationOracle& lambda, const BoundaryPoint& z, Complex base_point, double tol = 1e-10,
                 std::optional<double> thurston = std::nullopt);

// Boundary field of a discrete lamination as a CircleVectorField.
CircleVectorField dot_E_field(const DiscreteLamination& lambda, Complex base_point);

struct TailBoundReport {
  double d = 0.0;
  double measured_tail = 0.0;
  double analytic_bound = 0.0;
  double thurston = 0.0;
  DecayConstants constants;
  bool holds() const { return measured_tail <= analytic_bound; }
};

// Tail of |e_tilde| beyond depth d along the ray from z0 to z, against
// C2 ||lambda||_Th e^{-d}. Pass the Thurston norm to skip its estimation.
TailBoundReport tail_report(const LaminationOracle& lambda, const BoundaryPoint& z, Complex base_point, double d,
                            std::optional<double> thurston = std::nullopt);

struct FdRow {
  double t = 0.0;
  double fd = 0.0;   // (angle of E^{t lambda}(z) - angle of z) / t
  double dot = 0.0;  // angular dot_E
  double discrepancy = 0.0;
};

struct FdReport {
  std::vector<FdRow> rows;
  double slope = 0.0;  // least-squares slope of log discrepancy against log t
  bool exact = false;  // every discrepancy is zero
};

FdReport fd_check(const DiscreteLamination& lambda, const BoundaryPoint& z, Complex base_point,
                  const std::vector<double>& t_grid);

}  // namespace eql
