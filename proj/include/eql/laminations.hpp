#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eql/boxes.hpp"

namespace eql {

using GeodesicPredicate = std::function<bool(const Geodesic&)>;
using GeodesicFunction = std::function<double(const Geodesic&)>;

inline constexpr double kAtomFloor = 1e-15;

struct WeightedLeaf {
  Geodesic g;
  double w;
};

class DiscreteLamination;

// Box-measure interface shared by discrete, band and derived laminations.
class LaminationOracle {
 public:
  virtual ~LaminationOracle() = default;

  // Integral of f over the leaves satisfying pred (empty pred = all leaves).
  virtual double integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const = 0;
  virtual double integrate_box(const GeodesicFunction& f, const GeodesicBox& q) const;
  virtual double box_mass(const GeodesicBox& q) const;
  double mass_where(const GeodesicPredicate& pred) const;

  virtual std::vector<WeightedLeaf> atoms_in(const GeodesicBox& q) const = 0;
  // Finite set of leaves containing the extreme leaves of {pred}: every leaf for
  // discrete laminations, the ends of each parameter interval for bands.
  virtual std::vector<Geodesic> extremes_where(const GeodesicPredicate& pred) const = 0;
  // Extreme leaves of the chain of leaves in q (at most two).
  virtual std::vector<Geodesic> peaks_in(const GeodesicBox& q) const;
  std::optional<Geodesic> some_leaf_in(const GeodesicBox& q) const;

  // A single box holding the support; absent when none exists.
  virtual std::optional<GeodesicBox> support_window() const = 0;
  virtual std::vector<Geodesic> sample_leaves(std::size_t max_count) const = 0;
  virtual double total_mass() const = 0;
  virtual std::shared_ptr<const LaminationOracle> continuous_part() const = 0;
  virtual const DiscreteLamination* as_discrete() const { return nullptr; }
};

using OraclePtr = std::shared_ptr<const LaminationOracle>;

// Finite weighted set of pairwise non-crossing geodesics.
class DiscreteLamination : public LaminationOracle {
 public:
  DiscreteLamination() = default;
  // Merges duplicates, drops weights below the atom floor, sorts canonically.
  // Throws CrossingLeaves on linked leaves and Error on non-positive weights.
  explicit DiscreteLamination(std::vector<WeightedLeaf> leaves);

  const std::vector<WeightedLeaf>& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  bool empty() const { return leaves_.empty(); }
  DiscreteLamination scaled(double c) const;
  DiscreteLamination operator+(const DiscreteLamination& o) const;
  bool has_leaf(const Geodesic& g, double tol = 1e-12) const;

  double integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const override;
  double box_mass(const GeodesicBox& q) const override;
  std::vector<WeightedLeaf> atoms_in(const GeodesicBox& q) const override;
  std::vector<Geodesic> extremes_where(const GeodesicPredicate& pred) const override;
  std::optional<GeodesicBox> support_window() const override;
  std::vector<Geodesic> sample_leaves(std::size_t max_count) const override;
  double total_mass() const override;
  OraclePtr continuous_part() const override;
  const DiscreteLamination* as_discrete() const override { return this; }

 private:
  std::vector<WeightedLeaf> leaves_;
};

// Polynomial in t with coefficients in increasing degree.
struct Polynomial {
  std::vector<double> coeffs;
  std::string family = "polynomial";  // "affine" or "polynomial"
  double operator()(double t) const;
  double derivative(double t) const;
};

using Interval = std::pair<double, double>;

// Leaves (alpha(t), beta(t)) in disk angles, t in [0, 1], with density rho(t).
class BandLamination : public LaminationOracle {
 public:
  BandLamination(Polynomial alpha, Polynomial beta, Polynomial rho, double tol_q = 1e-10);
  // alpha = 1 + t, beta = 5 - t, rho = 1
  static BandLamination fixture();

  Geodesic leaf(double t) const;
  const Polynomial& alpha() const { return alpha_; }
  const Polynomial& beta() const { return beta_; }
  const Polynomial& rho() const { return rho_; }
  double tol_q() const { return tol_q_; }
  double mass_between(double t0, double t1) const;
  std::vector<Interval> parameter_set(const GeodesicPredicate& pred) const;
  std::vector<Interval> box_parameter_set(const GeodesicBox& q) const;
  double integrate_parameter(const GeodesicFunction& f, const std::vector<Interval>& set) const;

  double integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const override;
  double integrate_box(const GeodesicFunction& f, const GeodesicBox& q) const override;
  double box_mass(const GeodesicBox& q) const override;
  std::vector<WeightedLeaf> atoms_in(const GeodesicBox&) const override { return {}; }
  std::vector<Geodesic> extremes_where(const GeodesicPredicate& pred) const override;
  std::vector<Geodesic> peaks_in(const GeodesicBox& q) const override;
  std::optional<GeodesicBox> support_window() const override;
  std::vector<Geodesic> sample_leaves(std::size_t max_count) const override;
  double total_mass() const override;
  OraclePtr continuous_part() const override;

 private:
  std::vector<Interval> preimage(const Polynomial& p, double from, double len) const;

  Polynomial alpha_, beta_, rho_;
  double tol_q_;
};

// A geodesic segment from an interior point to an interior or ideal point.
struct Segment {
  Complex start;
  std::variant<Complex, BoundaryPoint> end;
};
// The leaf meets the closed segment.
bool crosses(const Geodesic& g, const Segment& s);

// Leaves of a base oracle satisfying a predicate.
class FilteredOracle : public LaminationOracle {
 public:
  FilteredOracle(OraclePtr base, GeodesicPredicate keep);
  double integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const override;
  std::vector<WeightedLeaf> atoms_in(const GeodesicBox& q) const override;
  std::vector<Geodesic> extremes_where(const GeodesicPredicate& pred) const override;
  std::optional<GeodesicBox> support_window() const override { return base_->support_window(); }
  std::vector<Geodesic> sample_leaves(std::size_t max_count) const override;
  double total_mass() const override;
  OraclePtr continuous_part() const override;

 private:
  OraclePtr base_;
  GeodesicPredicate keep_;
};

// gamma^* lambda: support gamma^{-1}(|lambda|).
class PullbackOracle : public LaminationOracle {
 public:
  PullbackOracle(Mobius gamma, OraclePtr base);
  double integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const override;
  double box_mass(const GeodesicBox& q) const override;
  std::vector<WeightedLeaf> atoms_in(const GeodesicBox& q) const override;
  std::vector<Geodesic> extremes_where(const GeodesicPredicate& pred) const override;
  std::optional<GeodesicBox> support_window() const override;
  std::vector<Geodesic> sample_leaves(std::size_t max_count) const override;
  double total_mass() const override { return base_->total_mass(); }
  OraclePtr continuous_part() const override;

 private:
  Mobius gamma_, inverse_;
  OraclePtr base_;
};

// Sum of oracles with disjoint supports that do not cross each other.
class SumOracle : public LaminationOracle {
 public:
  explicit SumOracle(std::vector<OraclePtr> parts);
  double integrate_where(const GeodesicFunction& f, const GeodesicPredicate& pred) const override;
  double integrate_box(const GeodesicFunction& f, const GeodesicBox& q) const override;
  double box_mass(const GeodesicBox& q) const override;
  std::vector<WeightedLeaf> atoms_in(const GeodesicBox& q) const override;
  std::vector<Geodesic> extremes_where(const GeodesicPredicate& pred) const override;
  std::optional<GeodesicBox> support_window() const override;
  std::vector<Geodesic> sample_leaves(std::size_t max_count) const override;
  double total_mass() const override;
  OraclePtr continuous_part() const override;

 private:
  std::vector<OraclePtr> parts_;
};

DiscreteLamination pullback(const Mobius& gamma, const DiscreteLamination& lambda);
OraclePtr pullback(const Mobius& gamma, OraclePtr lambda);
OraclePtr restrict(OraclePtr lambda, const Segment& segment);

// Leaves of a chain of non-crossing geodesics in q ordered along the first arc.
std::pair<double, double> chain_key(const GeodesicBox& q, const Geodesic& g);

}  // namespace eql
