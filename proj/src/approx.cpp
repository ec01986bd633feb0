#include "eql/approx.hpp"

#include <algorithm>
#include <cmath>

#include "eql/detail.hpp"

namespace eql {

namespace {

GeodesicBox closure(const GeodesicBox& q) {
  BoxFlags f;
  f.point_ab = q.flags().point_ab;
  f.point_cd = q.flags().point_cd;
  return q.with_flags(f);
}

void split_until(const GeodesicBox& q, double max_l, int depth, std::vector<GeodesicBox>& out) {
  if (cell_liouville(q) <= max_l + 1e-12 || depth > 60) {
    out.push_back(q);
    return;
  }
  auto [lo, hi] = bisect(q);
  split_until(lo, max_l, depth + 1, out);
  split_until(hi, max_l, depth + 1, out);
}

// Leaf of lambda in the closed cell nearest the geodesic joining the arc
// midpoints. Peaks would tie on corners shared by neighbouring cells.
std::optional<Geodesic> central_leaf(const GeodesicBox& cell, const LaminationOracle& lambda) {
  GeodesicBox closed = closure(cell);
  double a = cell.a().angle(), c = cell.c().angle();
  Geodesic center = Geodesic::disk(a + 0.5 * cell.first_arc_length(), c + 0.5 * cell.second_arc_length());
  auto within = [&](double r) {
    return lambda.extremes_where(
        [&](const Geodesic& g) { return closed.contains(g) && metric_geodesics(g, center) <= r; });
  };
  double lo = 0.0, hi = kPi;
  std::vector<Geodesic> best = within(hi);
  if (best.empty()) return std::nullopt;
  for (int it = 0; it < 32; ++it) {
    double mid = 0.5 * (lo + hi);
    auto found = within(mid);
    if (found.empty()) {
      lo = mid;
    } else {
      hi = mid;
      best = std::move(found);
    }
  }
  return *std::min_element(best.begin(), best.end(), [&](const Geodesic& g, const Geodesic& h) {
    return metric_geodesics(g, center) < metric_geodesics(h, center);
  });
}

}  // namespace

double cell_liouville(const GeodesicBox& q) { return q.degenerate() ? 0.0 : liouville(q); }

std::pair<GeodesicBox, GeodesicBox> bisect(const GeodesicBox& q) {
  double a = q.a().angle(), c = q.c().angle();
  double l1 = q.first_arc_length(), l2 = q.second_arc_length();
  BoxFlags f = q.flags();
  BoxFlags lo = f, hi = f;
  if (l1 >= l2) {
    if (!(l1 > 0.0)) throw DegenerateBox("bisect: both sides are points");
    double m = a + 0.5 * l1;
    lo.open_b = true;
    hi.open_a = false;
    return {GeodesicBox::disk(a, m, c, c + l2, lo), GeodesicBox::disk(m, a + l1, c, c + l2, hi)};
  }
  double m = c + 0.5 * l2;
  lo.open_d = true;
  hi.open_c = false;
  return {GeodesicBox::disk(a, a + l1, c, m, lo), GeodesicBox::disk(a, a + l1, m, c + l2, hi)};
}

BoxPartition partition_window(const GeodesicBox& window, double max_l) {
  if (!(max_l > 0.0) || max_l > log_two() + 1e-12) throw Error("partition_window: max_l must lie in (0, log 2]");
  BoxPartition out{window.in_chart(Chart::Disk), {}};
  split_until(out.window, max_l, 0, out.cells);
  return out;
}

std::optional<GeodesicBox> peak_shrink(const GeodesicBox& b, const LaminationOracle& lambda) {
  GeodesicBox closed = closure(b);
  auto peaks = lambda.peaks_in(closed);
  for (const Geodesic& p : peaks)
    if (!closed.contains(p, 1e-9)) throw OracleInconsistent("peak_shrink: peak leaf outside the box");
  if (peaks.size() < 2) return std::nullopt;
  return box_between(peaks[0], peaks[1]);
}

DiscretizationReport discretize(const LaminationOracle& lambda, int n, const DiscretizeOptions& opt) {
  if (n < 1) throw Error("discretize: n must be positive");
  if (const DiscreteLamination* d = lambda.as_discrete()) {
    DiscretizationReport rep;
    rep.n = n;
    rep.atoms = d->leaves();
    rep.lambda_n = *d;
    if (opt.thurston_record) {
      double s = box_sup(*d, opt.budget).value;
      rep.thurston = ThurstonRecord{s, true, s, 2.0 * s + 2.0};
    }
    return rep;
  }
  auto w = lambda.support_window();
  if (!w) throw WindowRequired("discretize: lamination has no support window");
  GeodesicBox window = w->in_chart(Chart::Disk);
  const double cap = 1.0 / n;

  DiscretizationReport rep;
  rep.n = n;
  rep.atoms = lambda.atoms_in(window);
  OraclePtr cont = lambda.continuous_part();

  // refine until every cell carries continuous mass < 1/n
  std::vector<GeodesicBox> todo = partition_window(window, log_two()).cells;
  std::vector<std::pair<GeodesicBox, double>> kept;
  for (int depth = 0; !todo.empty(); ++depth) {
    std::vector<double> mass(todo.size());
    detail::parallel_for(todo.size(), [&](std::size_t i) { mass[i] = cont->box_mass(todo[i]); });
    std::vector<GeodesicBox> next;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      // cells at exactly 1/n must split even when quadrature lands just below
      if (mass[i] < cap * (1.0 - 1e-9)) {
        if (mass[i] > kAtomFloor) kept.emplace_back(todo[i], mass[i]);
        continue;
      }
      if (depth >= opt.max_depth) throw OracleInconsistent("discretize: cell mass does not shrink under bisection");
      auto [lo, hi] = bisect(todo[i]);
      next.push_back(lo);
      next.push_back(hi);
    }
    todo = std::move(next);
  }

  rep.ledger.resize(kept.size());
  detail::parallel_for(kept.size(), [&](std::size_t i) {
    LedgerEntry& e = rep.ledger[i];
    e.cell = kept[i].first;
    e.continuous_mass = kept[i].second;
    e.shrunk = peak_shrink(e.cell, *cont);
    e.leaf = central_leaf(e.cell, *cont);
  });

  std::vector<WeightedLeaf> leaves = rep.atoms;
  for (const LedgerEntry& e : rep.ledger) {
    if (e.leaf) leaves.push_back({*e.leaf, e.continuous_mass});
    else rep.dropped_mass += e.continuous_mass;
  }
  rep.lambda_n = DiscreteLamination(leaves);

  if (opt.thurston_record) {
    ThurstonRecord t;
    BoxSupResult in = box_sup(lambda, opt.budget);
    t.input_box_sup = in.value;
    t.input_exact = in.exact;
    t.output_box_sup = box_sup(rep.lambda_n, opt.budget).value;
    t.bound = 2.0 * t.input_box_sup + 2.0;
    rep.thurston = t;
  }
  return rep;
}

int overlap_census(const std::vector<GeodesicBox>& boxes, const GeodesicBox& q) {
  int count = 0;
  for (const GeodesicBox& b : boxes)
    if (q.meets(b) && !q.contains_box(b)) ++count;
  return count;
}

std::vector<GeodesicBox> ledger_boxes(const DiscretizationReport& report) {
  std::vector<GeodesicBox> out;
  for (const LedgerEntry& e : report.ledger)
    if (e.shrunk) out.push_back(*e.shrunk);
  return out;
}

}  // namespace eql
