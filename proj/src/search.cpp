#include "eql/search.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "eql/detail.hpp"

namespace eql {

ComparisonConstants comparison_constants() {
  ComparisonConstants k;
  k.L0 = 1.0;
  k.box_distance = std::log(omega0());
  // Box spanned by two geodesics L0 apart: its inflation to log 2 holds every
  // leaf crossing a unit arc, so one log 2 box suffices when L' <= log 2.
  double e = std::exp(k.L0);
  k.L_prime = liouville(box_between(Geodesic(BoundaryPoint::real(-1), BoundaryPoint::real(1)),
                                    Geodesic(BoundaryPoint::real(e), BoundaryPoint::real(-e))));
  k.C0 = k.L_prime <= log_two() ? 1.0 : std::ceil(k.L0 / k.box_distance) + 1.0;
  k.reverse = std::ceil(k.box_distance / k.L0);
  return k;
}

// ---------------------------------------------------------------------------
// Laminar forest of a discrete lamination

namespace {

struct Forest {
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<double> above;  // total weight of strict ancestors
  std::vector<std::vector<int>> up;

  explicit Forest(const DiscreteLamination& lam) {
    const auto& leaves = lam.leaves();
    const int n = int(leaves.size());
    parent.assign(n, -1);
    depth.assign(n, 0);
    above.assign(n, 0.0);
    std::vector<int> stack;
    auto hi = [&](int i) { return std::max(leaves[i].g.a().angle(), leaves[i].g.b().angle()); };
    auto lo = [&](int i) { return std::min(leaves[i].g.a().angle(), leaves[i].g.b().angle()); };
    // leaves() is sorted by (lo ascending, hi descending)
    for (int i = 0; i < n; ++i) {
      while (!stack.empty() && lo(i) >= hi(stack.back()) - 1e-12) stack.pop_back();
      if (!stack.empty()) {
        int p = stack.back();
        parent[i] = p;
        depth[i] = depth[p] + 1;
        above[i] = above[p] + leaves[p].w;
      }
      stack.push_back(i);
    }
    int levels = 1;
    while ((1 << levels) < std::max(n, 2)) ++levels;
    up.assign(levels, std::vector<int>(n, -1));
    up[0] = parent;
    for (int k = 1; k < levels; ++k)
      for (int i = 0; i < n; ++i) up[k][i] = up[k - 1][i] < 0 ? -1 : up[k - 1][up[k - 1][i]];
  }

  int lift(int i, int steps) const {
    for (int k = 0; i >= 0 && steps > 0; ++k, steps >>= 1)
      if (steps & 1) i = up[k][i];
    return i;
  }

  // Lowest common ancestor, or -1 in different trees.
  int lca(int i, int j) const {
    if (depth[i] < depth[j]) std::swap(i, j);
    i = lift(i, depth[i] - depth[j]);
    if (i == j) return i;
    for (int k = int(up.size()) - 1; k >= 0; --k) {
      if (up[k][i] != up[k][j]) {
        i = up[k][i];
        j = up[k][j];
      }
    }
    return parent[i];
  }
};

// Mass of leaves weakly between leaves i and j: those separating them plus both.
double between_mass(const DiscreteLamination& lam, const Forest& f, int i, int j) {
  const auto& L = lam.leaves();
  if (i == j) return L[i].w;
  int l = f.lca(i, j);
  if (l == j) return L[i].w + f.above[i] - f.above[j];
  if (l == i) return L[j].w + f.above[j] - f.above[i];
  double shared = l < 0 ? 0.0 : f.above[l] + L[l].w;
  return L[i].w + L[j].w + f.above[i] + f.above[j] - 2.0 * shared;
}

}  // namespace

PairMax max_pair_mass(const DiscreteLamination& lambda, double r) {
  PairMax best;
  const auto& L = lambda.leaves();
  const std::size_t n = L.size();
  if (n == 0) return best;
  Forest forest(lambda);
  std::vector<PairMax> rows(n);
  double cut = r * (1.0 + 1e-12) + 1e-12;
  detail::parallel_for(n, [&](std::size_t i) {
    PairMax row{L[i].w, i, i};
    for (std::size_t j = i + 1; j < n; ++j) {
      if (hyperbolic_distance(L[i].g, L[j].g) > cut) continue;
      double m = between_mass(lambda, forest, int(i), int(j));
      if (m > row.mass) row = {m, i, j};
    }
    rows[i] = row;
  });
  best = rows[0];
  for (const auto& row : rows)
    if (row.mass > best.mass) best = row;
  return best;
}

Segment unit_arc_between(const Geodesic& g, const Geodesic& h) {
  using BP = BoundaryPoint;
  if (same_geodesic(g, h)) {
    BP third = BP::disk(g.b().angle() + 0.5 * ccw_distance(g.b().angle(), g.a().angle()));
    Mobius m = mobius_from_triples({g.a(), g.b(), third}, {BP::real(-1), BP::real(1), BP::infinity()});
    Mobius inv = m.inverse();
    return {inv.apply(Complex(0, std::exp(-0.5))), inv.apply(Complex(0, std::exp(0.5)))};
  }
  auto [a, b, c, d] = detail::disjoint_order(g, h);
  if (same_point(b, c) || same_point(d, a)) {
    const BP& s = same_point(b, c) ? b : a;
    const BP& p = same_point(b, c) ? a : b;
    const BP& q = same_point(b, c) ? d : c;
    std::array<BP, 3> src = cyclic_orientation(p, q, s) > 0 ? std::array<BP, 3>{p, q, s}
                                                            : std::array<BP, 3>{q, p, s};
    Mobius inv = mobius_from_triples(src, {BP::real(0), BP::real(1), BP::infinity()}).inverse();
    double y = 1.0 / (2.0 * std::sinh(0.5));
    return {inv.apply(Complex(0, y)), inv.apply(Complex(1, y))};
  }
  double D = hyperbolic_distance(g, h);
  if (D > 1.0 + 1e-9) throw Error("unit_arc_between: geodesics are more than 1 apart");
  double e = std::exp(D);
  Mobius inv = mobius_from_triples({a, b, c}, {BP::real(-1), BP::real(1), BP::real(e)}).inverse();
  double pad = 0.5 * std::max(0.0, 1.0 - D);
  return {inv.apply(Complex(0, std::exp(-pad))), inv.apply(Complex(0, std::exp(D + pad)))};
}

// ---------------------------------------------------------------------------
// Continuous search

namespace {

struct NmContext {
  const std::function<double(const GeodesicBox&)>* f;
  std::size_t evals = 0;
};

double box_at(const std::function<double(const GeodesicBox&)>& f, const std::array<double, 3>& x) {
  try {
    return f(log2_box_tau(Geodesic::disk(x[0], x[1]), x[2]));
  } catch (const Error&) {
    return 0.0;
  }
}

double nm_objective(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<NmContext*>(params);
  ++ctx->evals;
  std::array<double, 3> x{gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2)};
  return -box_at(*ctx->f, x);
}

// Family parameter of a log 2 box relative to its own center, if recoverable.
std::optional<std::array<double, 3>> family_coordinates(const GeodesicBox& q) {
  try {
    Geodesic c = box_center(q);
    Mobius t = center_frame(c).inverse() * gamma_Q(q);
    TranslationData td = translation_length_axis(t);
    double tau = 0.0;
    if (td.axis) {
      bool forward = metric_circle(td.axis->b(), BoundaryPoint::disk(0.75 * kPi)) < 1e-6;
      tau = forward ? td.length : -td.length;
    }
    GeodesicBox back = log2_box_tau(c, tau);
    if (!back.contains_box(q, 1e-7) || !q.contains_box(back, 1e-7)) return std::nullopt;
    return std::array<double, 3>{c.a().angle(), c.b().angle(), tau};
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

RefineResult refine_box_search(const std::function<double(const GeodesicBox&)>& f,
                               const std::vector<std::array<double, 3>>& seeds, int max_iters) {
  RefineResult best;
  NmContext ctx{&f};
  gsl_multimin_function fn{&nm_objective, 3, &ctx};
  const gsl_multimin_fminimizer_type* type = gsl_multimin_fminimizer_nmsimplex2;
  for (const auto& seed : seeds) {
    double v0 = box_at(f, seed);
    ++ctx.evals;
    if (v0 > best.value || &seed == &seeds.front()) {
      best.value = v0;
      best.x = seed;
    }
    gsl_vector* x = gsl_vector_alloc(3);
    gsl_vector* step = gsl_vector_alloc(3);
    for (int k = 0; k < 3; ++k) gsl_vector_set(x, k, seed[k]);
    gsl_vector_set(step, 0, 0.05);
    gsl_vector_set(step, 1, 0.05);
    gsl_vector_set(step, 2, 0.5);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(type, 3);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int it = 0; it < max_iters; ++it) {
      if (gsl_multimin_fminimizer_iterate(s)) break;
      if (gsl_multimin_fminimizer_size(s) < 1e-9) break;
    }
    double v = -s->fval;
    if (v > best.value) {
      best.value = v;
      for (int k = 0; k < 3; ++k) best.x[k] = gsl_vector_get(s->x, k);
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(step);
  }
  best.evaluations = ctx.evals;
  return best;
}

namespace {


bool box_less(const GeodesicBox& p, const GeodesicBox& q) {
  std::array<double, 4> x{p.a().angle(), p.b().angle(), p.c().angle(), p.d().angle()};
  std::array<double, 4> y{q.a().angle(), q.b().angle(), q.c().angle(), q.d().angle()};
  return x < y;
}

BoxSupResult generic_box_sup(const LaminationOracle& lambda, const SearchBudget& budget) {
  const double r = std::log(omega0());
  auto samples = lambda.sample_leaves(budget.sample_leaves);
  std::vector<GeodesicBox> boxes = tau_sweep(samples, budget);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const Geodesic &g = samples[i], &h = samples[j];
      if (same_geodesic(g, h) || geodesics_cross(g, h)) continue;
      if (hyperbolic_distance(g, h) > r) continue;
      boxes.push_back(inflate_to(box_between(g, h), log_two()));
    }
  }
  BoxSearchResult found =
      maximize_over_boxes([&lambda](const GeodesicBox& q) { return lambda.box_mass(q); }, std::move(boxes), budget);
  BoxSupResult res;
  res.value = found.value;
  res.witness = found.witness;
  res.witness_mass = found.value;
  res.evaluations = found.evaluations;
  res.budget_exhausted = found.budget_exhausted;
  return res;
}

}  // namespace

std::vector<GeodesicBox> tau_sweep(const std::vector<Geodesic>& centers, const SearchBudget& budget) {
  std::vector<GeodesicBox> boxes;
  for (const auto& c : centers) {
    for (int k = 0; k < budget.tau_steps; ++k) {
      double tau = budget.tau_steps == 1 ? 0.0
                                         : -budget.tau_max + 2.0 * budget.tau_max * k / (budget.tau_steps - 1);
      // at extreme tau near short leaves the corners crowd and L loses its digits
      try {
        GeodesicBox q = log2_box_tau(c, tau);
        if (std::abs(liouville(q) - log_two()) <= kLogTwoTolerance) boxes.push_back(q);
      } catch (const Error&) {
      }
    }
  }
  return boxes;
}

BoxSearchResult maximize_over_boxes(const std::function<double(const GeodesicBox&)>& f,
                                    std::vector<GeodesicBox> boxes, const SearchBudget& budget) {
  BoxSearchResult res;
  if (boxes.size() > budget.max_evaluations) {
    boxes.erase(boxes.begin() + std::ptrdiff_t(budget.max_evaluations), boxes.end());
    res.budget_exhausted = true;
  }
  std::vector<double> value(boxes.size());
  detail::parallel_for(boxes.size(), [&](std::size_t i) { value[i] = f(boxes[i]); });
  res.evaluations = boxes.size();
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    if (value[p] != value[q]) return value[p] > value[q];
    return box_less(boxes[p], boxes[q]);
  });
  if (order.empty()) return res;
  res.value = value[order[0]];
  res.witness = boxes[order[0]];

  std::vector<std::array<double, 3>> seeds;
  for (std::size_t k = 0; k < order.size() && int(seeds.size()) < budget.refine_starts; ++k) {
    if (auto x = family_coordinates(boxes[order[k]])) seeds.push_back(*x);
  }
  if (!seeds.empty() && budget.refine_iters > 0 && res.evaluations < budget.max_evaluations) {
    RefineResult rr = refine_box_search(f, seeds, budget.refine_iters);
    res.evaluations += rr.evaluations;
    if (rr.value > res.value) {
      res.value = rr.value;
      res.witness = log2_box_tau(Geodesic::disk(rr.x[0], rr.x[1]), rr.x[2]);
    }
  }
  if (res.evaluations > budget.max_evaluations) res.budget_exhausted = true;
  return res;
}

BoxSupResult box_sup(const LaminationOracle& lambda, const SearchBudget& budget) {
  if (const auto* d = lambda.as_discrete()) {
    BoxSupResult res;
    res.exact = true;
    if (d->empty()) return res;
    PairMax pm = max_pair_mass(*d, std::log(omega0()));
    const auto& L = d->leaves();
    res.value = pm.mass;
    res.witness = pm.i == pm.j ? log2_box_family(L[pm.i].g, 0.5)
                               : inflate_to(box_between(L[pm.i].g, L[pm.j].g), log_two());
    res.witness_mass = d->box_mass(*res.witness);
    res.evaluations = d->size() * (d->size() + 1) / 2;
    return res;
  }
  return generic_box_sup(lambda, budget);
}

ThurstonResult thurston_norm(const LaminationOracle& lambda, const SearchBudget& budget) {
  ThurstonResult res;
  res.constants = comparison_constants();
  BoxSupResult bs = box_sup(lambda, budget);
  res.budget_exhausted = bs.budget_exhausted;
  double total = lambda.total_mass();
  if (std::isfinite(total)) res.certified_upper = total;
  if (const auto* d = lambda.as_discrete()) {
    res.exact = true;
    if (!d->empty()) {
      PairMax pm = max_pair_mass(*d, res.constants.L0);
      res.lower = pm.mass;
      res.witness_arc = unit_arc_between(d->leaves()[pm.i].g, d->leaves()[pm.j].g);
    }
  } else {
    auto samples = lambda.sample_leaves(budget.sample_leaves);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (std::size_t j = i + 1; j < samples.size(); ++j) {
        const Geodesic &g = samples[i], &h = samples[j];
        if (same_geodesic(g, h) || geodesics_cross(g, h)) continue;
        if (hyperbolic_distance(g, h) > res.constants.L0) continue;
        double m = lambda.box_mass(box_between(g, h));
        if (m > res.lower) {
          res.lower = m;
          res.witness_arc = unit_arc_between(g, h);
        }
      }
    }
  }
  res.upper = std::max(res.constants.C0 * bs.value, res.lower);
  return res;
}

}  // namespace eql
