#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include "eql/hyp_core.hpp"

namespace eql::detail {

// Signed (p1-p3)(p2-p4)/((p1-p4)(p2-p3)), infinity handled as a limit.
// No distinctness check.
double cross_ratio_raw(const BoundaryPoint& p1, const BoundaryPoint& p2, const BoundaryPoint& p3,
                       const BoundaryPoint& p4);

// Endpoints of two disjoint geodesics arranged counterclockwise as (a, b, c, d)
// with g = {a, b} and h = {c, d}. Throws GeodesicsCross.
std::array<BoundaryPoint, 4> disjoint_order(const Geodesic& g, const Geodesic& h, double tol = 1e-12);

// Worker count: EARTHQUAKE_LAB_THREADS if set, else hardware concurrency.
std::size_t thread_cap();

// Runs body(i) for i in [0, n) on up to thread_cap() threads. Callers write
// results into pre-sized slots so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace eql::detail
