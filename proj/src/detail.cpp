#include "eql/detail.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace eql::detail {

double cross_ratio_raw(const BoundaryPoint& p1, const BoundaryPoint& p2, const BoundaryPoint& p3,
                       const BoundaryPoint& p4) {
  bool all_h = p1.chart() == Chart::HalfPlane && p2.chart() == Chart::HalfPlane &&
               p3.chart() == Chart::HalfPlane && p4.chart() == Chart::HalfPlane;
  if (all_h) {
    auto diff = [](const BoundaryPoint& x, const BoundaryPoint& y) {
      if (x.is_infinity() || y.is_infinity()) return 1.0;
      return x.value() - y.value();
    };
    return diff(p1, p3) * diff(p2, p4) / (diff(p1, p4) * diff(p2, p3));
  }
  // e^{ia} - e^{ib} = 2i e^{i(a+b)/2} sin((a-b)/2); the phases cancel.
  auto s = [](const BoundaryPoint& x, const BoundaryPoint& y) {
    return std::sin(0.5 * (x.angle() - y.angle()));
  };
  return s(p1, p3) * s(p2, p4) / (s(p1, p4) * s(p2, p3));
}

std::array<BoundaryPoint, 4> disjoint_order(const Geodesic& g, const Geodesic& h, double tol) {
  if (geodesics_cross(g, h, tol)) throw GeodesicsCross("geodesics cross");
  BoundaryPoint a = g.a(), b = g.b();
  if (in_arc(h.a(), g.a(), g.b(), true, true, tol) || in_arc(h.b(), g.a(), g.b(), true, true, tol))
    std::swap(a, b);
  BoundaryPoint c = h.a(), d = h.b();
  auto key = [&](const BoundaryPoint& x) {
    if (same_point(x, b, tol)) return 0.0;
    if (same_point(x, a, tol)) return kTwoPi;
    return ccw_distance(b.angle(), x.angle());
  };
  if (key(d) < key(c)) std::swap(c, d);
  return {a, b, c, d};
}

std::size_t thread_cap() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EARTHQUAKE_LAB_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::size_t workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace eql::detail
