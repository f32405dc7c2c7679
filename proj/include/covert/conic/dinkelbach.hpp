#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace covert::conic {

enum class DinkelbachStatus { converged, max_iterations, inner_failed };

template <class X>
struct DinkelbachResult {
  X solution;
  double eta = 0.0;                // ratio at `solution`
  std::vector<double> eta_trace;   // eta used by each inner solve
  DinkelbachStatus status = DinkelbachStatus::converged;
  int iterations = 0;
};

/// Maximizes num(x) / den(x) (den > 0) by parametric subtraction: solve
/// max num - eta den, set eta to the ratio of the new point, stop once the
/// parametric value at the new point is at most `tol`. eta starts at the
/// ratio of `start` (which may be zero). Iteration only continues while the
/// ratio strictly increases, so `eta_trace` is non-decreasing. The returned
/// solution is the last inner solution and `eta` its ratio.
template <class X>
DinkelbachResult<X> dinkelbach(const std::function<double(const X&)>& num,
                               const std::function<double(const X&)>& den,
                               const std::function<std::optional<X>(double eta)>& inner, X start,
                               double tol = 1e-6, int max_iterations = 50) {
  DinkelbachResult<X> r;
  r.solution = std::move(start);
  r.eta = num(r.solution) / den(r.solution);
  for (int it = 0; it < max_iterations; ++it) {
    r.eta_trace.push_back(r.eta);
    r.iterations = it + 1;
    std::optional<X> next = inner(r.eta);
    if (!next) {
      r.status = DinkelbachStatus::inner_failed;
      return r;
    }
    const double n = num(*next);
    const double d = den(*next);
    const double value = n - r.eta * d;
    r.solution = std::move(*next);
    r.eta = n / d;
    if (value <= tol) {
      r.status = DinkelbachStatus::converged;
      return r;
    }
  }
  r.status = DinkelbachStatus::max_iterations;
  return r;
}

}  // namespace covert::conic
