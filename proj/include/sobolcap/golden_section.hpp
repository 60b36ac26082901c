#pragma once

#include <cmath>
#include <utility>

#include "sobolcap/error.hpp"

namespace sobolcap {

struct LineMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section minimization of a unimodal f on [lo, hi].
///
/// Shrinks the bracket by 1/φ per step, reusing one interior evaluation, and
/// stops once the bracket is no wider than `tolerance`. Returns the best point
/// evaluated (interior probes plus the final bracket midpoint).
template <class F>
LineMinimum golden_section_minimize(F&& f, double lo, double hi, double tolerance) {
  if (!(lo <= hi)) {
    throw ArgumentError("golden-section bracket is empty");
  }
  if (!(tolerance > 0.0)) {
    throw ArgumentError("golden-section tolerance must be positive");
  }
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

  LineMinimum best;
  auto probe = [&](double x) {
    const double value = f(x);
    ++best.evaluations;
    if (best.evaluations == 1 || value < best.value) {
      best.x = x;
      best.value = value;
    }
    return value;
  };

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = probe(c);
  double fd = probe(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = probe(d);
    }
  }
  probe(0.5 * (a + b));
  return best;
}

}  // namespace sobolcap
