#ifndef SBNMF_GOLDEN_SECTION_HPP
#define SBNMF_GOLDEN_SECTION_HPP

#include <cmath>

namespace sbn {

struct ScalarMinimum {
  double argmin;
  double value;
};

/// Golden-section search for the minimum of f on [0, 1].
///
/// Assumes f is convex (unimodal); otherwise the answer is a local minimum.
/// The bracket is shrunk until it is narrower than tol, so the returned
/// argmin lies within tol of the true one. The endpoints are also checked so
/// boundary minima come back exactly. f is never evaluated outside [0, 1].
template <class F>
ScalarMinimum minimize_convex_on_unit_interval(F&& f, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }

  ScalarMinimum best{0.5 * (lo + hi), 0.0};
  best.value = f(best.argmin);
  if (lo == 0.0) {
    const double f0 = f(0.0);
    if (f0 <= best.value) {
      best = {0.0, f0};
    }
  }
  if (hi == 1.0) {
    const double f1 = f(1.0);
    if (f1 < best.value) {
      best = {1.0, f1};
    }
  }
  return best;
}

}  // namespace sbn

#endif  // SBNMF_GOLDEN_SECTION_HPP
