// Reference computations for the tests. Deliberately naive: plain
// probabilities instead of log space, dense loops, explicit enumeration.
// Only the network's parameter accessors are used from the library.
#ifndef SBNMF_TESTS_ORACLES_HPP
#define SBNMF_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "sbnmf/network.hpp"

namespace oracle {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double field(const sbn::SigmoidBeliefNetwork& net, const std::vector<int>& s, std::size_t i) {
  double z = net.bias(i);
  for (std::size_t j = 0; j < i; ++j) {
    z += net.weight(i, j) * s[j];
  }
  return z;
}

inline double joint_probability(const sbn::SigmoidBeliefNetwork& net, const std::vector<int>& s) {
  double p = 1.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double on = logistic(field(net, s, i));
    p *= s[i] ? on : 1.0 - on;
  }
  return p;
}

inline std::vector<std::size_t> hidden_of(const sbn::SigmoidBeliefNetwork& net, const sbn::Evidence& ev) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!ev.is_clamped(i)) {
      h.push_back(i);
    }
  }
  return h;
}

// Calls visit(s) for every completion of the evidence.
inline void for_each_completion(const sbn::SigmoidBeliefNetwork& net, const sbn::Evidence& ev,
                                const std::function<void(const std::vector<int>&)>& visit) {
  const auto hidden = hidden_of(net, ev);
  std::vector<int> s(net.size(), 0);
  for (const auto& [i, b] : ev.clamped()) {
    s[i] = b;
  }
  for (std::size_t k = 0; k < (std::size_t{1} << hidden.size()); ++k) {
    for (std::size_t b = 0; b < hidden.size(); ++b) {
      s[hidden[b]] = static_cast<int>((k >> b) & 1U);
    }
    visit(s);
  }
}

// P(V) as a plain sum of joint probabilities.
inline double likelihood(const sbn::SigmoidBeliefNetwork& net, const sbn::Evidence& ev) {
  double total = 0.0;
  for_each_completion(net, ev, [&](const std::vector<int>& s) { total += joint_probability(net, s); });
  return total;
}

inline double q_probability(const std::vector<double>& mu, const std::vector<std::size_t>& hidden,
                            const std::vector<int>& s) {
  double q = 1.0;
  for (std::size_t i : hidden) {
    q *= s[i] ? mu[i] : 1.0 - mu[i];
  }
  return q;
}

// sum_H Q(H) ln(Q(H) / P(H|V)).
inline double kl(const sbn::SigmoidBeliefNetwork& net, const sbn::Evidence& ev, const std::vector<double>& mu) {
  const double pv = likelihood(net, ev);
  const auto hidden = hidden_of(net, ev);
  double total = 0.0;
  for_each_completion(net, ev, [&](const std::vector<int>& s) {
    const double q = q_probability(mu, hidden, s);
    if (q > 0.0) {
      total += q * std::log(q * pv / joint_probability(net, s));
    }
  });
  return total;
}

// <f(z_i)> with every parent j drawn independently as Bernoulli(mu[j]).
inline double expect_over_parents(const sbn::SigmoidBeliefNetwork& net, const std::vector<double>& mu, std::size_t i,
                                  const std::function<double(double)>& f) {
  std::vector<std::size_t> pa;
  for (std::size_t j = 0; j < i; ++j) {
    if (net.has_edge(i, j)) {
      pa.push_back(j);
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < (std::size_t{1} << pa.size()); ++k) {
    double w = 1.0;
    double z = net.bias(i);
    for (std::size_t b = 0; b < pa.size(); ++b) {
      const bool on = (k >> b) & 1U;
      w *= on ? mu[pa[b]] : 1.0 - mu[pa[b]];
      if (on) {
        z += net.weight(i, pa[b]);
      }
    }
    total += w * f(z);
  }
  return total;
}

inline double entropy(double m) {
  double h = 0.0;
  if (m > 0.0) {
    h -= m * std::log(m);
  }
  if (m < 1.0) {
    h -= (1.0 - m) * std::log(1.0 - m);
  }
  return h;
}

// ln <e^{-xi z_i} + e^{(1 - xi) z_i}> by enumeration.
inline double log_moment_sum(const sbn::SigmoidBeliefNetwork& net, const std::vector<double>& mu, std::size_t i,
                             double xi) {
  return std::log(expect_over_parents(net, mu, i, [xi](double z) { return std::exp(-xi * z); }) +
                  expect_over_parents(net, mu, i, [xi](double z) { return std::exp((1.0 - xi) * z); }));
}

// Mean field lower bound, every expectation by enumeration. Clamped
// entries of mu must already hold the evidence bits.
inline double mean_field_bound(const sbn::SigmoidBeliefNetwork& net, const sbn::Evidence& ev,
                               const std::vector<double>& mu, const std::vector<double>& xi) {
  double total = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    double mean_field = net.bias(i);
    for (std::size_t j = 0; j < i; ++j) {
      mean_field += net.weight(i, j) * mu[j];
    }
    total += mu[i] * mean_field;
    total -= xi[i] * mean_field + log_moment_sum(net, mu, i, xi[i]);
    if (!ev.is_clamped(i)) {
      total += entropy(mu[i]);
    }
  }
  return total;
}

// Same bound with <ln(1 + e^z)> taken exactly instead of through xi.
inline double exact_expectation_bound(const sbn::SigmoidBeliefNetwork& net, const sbn::Evidence& ev,
                                      const std::vector<double>& mu) {
  double total = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    double mean_field = net.bias(i);
    for (std::size_t j = 0; j < i; ++j) {
      mean_field += net.weight(i, j) * mu[j];
    }
    total += mu[i] * mean_field;
    total -= expect_over_parents(net, mu, i, [](double z) { return std::log1p(std::exp(z)); });
    if (!ev.is_clamped(i)) {
      total += entropy(mu[i]);
    }
  }
  return total;
}

inline double central_difference(const std::function<double(double)>& f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

// |a - b| relative to the larger magnitude, with an absolute floor so
// derivatives that vanish are compared on an absolute scale.
inline double relative_error(double a, double b, double floor = 1e-3) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// <g(z)> for z ~ N(0, 1) by the trapezoid rule on [-14, 14]; for smooth
// integrands with Gaussian tails this converges geometrically in the step.
inline double gaussian_expectation(const std::function<double(double)>& g, int steps = 20000) {
  const double pi = 3.14159265358979323846;
  const double lo = -14.0;
  const double h = 28.0 / steps;
  double total = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double z = lo + h * k;
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    total += w * g(z) * std::exp(-0.5 * z * z);
  }
  return total * h / std::sqrt(2.0 * pi);
}

}  // namespace oracle

#endif  // SBNMF_TESTS_ORACLES_HPP
