#include "sbnmf/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sbnmf/errors.hpp"
#include "sbnmf/exact.hpp"

namespace sbn {

namespace {

// logit(1 - kMuFloor); hidden means are searched in [-kLogitLimit, kLogitLimit].
const double kLogitLimit = std::log((1.0 - kMuFloor) / kMuFloor);

double clamp_mu(double mu) noexcept { return std::clamp(mu, kMuFloor, 1.0 - kMuFloor); }

double logit(double mu) noexcept { return std::log(mu) - std::log1p(-mu); }

// (1 - e^x) / (1 - mu + mu e^x)
double damped_ratio(double mu, double x) noexcept {
  const double log_den = log_bernoulli_mgf(mu, x);
  if (x < 700.0) {
    return -std::expm1(x) * std::exp(-log_den);
  }
  return -std::exp(x + std::log1p(-std::exp(-x)) - log_den);
}

struct LogMoments {
  double neg;  // ln <e^{-xi z}>
  double pos;  // ln <e^{(1-xi) z}>
};

LogMoments log_moments(const SigmoidBeliefNetwork& net, std::span<const double> mu, NodeIndex i, double xi) {
  const double h = net.bias(i);
  LogMoments m{-xi * h, (1.0 - xi) * h};
  for (const ParentLink& p : net.parents(i)) {
    m.neg += log_bernoulli_mgf(mu[p.parent], -xi * p.weight);
    m.pos += log_bernoulli_mgf(mu[p.parent], (1.0 - xi) * p.weight);
  }
  return m;
}

double mean_input(const SigmoidBeliefNetwork& net, std::span<const double> mu, NodeIndex i) {
  double m = net.bias(i);
  for (const ParentLink& p : net.parents(i)) {
    m += p.weight * mu[p.parent];
  }
  return m;
}

void check_node(const SigmoidBeliefNetwork& net, NodeIndex i) {
  if (i >= net.size()) {
    throw InvalidArgument("node index " + std::to_string(i) + " out of range");
  }
}

void check_state_shape(const SigmoidBeliefNetwork& net, const MeanFieldState& state) {
  if (state.mu.size() != net.size() || state.xi.size() != net.size()) {
    throw InvalidArgument("mean field state does not match the network size");
  }
}

// The part of L_V that depends on one hidden mean, with every child's
// log-moments split into the contribution of this parent and the rest.
class CoordinateObjective {
public:
  CoordinateObjective(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i) {
    linear_ = mean_input(net, state.mu, i);
    for (const ChildLink& c : net.children(i)) {
      const NodeIndex k = c.child;
      const double xi = state.xi[k];
      linear_ += c.weight * (state.mu[k] - xi);
      ChildTerm term{-xi * c.weight, (1.0 - xi) * c.weight, -xi * net.bias(k), (1.0 - xi) * net.bias(k)};
      for (const ParentLink& p : net.parents(k)) {
        if (p.parent == i) {
          continue;
        }
        term.rest_neg += log_bernoulli_mgf(state.mu[p.parent], -xi * p.weight);
        term.rest_pos += log_bernoulli_mgf(state.mu[p.parent], (1.0 - xi) * p.weight);
      }
      children_.push_back(term);
    }
  }

  // g(mu) up to terms constant in mu.
  double value(double mu) const {
    double g = mu * linear_ + bernoulli_entropy(clamp_mu(mu));
    for (const ChildTerm& c : children_) {
      g -= log_add_exp(c.rest_neg + log_bernoulli_mgf(mu, c.x_neg), c.rest_pos + log_bernoulli_mgf(mu, c.x_pos));
    }
    return g;
  }

  struct Drive {
    double input;        // F(mu)
    double kappa_sq_sum; // dF/dmu = sum_k K_k^2
  };

  Drive drive(double mu) const {
    Drive d{linear_, 0.0};
    for (const ChildTerm& c : children_) {
      const double ln_neg = c.rest_neg + log_bernoulli_mgf(mu, c.x_neg);
      const double ln_pos = c.rest_pos + log_bernoulli_mgf(mu, c.x_pos);
      const double ph = sigmoid(ln_pos - ln_neg);
      const double k = (1.0 - ph) * damped_ratio(mu, c.x_neg) + ph * damped_ratio(mu, c.x_pos);
      d.input += k;
      d.kappa_sq_sum += k * k;
    }
    return d;
  }

private:
  struct ChildTerm {
    double x_neg;
    double x_pos;
    double rest_neg;
    double rest_pos;
  };

  double linear_ = 0.0;
  std::vector<ChildTerm> children_;
};

}  // namespace

double log_bernoulli_mgf(double mu, double x) noexcept {
  if (mu <= 0.0) {
    return 0.0;
  }
  if (mu >= 1.0) {
    return x;
  }
  if (std::fabs(x) < 1.0) {
    return std::log1p(mu * std::expm1(x));
  }
  return log_add_exp(std::log1p(-mu), std::log(mu) + x);
}

MeanFieldState MeanFieldState::initial(const SigmoidBeliefNetwork& net, const Evidence& evidence, double init_mu,
                                       double init_xi) {
  if (!(init_mu >= 0.0 && init_mu <= 1.0) || !(init_xi >= 0.0 && init_xi <= 1.0)) {
    throw InvalidArgument("initial mu and xi must lie in [0, 1]");
  }
  evidence.validate(net.size());
  MeanFieldState state{std::vector<double>(net.size(), init_mu), std::vector<double>(net.size(), init_xi)};
  for (const auto& [i, b] : evidence.clamped()) {
    state.mu[i] = b;
  }
  return state;
}

void MeanFieldState::validate(const SigmoidBeliefNetwork& net, const Evidence& evidence) const {
  check_state_shape(net, *this);
  evidence.validate(net.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] >= 0.0 && mu[i] <= 1.0) || !(xi[i] >= 0.0 && xi[i] <= 1.0)) {
      throw InvalidArgument("mean field parameters of node " + std::to_string(i) + " leave [0, 1]");
    }
  }
  for (const auto& [i, b] : evidence.clamped()) {
    if (mu[i] != static_cast<double>(b)) {
      throw InvalidArgument("mean of clamped node " + std::to_string(i) + " differs from its evidence");
    }
  }
}

double log_moment_neg(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i) {
  check_node(net, i);
  check_state_shape(net, state);
  return log_moments(net, state.mu, i, state.xi[i]).neg;
}

double log_moment_pos(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i) {
  check_node(net, i);
  check_state_shape(net, state);
  return log_moments(net, state.mu, i, state.xi[i]).pos;
}

double phi(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i) {
  check_node(net, i);
  check_state_shape(net, state);
  const LogMoments m = log_moments(net, state.mu, i, state.xi[i]);
  return sigmoid(m.pos - m.neg);
}

double kappa(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i, NodeIndex j) {
  check_node(net, i);
  check_node(net, j);
  const std::ptrdiff_t edge = net.edge_index(i, j);
  if (edge < 0) {
    return 0.0;
  }
  const double w = net.edges()[static_cast<std::size_t>(edge)].weight;
  const double xi = state.xi[i];
  const double ph = phi(net, state, i);
  const double mu_j = state.mu[j];
  return (1.0 - ph) * damped_ratio(mu_j, -xi * w) + ph * damped_ratio(mu_j, (1.0 - xi) * w);
}

double softplus_bound(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i, double xi) {
  check_node(net, i);
  check_state_shape(net, state);
  const LogMoments m = log_moments(net, state.mu, i, xi);
  return xi * mean_input(net, state.mu, i) + log_add_exp(m.neg, m.pos);
}

BoundBreakdown bound(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state) {
  state.validate(net, evidence);
  BoundBreakdown b;
  for (const Edge& e : net.edges()) {
    b.quadratic += e.weight * state.mu[e.child] * state.mu[e.parent];
  }
  for (NodeIndex i = 0; i < net.size(); ++i) {
    b.bias += net.bias(i) * state.mu[i];
    b.xi_linear += state.xi[i] * mean_input(net, state.mu, i);
    const LogMoments m = log_moments(net, state.mu, i, state.xi[i]);
    b.log_moment += log_add_exp(m.neg, m.pos);
    if (!evidence.is_clamped(i)) {
      b.entropy += bernoulli_entropy(clamp_mu(state.mu[i]));
    }
  }
  b.total = b.quadratic + b.bias - b.xi_linear - b.log_moment + b.entropy;
  return b;
}

double mean_field_input(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i) {
  check_node(net, i);
  check_state_shape(net, state);
  double input = mean_input(net, state.mu, i);
  for (const ChildLink& c : net.children(i)) {
    input += c.weight * (state.mu[c.child] - state.xi[c.child]) + kappa(net, state, c.child, i);
  }
  return input;
}

MeanFieldState update_xi(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                         double xi_tol) {
  state.validate(net, evidence);
  MeanFieldState next = state;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    const double m = mean_input(net, state.mu, i);
    auto objective = [&](double xi) {
      const LogMoments lm = log_moments(net, state.mu, i, xi);
      return xi * m + log_add_exp(lm.neg, lm.pos);
    };
    const ScalarMinimum best = minimize_convex_on_unit_interval(objective, xi_tol);
    if (best.value < objective(state.xi[i])) {
      next.xi[i] = best.argmin;
    }
  }
  return next;
}

double update_mu(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                 NodeIndex i) {
  check_node(net, i);
  check_state_shape(net, state);
  if (evidence.is_clamped(i)) {
    throw InvalidArgument("node " + std::to_string(i) + " is clamped by the evidence; its mean is fixed");
  }
  const CoordinateObjective objective(net, state, i);

  // Stationarity residual in logit space: r(t) = F(sigmoid(t)) - t, with
  // r'(t) = mu (1 - mu) sum K^2 - 1. r is positive far left and negative
  // far right, and a + to - crossing is a local maximum of L_V.
  auto residual = [&](double t) { return objective.drive(sigmoid(t)).input - t; };

  const double start = std::clamp(logit(clamp_mu(state.mu[i])), -kLogitLimit, kLogitLimit);
  const double r0 = residual(start);
  double t_star = start;
  if (r0 != 0.0) {
    // Walk away from the current mean until the residual changes sign.
    const double dir = r0 > 0.0 ? 1.0 : -1.0;
    double near = start;
    double far = start;
    double step = 1.0;
    bool bracketed = false;
    while (true) {
      far = std::clamp(near + dir * step, -kLogitLimit, kLogitLimit);
      const double r = residual(far);
      if ((r > 0.0) != (dir > 0.0) || r == 0.0) {
        bracketed = true;
        break;
      }
      if (std::fabs(far) >= kLogitLimit) {
        break;
      }
      near = far;
      step *= 2.0;
    }

    if (!bracketed) {
      t_star = far;
    } else {
      double lo = std::min(near, far);
      double hi = std::max(near, far);
      double t = 0.5 * (lo + hi);
      for (int iter = 0; iter < 200; ++iter) {
        const double mu = sigmoid(t);
        const auto d = objective.drive(mu);
        const double r = d.input - t;
        if (r == 0.0) {
          break;
        }
        if (r > 0.0) {
          lo = t;
        } else {
          hi = t;
        }
        const double slope = mu * (1.0 - mu) * d.kappa_sq_sum - 1.0;
        double next = slope < 0.0 ? t - r / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
          next = 0.5 * (lo + hi);
        }
        const double moved = std::fabs(next - t);
        t = next;
        if (moved <= 1e-15 * std::max(1.0, std::fabs(t)) || hi - lo <= 1e-15 * std::max(1.0, std::fabs(t))) {
          break;
        }
      }
      t_star = t;
    }
  }

  const double candidate = sigmoid(t_star);
  if (objective.value(candidate) < objective.value(state.mu[i])) {
    return state.mu[i];
  }
  return candidate;
}

SolveResult solve(const SigmoidBeliefNetwork& net, const Evidence& evidence, const SolveOptions& options) {
  if (!(options.tol_mu >= 0.0) || !(options.tol_bound >= 0.0) || !(options.xi_tol > 0.0)) {
    throw InvalidArgument("solver tolerances must be non-negative (xi tolerance positive)");
  }
  SolveResult result;
  result.state = MeanFieldState::initial(net, evidence, options.init_mu);
  const std::vector<NodeIndex> hidden = evidence.hidden_nodes(net.size());
  const bool observe = static_cast<bool>(options.observer);

  double previous = bound(net, evidence, result.state).total;
  for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    result.sweeps = sweep;
    MeanFieldState& state = result.state;

    const double before_xi = observe ? bound(net, evidence, state).total : 0.0;
    state = update_xi(net, evidence, state, options.xi_tol);
    if (observe) {
      options.observer({UpdateEvent::Kind::XiPass, sweep, 0, before_xi, bound(net, evidence, state).total});
    }

    double max_change = 0.0;
    for (NodeIndex i : hidden) {
      const double before = observe ? bound(net, evidence, state).total : 0.0;
      const double updated = update_mu(net, evidence, state, i);
      max_change = std::max(max_change, std::fabs(updated - state.mu[i]));
      state.mu[i] = updated;
      if (observe) {
        options.observer({UpdateEvent::Kind::MuUpdate, sweep, i, before, bound(net, evidence, state).total});
      }
    }

    const double current = bound(net, evidence, state).total;
    const bool settled = max_change < options.tol_mu && std::fabs(current - previous) < options.tol_bound;
    previous = current;
    if (settled) {
      result.converged = true;
      break;
    }
  }
  result.bound = bound(net, evidence, result.state);
  return result;
}

}  // namespace sbn
