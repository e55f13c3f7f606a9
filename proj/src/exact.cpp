#include "sbnmf/exact.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sbnmf/errors.hpp"

namespace sbn {

namespace {

void guard_hidden(std::size_t hidden, std::size_t limit) {
  if (hidden > limit) {
    throw GuardError("exact enumeration over " + std::to_string(hidden) + " hidden nodes exceeds the limit of " +
                     std::to_string(limit));
  }
}

FullConfiguration clamped_configuration(std::size_t n, const Evidence& evidence) {
  FullConfiguration config(n);
  for (const auto& [i, b] : evidence.clamped()) {
    config.set(i, b);
  }
  return config;
}

void assign_hidden(FullConfiguration& config, const std::vector<NodeIndex>& hidden, std::size_t state) {
  for (std::size_t b = 0; b < hidden.size(); ++b) {
    config.set(hidden[b], static_cast<Bit>((state >> b) & 1U));
  }
}

// ln P(h, V) for every hidden state, in enumeration order.
std::vector<double> joint_log_table(const SigmoidBeliefNetwork& net, const Evidence& evidence,
                                    const std::vector<NodeIndex>& hidden) {
  FullConfiguration config = clamped_configuration(net.size(), evidence);
  const std::size_t states = std::size_t{1} << hidden.size();
  std::vector<double> table(states);
  for (std::size_t s = 0; s < states; ++s) {
    assign_hidden(config, hidden, s);
    table[s] = log_joint(net, config);
  }
  return table;
}

double log_sum_exp(const std::vector<double>& values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    peak = std::max(peak, v);
  }
  if (peak == -std::numeric_limits<double>::infinity()) {
    return peak;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += std::exp(v - peak);
  }
  return peak + std::log(sum);
}

void check_mu(const SigmoidBeliefNetwork& net, std::span<const double> mu) {
  if (mu.size() != net.size()) {
    throw InvalidArgument("mean vector has " + std::to_string(mu.size()) + " entries, network has " +
                          std::to_string(net.size()) + " nodes");
  }
  for (double m : mu) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw InvalidArgument("means must lie in [0, 1]");
    }
  }
}

}  // namespace

double bernoulli_entropy(double mu) noexcept {
  double h = 0.0;
  if (mu > 0.0) {
    h -= mu * std::log(mu);
  }
  if (mu < 1.0) {
    h -= (1.0 - mu) * std::log1p(-mu);
  }
  return h;
}

double log_likelihood_exact(const SigmoidBeliefNetwork& net, const Evidence& evidence) {
  evidence.validate(net.size());
  const std::vector<NodeIndex> hidden = evidence.hidden_nodes(net.size());
  guard_hidden(hidden.size(), kMaxHiddenForLikelihood);

  FullConfiguration config = clamped_configuration(net.size(), evidence);
  const std::size_t states = std::size_t{1} << hidden.size();
  // Streaming log-sum-exp with a running maximum.
  double peak = -std::numeric_limits<double>::infinity();
  double scaled = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    assign_hidden(config, hidden, s);
    const double v = log_joint(net, config);
    if (v <= peak) {
      scaled += std::exp(v - peak);
    } else {
      scaled = scaled * std::exp(peak - v) + 1.0;
      peak = v;
    }
  }
  return peak + std::log(scaled);
}

double PosteriorTable::marginal(std::size_t b) const {
  double p = 0.0;
  for (std::size_t s = 0; s < probabilities.size(); ++s) {
    if ((s >> b) & 1U) {
      p += probabilities[s];
    }
  }
  return p;
}

PosteriorTable posterior_table(const SigmoidBeliefNetwork& net, const Evidence& evidence) {
  evidence.validate(net.size());
  PosteriorTable table;
  table.hidden = evidence.hidden_nodes(net.size());
  guard_hidden(table.hidden.size(), kMaxHiddenForTables);

  const std::vector<double> logs = joint_log_table(net, evidence, table.hidden);
  table.log_likelihood = log_sum_exp(logs);
  table.probabilities.resize(logs.size());
  for (std::size_t s = 0; s < logs.size(); ++s) {
    table.probabilities[s] = std::exp(logs[s] - table.log_likelihood);
  }
  return table;
}

double kl_divergence(const SigmoidBeliefNetwork& net, const Evidence& evidence, std::span<const double> mu) {
  check_mu(net, mu);
  const PosteriorTable posterior = posterior_table(net, evidence);
  const std::vector<NodeIndex>& hidden = posterior.hidden;
  const std::vector<double> logs = joint_log_table(net, evidence, hidden);

  double kl = 0.0;
  for (std::size_t s = 0; s < logs.size(); ++s) {
    double log_q = 0.0;
    for (std::size_t b = 0; b < hidden.size(); ++b) {
      const double m = mu[hidden[b]];
      log_q += ((s >> b) & 1U) ? std::log(m) : std::log1p(-m);
    }
    if (log_q == -std::numeric_limits<double>::infinity()) {
      continue;  // 0 ln 0
    }
    const double log_posterior = logs[s] - posterior.log_likelihood;
    if (log_posterior == -std::numeric_limits<double>::infinity()) {
      return std::numeric_limits<double>::infinity();
    }
    kl += std::exp(log_q) * (log_q - log_posterior);
  }
  return kl;
}

double expected_softplus_exact(const SigmoidBeliefNetwork& net, std::span<const double> mu, NodeIndex i) {
  check_mu(net, mu);
  const auto parents = net.parents(i);
  if (parents.size() > kMaxParentsForExpectation) {
    throw GuardError("node " + std::to_string(i) + " has " + std::to_string(parents.size()) +
                     " parents; exact expectation is limited to " + std::to_string(kMaxParentsForExpectation));
  }
  const std::size_t states = std::size_t{1} << parents.size();
  double expectation = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    double prob = 1.0;
    double z = net.bias(i);
    for (std::size_t b = 0; b < parents.size(); ++b) {
      const double m = mu[parents[b].parent];
      if ((s >> b) & 1U) {
        prob *= m;
        z += parents[b].weight;
      } else {
        prob *= 1.0 - m;
      }
    }
    if (prob > 0.0) {
      expectation += prob * softplus(z);
    }
  }
  return expectation;
}

double bound_exact_expectation(const SigmoidBeliefNetwork& net, const Evidence& evidence,
                               std::span<const double> mu_in) {
  check_mu(net, mu_in);
  evidence.validate(net.size());
  std::vector<double> mu(mu_in.begin(), mu_in.end());
  for (const auto& [i, b] : evidence.clamped()) {
    mu[i] = b;
  }

  double total = 0.0;
  for (const Edge& e : net.edges()) {
    total += e.weight * mu[e.child] * mu[e.parent];
  }
  for (NodeIndex i = 0; i < net.size(); ++i) {
    total += net.bias(i) * mu[i];
    total -= expected_softplus_exact(net, mu, i);
    if (!evidence.is_clamped(i)) {
      total += bernoulli_entropy(mu[i]);
    }
  }
  return total;
}

}  // namespace sbn
