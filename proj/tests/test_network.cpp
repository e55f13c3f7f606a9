#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sbnmf/errors.hpp"
#include "sbnmf/network.hpp"

using sbn::Bit;
using sbn::Edge;
using sbn::FullConfiguration;
using sbn::SigmoidBeliefNetwork;

namespace {

SigmoidBeliefNetwork chain3() {
  return SigmoidBeliefNetwork({0.2, -0.4, 0.7}, {{1, 0, 1.5}, {2, 1, -0.8}, {2, 0, 0.3}});
}

}  // namespace

TEST(Network, ConstructionSortsEdgesAndIndexesBothDirections) {
  const SigmoidBeliefNetwork net = chain3();
  ASSERT_EQ(net.size(), 3u);
  ASSERT_EQ(net.edge_count(), 3u);
  EXPECT_EQ(net.edges()[0].child, 1u);
  EXPECT_EQ(net.edges()[1].parent, 0u);
  EXPECT_EQ(net.edges()[2].parent, 1u);
  ASSERT_EQ(net.parents(2).size(), 2u);
  EXPECT_EQ(net.parents(2)[0].parent, 0u);
  EXPECT_DOUBLE_EQ(net.parents(2)[1].weight, -0.8);
  ASSERT_EQ(net.children(0).size(), 2u);
  EXPECT_EQ(net.children(0)[1].child, 2u);
  EXPECT_DOUBLE_EQ(net.weight(2, 0), 0.3);
  EXPECT_DOUBLE_EQ(net.weight(1, 2), 0.0);
  EXPECT_FALSE(net.has_edge(0, 1));
  EXPECT_EQ(net.edge_index(2, 1), 2);
  EXPECT_EQ(net.edge_index(1, 2), -1);
}

TEST(Network, RejectsInvalidStructure) {
  EXPECT_THROW(SigmoidBeliefNetwork({0.0, 0.0}, {{0, 1, 0.5}}), sbn::InvalidArgument);
  EXPECT_THROW(SigmoidBeliefNetwork({0.0, 0.0}, {{1, 1, 0.5}}), sbn::InvalidArgument);
  EXPECT_THROW(SigmoidBeliefNetwork({0.0, 0.0}, {{2, 0, 0.5}}), sbn::InvalidArgument);
  EXPECT_THROW(SigmoidBeliefNetwork({0.0, 0.0}, {{1, 0, 0.5}, {1, 0, 0.1}}), sbn::InvalidArgument);
  EXPECT_THROW(SigmoidBeliefNetwork({NAN}, {}), sbn::InvalidArgument);
  EXPECT_THROW(SigmoidBeliefNetwork({0.0, 0.0}, {{1, 0, INFINITY}}), sbn::InvalidArgument);
}

TEST(Network, AdjustAddsDeltas) {
  SigmoidBeliefNetwork net = chain3();
  const std::vector<double> db{1.0, 0.0, -1.0};
  const std::vector<double> dw{0.5, 0.0, 0.25};
  net.adjust(db, dw);
  EXPECT_DOUBLE_EQ(net.bias(0), 1.2);
  EXPECT_DOUBLE_EQ(net.bias(2), -0.3);
  EXPECT_DOUBLE_EQ(net.weight(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(net.weight(2, 1), -0.55);
  EXPECT_THROW(net.adjust(std::vector<double>{1.0}, dw), sbn::InvalidArgument);
}

TEST(Configuration, RejectsNonBinaryEntries) {
  EXPECT_THROW(FullConfiguration(std::vector<Bit>{0, 2}), sbn::InvalidArgument);
  FullConfiguration c(3);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_THROW(c.set(1, 3), sbn::InvalidArgument);
}

TEST(Evidence, HiddenSetIsComplementOfClamped) {
  sbn::Evidence ev;
  ev.clamp(3, 1);
  ev.clamp(0, 0);
  EXPECT_EQ(ev.hidden_nodes(5), (std::vector<sbn::NodeIndex>{1, 2, 4}));
  EXPECT_EQ(ev.dense(5), (std::vector<std::int8_t>{0, -1, -1, 1, -1}));
  EXPECT_NO_THROW(ev.validate(4));
  EXPECT_THROW(ev.validate(3), sbn::InvalidArgument);
  EXPECT_THROW(ev.clamp(1, 2), sbn::InvalidArgument);
}

TEST(Numerics, Sigmoid) {
  EXPECT_DOUBLE_EQ(sbn::sigmoid(0.0), 0.5);
  EXPECT_NEAR(sbn::sigmoid(std::log(3.0)), 0.75, 1e-15);
  EXPECT_EQ(sbn::sigmoid(-800.0), 0.0);
  EXPECT_EQ(sbn::sigmoid(800.0), 1.0);
}

TEST(Numerics, SoftplusStableAtExtremes) {
  EXPECT_NEAR(sbn::softplus(0.0), std::numbers::ln2, 1e-15);
  EXPECT_DOUBLE_EQ(sbn::softplus(1000.0), 1000.0);
  EXPECT_GT(sbn::softplus(-1000.0), -1.0);
  EXPECT_NEAR(sbn::softplus(-40.0), std::exp(-40.0), 1e-30);
  for (double z : {-29.9, -30.1, -5.0, 3.0, 29.9, 30.1}) {
    EXPECT_NEAR(sbn::softplus(z), std::log1p(std::exp(z)), 1e-14 * std::max(1.0, std::abs(z))) << z;
  }
  EXPECT_NEAR(sbn::log_add_exp(1000.0, 1000.0), 1000.0 + std::numbers::ln2, 1e-12);
}

TEST(Model, LocalField) {
  const SigmoidBeliefNetwork root({0.3}, {});
  EXPECT_DOUBLE_EQ(sbn::local_field(root, FullConfiguration(1), 0), 0.3);

  const SigmoidBeliefNetwork one({0.0, 0.9}, {{1, 0, -4.0}});
  EXPECT_DOUBLE_EQ(sbn::local_field(one, FullConfiguration(2), 1), 0.9);

  const SigmoidBeliefNetwork two({0.0, 0.0, 0.1}, {{2, 0, 0.5}, {2, 1, -0.25}});
  EXPECT_NEAR(sbn::local_field(two, FullConfiguration(std::vector<Bit>{1, 1, 0}), 2), 0.35, 1e-15);
}

TEST(Model, Conditional) {
  const SigmoidBeliefNetwork root({0.0}, {});
  EXPECT_DOUBLE_EQ(sbn::conditional(root, 0, FullConfiguration(std::vector<Bit>{1})), 0.5);

  const SigmoidBeliefNetwork net({0.0, 2.0}, {{1, 0, -2.0}});
  EXPECT_DOUBLE_EQ(sbn::conditional(net, 1, FullConfiguration(std::vector<Bit>{1, 1})), 0.5);
  EXPECT_NEAR(sbn::conditional(net, 1, FullConfiguration(std::vector<Bit>{0, 0})), 1.0 - oracle::logistic(2.0),
              1e-15);
}

TEST(Model, LogJointTrivialCases) {
  const SigmoidBeliefNetwork root({0.0}, {});
  EXPECT_NEAR(sbn::log_joint(root, FullConfiguration(std::vector<Bit>{1})), std::log(0.5), 1e-15);

  sbn::Rng rng(5);
  const SigmoidBeliefNetwork zero = sbn::zero_layered(fixture::kSmallLayers);
  for (int k = 0; k < 20; ++k) {
    std::vector<Bit> bits(zero.size());
    for (auto& b : bits) {
      b = rng.bernoulli(0.5);
    }
    EXPECT_NEAR(sbn::log_joint(zero, FullConfiguration(bits)), -12.0 * std::numbers::ln2, 1e-12);
  }
}

TEST(Model, LogJointMatchesProductOfConditionals) {
  sbn::Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const SigmoidBeliefNetwork net = sbn::gen_random_dag(8, 0.5, -3.0, 3.0, rng);
    std::vector<Bit> bits(net.size());
    std::vector<int> s(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
      bits[i] = rng.bernoulli(0.5);
      s[i] = bits[i];
    }
    EXPECT_NEAR(sbn::log_joint(net, FullConfiguration(bits)), std::log(oracle::joint_probability(net, s)), 1e-12);
  }
}

TEST(Model, LogJointSurvivesSaturatedFields) {
  const SigmoidBeliefNetwork net({800.0}, {});
  EXPECT_NEAR(sbn::log_joint(net, FullConfiguration(std::vector<Bit>{0})), -800.0, 1e-12);
  EXPECT_NEAR(sbn::log_joint(net, FullConfiguration(std::vector<Bit>{1})), 0.0, 1e-300);
}

TEST(Model, EnergyTrivialCases) {
  const SigmoidBeliefNetwork root({0.0}, {});
  EXPECT_NEAR(sbn::energy(root, FullConfiguration(std::vector<Bit>{1})), std::numbers::ln2, 1e-15);
}

TEST(Model, EnergyEqualsThreeTermsOnHandSetChain) {
  const SigmoidBeliefNetwork net = chain3();
  for (unsigned k = 0; k < 8; ++k) {
    const std::vector<int> s{static_cast<int>(k & 1U), static_cast<int>((k >> 1) & 1U),
                             static_cast<int>((k >> 2) & 1U)};
    // -sum J_ij S_i S_j - sum h_i S_i + sum ln(1 + e^{z_i}), written out.
    const double pair = 1.5 * s[1] * s[0] + 0.3 * s[2] * s[0] - 0.8 * s[2] * s[1];
    const double bias = 0.2 * s[0] - 0.4 * s[1] + 0.7 * s[2];
    const double z0 = 0.2;
    const double z1 = -0.4 + 1.5 * s[0];
    const double z2 = 0.7 + 0.3 * s[0] - 0.8 * s[1];
    const double partition =
        std::log(1.0 + std::exp(z0)) + std::log(1.0 + std::exp(z1)) + std::log(1.0 + std::exp(z2));
    const double expected = -pair - bias + partition;
    const FullConfiguration c(std::vector<Bit>{static_cast<Bit>(s[0]), static_cast<Bit>(s[1]), static_cast<Bit>(s[2])});
    EXPECT_NEAR(sbn::energy(net, c), expected, 1e-14);
    EXPECT_NEAR(sbn::energy(net, c), -sbn::log_joint(net, c), 1e-14);
  }
}

TEST(Model, NoisyOr) {
  const std::vector<double> p{0.5, 0.5};
  EXPECT_DOUBLE_EQ(sbn::noisy_or_conditional(p, std::vector<Bit>{0, 0}), 0.0);
  EXPECT_NEAR(sbn::noisy_or_conditional(p, std::vector<Bit>{1, 0}), 0.5, 1e-15);
  EXPECT_NEAR(sbn::noisy_or_conditional(p, std::vector<Bit>{1, 1}), 0.75, 1e-15);
  EXPECT_THROW(sbn::noisy_or_conditional(std::vector<double>{1.0}, std::vector<Bit>{1}), sbn::InvalidArgument);
  EXPECT_THROW(sbn::noisy_or_conditional(p, std::vector<Bit>{1}), sbn::InvalidArgument);
}

TEST(Sampling, ZeroNetMarginalsAreHalf) {
  const SigmoidBeliefNetwork net = sbn::zero_layered(fixture::kSmallLayers);
  sbn::Rng rng(3);
  std::vector<double> on(net.size(), 0.0);
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const FullConfiguration c = sbn::ancestral_sample(net, rng);
    for (std::size_t i = 0; i < net.size(); ++i) {
      on[i] += c[i];
    }
  }
  for (double count : on) {
    EXPECT_NEAR(count / n, 0.5, 0.01);
  }
}

TEST(Sampling, SingleNodeMatchesSigmoid) {
  const SigmoidBeliefNetwork net({2.0}, {});
  sbn::Rng rng(4);
  int on = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    on += sbn::ancestral_sample(net, rng)[0];
  }
  EXPECT_NEAR(static_cast<double>(on) / n, oracle::logistic(2.0), 0.01);
}

TEST(Sampling, EmpiricalDistributionMatchesJoint) {
  sbn::Rng build(21);
  const SigmoidBeliefNetwork net = sbn::gen_random_dag(5, 0.6, -1.5, 1.5, build);
  sbn::Rng rng(22);
  const int n = 1000000;
  std::vector<int> counts(32, 0);
  for (int k = 0; k < n; ++k) {
    const FullConfiguration c = sbn::ancestral_sample(net, rng);
    unsigned idx = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      idx |= static_cast<unsigned>(c[i]) << i;
    }
    ++counts[idx];
  }
  for (unsigned idx = 0; idx < 32; ++idx) {
    std::vector<int> s(5);
    std::vector<Bit> bits(5);
    for (std::size_t i = 0; i < 5; ++i) {
      s[i] = static_cast<int>((idx >> i) & 1U);
      bits[i] = static_cast<Bit>(s[i]);
    }
    const double p = std::exp(sbn::log_joint(net, FullConfiguration(bits)));
    const double se = std::sqrt(p * (1.0 - p) / n);
    EXPECT_NEAR(static_cast<double>(counts[idx]) / n, p, 3.0 * se) << "configuration " << idx;
  }
}
