#ifndef SBNMF_EXPERIMENTS_HPP
#define SBNMF_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "sbnmf/dataset.hpp"
#include "sbnmf/learning.hpp"
#include "sbnmf/mean_field.hpp"
#include "sbnmf/network.hpp"

namespace sbn {

// Relative error of the mean field bound on random 2x4x6 networks ---------

struct RelativeErrorRow {
  std::size_t index = 0;
  double exact = 0.0;         // ln P(V), bottom layer clamped to 0
  double bound = 0.0;         // L_V from the solver
  double rel_mean_field = 0.0;  // L_V / ln P(V) - 1
  double rel_uniform = 0.0;     // ln(2^-6) / ln P(V) - 1
  bool converged = false;
};

struct RelativeErrorSummary {
  std::size_t count = 0;
  double mean_rel_mean_field = 0.0;
  double rms_rel_uniform = 0.0;
  double min_rel_mean_field = 0.0;
  std::size_t nonconverged = 0;
};

/// Network k uses seed derive_seed(seed, k); weights and biases uniform on
/// [-1, 1]. Rows are reported in index order.
RelativeErrorSummary run_relative_error_study(std::size_t count, std::uint64_t seed, const SolveOptions& options,
                                              const std::function<void(const RelativeErrorRow&)>& on_row = {});

// xi-bound on <ln(1 + e^z)> for a standard normal z ------------------------

struct GaussianBoundReport {
  double argmin = 0.0;
  double minimum = 0.0;
  double at_zero = 0.0;
  /// Known value of <ln(1 + e^z)> for z ~ N(0, 1), for context.
  static constexpr double kExactReference = 0.806;
};

/// Minimises ln(e^{xi^2/2} + e^{(1-xi)^2/2}) over [0, 1].
GaussianBoundReport gaussian_bound_check(double tol = 1e-10);

// Synthetic teacher/student classification ----------------------------------

/// Draws `count` ancestral samples and keeps the pixels on visible_map.
BitmapDataset sample_bitmaps(const SigmoidBeliefNetwork& net, std::size_t count, std::size_t rows, std::size_t cols,
                             std::span<const NodeIndex> visible_map, Rng& rng);

struct SyntheticSetup {
  std::size_t classes = 4;
  std::vector<std::size_t> layers{4, 8, 16};
  std::size_t rows = 4;
  std::size_t cols = 4;
  std::size_t train_per_class = 200;
  std::size_t test_per_class = 100;
  double visible_offset = 2.0;
  double student_init = 0.1;
  std::uint64_t seed = 0;
};

/// Teacher c: random layered net with parameters uniform on [-1, 1]; each
/// visible bias then shifted by +offset or -offset, the sign drawn per
/// (class, node).
std::vector<SigmoidBeliefNetwork> make_teachers(const SyntheticSetup& setup);

/// Untrained student c: same layout, parameters uniform on
/// [-student_init, student_init].
SigmoidBeliefNetwork make_student(const SyntheticSetup& setup, std::size_t c);

struct SyntheticData {
  std::vector<BitmapDataset> train;
  std::vector<BitmapDataset> test;
};

SyntheticData make_synthetic_data(const SyntheticSetup& setup, const std::vector<SigmoidBeliefNetwork>& teachers);

struct ClassificationReport {
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

/// Classifies every pattern of test[c] (true label c) with the models.
ClassificationReport evaluate_classifier(std::span<const SigmoidBeliefNetwork> models,
                                         const std::vector<BitmapDataset>& test,
                                         std::span<const NodeIndex> visible_map, const SolveOptions& options = {});

struct SyntheticReport {
  std::vector<TrainResult> students;
  ClassificationReport classification;
};

/// Teachers, data, training of one student per class, then classification
/// of the held-out patterns.
SyntheticReport run_synthetic_classification(const SyntheticSetup& setup, const TrainOptions& train_options);

}  // namespace sbn

#endif  // SBNMF_EXPERIMENTS_HPP
