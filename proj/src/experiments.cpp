#include "sbnmf/experiments.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sbnmf/errors.hpp"
#include "sbnmf/exact.hpp"
#include "sbnmf/generate.hpp"
#include "sbnmf/golden_section.hpp"

namespace sbn {

RelativeErrorSummary run_relative_error_study(std::size_t count, std::uint64_t seed, const SolveOptions& options,
                                              const std::function<void(const RelativeErrorRow&)>& on_row) {
  if (count == 0) {
    throw InvalidArgument("network count must be at least 1");
  }
  constexpr std::array<std::size_t, 3> layers{2, 4, 6};
  const double uniform_log_likelihood = -6.0 * std::numbers::ln2;

  RelativeErrorSummary summary;
  summary.count = count;
  summary.min_rel_mean_field = INFINITY;
  double sum_mf = 0.0;
  double sum_sq_uniform = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const SigmoidBeliefNetwork net = gen_random_layered(layers, -1.0, 1.0, derive_seed(seed, k));
    Evidence bottom_off;
    for (NodeIndex v = 6; v < 12; ++v) {
      bottom_off.clamp(v, 0);
    }
    RelativeErrorRow row;
    row.index = k;
    row.exact = log_likelihood_exact(net, bottom_off);
    const SolveResult solved = solve(net, bottom_off, options);
    row.bound = solved.bound.total;
    row.converged = solved.converged;
    row.rel_mean_field = row.bound / row.exact - 1.0;
    row.rel_uniform = uniform_log_likelihood / row.exact - 1.0;

    sum_mf += row.rel_mean_field;
    sum_sq_uniform += row.rel_uniform * row.rel_uniform;
    summary.min_rel_mean_field = std::min(summary.min_rel_mean_field, row.rel_mean_field);
    if (!row.converged) {
      ++summary.nonconverged;
    }
    if (on_row) {
      on_row(row);
    }
  }
  summary.mean_rel_mean_field = sum_mf / static_cast<double>(count);
  summary.rms_rel_uniform = std::sqrt(sum_sq_uniform / static_cast<double>(count));
  return summary;
}

GaussianBoundReport gaussian_bound_check(double tol) {
  // <e^{tz}> = e^{t^2/2} for z ~ N(0, 1).
  auto objective = [](double xi) { return log_add_exp(0.5 * xi * xi, 0.5 * (1.0 - xi) * (1.0 - xi)); };
  const ScalarMinimum best = minimize_convex_on_unit_interval(objective, tol);
  GaussianBoundReport report;
  report.argmin = best.argmin;
  report.minimum = best.value;
  report.at_zero = objective(0.0);
  return report;
}

BitmapDataset sample_bitmaps(const SigmoidBeliefNetwork& net, std::size_t count, std::size_t rows, std::size_t cols,
                             std::span<const NodeIndex> visible_map, Rng& rng) {
  if (visible_map.size() != rows * cols) {
    throw InvalidArgument("visible map does not match the bitmap size");
  }
  for (NodeIndex v : visible_map) {
    if (v >= net.size()) {
      throw InvalidArgument("visible map references a node outside the network");
    }
  }
  BitmapDataset data(rows, cols);
  for (std::size_t k = 0; k < count; ++k) {
    const FullConfiguration config = ancestral_sample(net, rng);
    std::vector<Bit> pattern(visible_map.size());
    for (std::size_t p = 0; p < visible_map.size(); ++p) {
      pattern[p] = config[visible_map[p]];
    }
    data.add(std::move(pattern));
  }
  return data;
}

namespace {

// Disjoint seed streams for the pieces of the synthetic experiment.
enum class Stream : std::uint64_t { Teacher = 0, Offset = 1, Student = 2, Train = 3, Test = 4 };

std::uint64_t stream_seed(std::uint64_t seed, Stream stream, std::size_t c) {
  return derive_seed(seed, 8 * static_cast<std::uint64_t>(c) + static_cast<std::uint64_t>(stream));
}

void check_setup(const SyntheticSetup& setup) {
  if (setup.classes < 2) {
    throw InvalidArgument("synthetic setup needs at least two classes");
  }
  if (setup.layers.empty() || setup.layers.back() != setup.rows * setup.cols) {
    throw InvalidArgument("bottom layer must hold exactly rows * cols units");
  }
}

}  // namespace

std::vector<SigmoidBeliefNetwork> make_teachers(const SyntheticSetup& setup) {
  check_setup(setup);
  std::vector<SigmoidBeliefNetwork> teachers;
  for (std::size_t c = 0; c < setup.classes; ++c) {
    SigmoidBeliefNetwork net = gen_random_layered(setup.layers, -1.0, 1.0, stream_seed(setup.seed, Stream::Teacher, c));
    Rng signs(stream_seed(setup.seed, Stream::Offset, c));
    const std::size_t width = setup.rows * setup.cols;
    for (NodeIndex v = net.size() - width; v < net.size(); ++v) {
      const double shift = signs.bernoulli(0.5) ? setup.visible_offset : -setup.visible_offset;
      net.set_bias(v, net.bias(v) + shift);
    }
    teachers.push_back(std::move(net));
  }
  return teachers;
}

SigmoidBeliefNetwork make_student(const SyntheticSetup& setup, std::size_t c) {
  check_setup(setup);
  return gen_random_layered(setup.layers, -setup.student_init, setup.student_init,
                            stream_seed(setup.seed, Stream::Student, c));
}

SyntheticData make_synthetic_data(const SyntheticSetup& setup, const std::vector<SigmoidBeliefNetwork>& teachers) {
  check_setup(setup);
  SyntheticData data;
  for (std::size_t c = 0; c < teachers.size(); ++c) {
    const auto map = default_visible_map(teachers[c], setup.rows * setup.cols);
    Rng train_rng(stream_seed(setup.seed, Stream::Train, c));
    Rng test_rng(stream_seed(setup.seed, Stream::Test, c));
    data.train.push_back(sample_bitmaps(teachers[c], setup.train_per_class, setup.rows, setup.cols, map, train_rng));
    data.test.push_back(sample_bitmaps(teachers[c], setup.test_per_class, setup.rows, setup.cols, map, test_rng));
  }
  return data;
}

ClassificationReport evaluate_classifier(std::span<const SigmoidBeliefNetwork> models,
                                         const std::vector<BitmapDataset>& test,
                                         std::span<const NodeIndex> visible_map, const SolveOptions& options) {
  ClassificationReport report;
  report.confusion.assign(test.size(), std::vector<std::size_t>(models.size(), 0));
  for (std::size_t c = 0; c < test.size(); ++c) {
    for (std::size_t k = 0; k < test[c].size(); ++k) {
      const std::size_t predicted = classify(models, test[c].pattern(k), visible_map, options);
      ++report.confusion[c][predicted];
      ++report.total;
      if (predicted == c) {
        ++report.correct;
      }
    }
  }
  return report;
}

SyntheticReport run_synthetic_classification(const SyntheticSetup& setup, const TrainOptions& train_options) {
  const std::vector<SigmoidBeliefNetwork> teachers = make_teachers(setup);
  const SyntheticData data = make_synthetic_data(setup, teachers);

  SyntheticReport report;
  std::vector<SigmoidBeliefNetwork> models;
  for (std::size_t c = 0; c < setup.classes; ++c) {
    const SigmoidBeliefNetwork student = make_student(setup, c);
    const auto map = default_visible_map(student, setup.rows * setup.cols);
    TrainOptions options = train_options;
    options.seed = derive_seed(train_options.seed, c);
    report.students.push_back(train(student, data.train[c], map, options));
    models.push_back(report.students.back().net);
  }
  const auto map = default_visible_map(models.front(), setup.rows * setup.cols);
  report.classification = evaluate_classifier(models, data.test, map, train_options.solver);
  return report;
}

}  // namespace sbn
