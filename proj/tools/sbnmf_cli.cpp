// sbnmf: command line front end over the C API in sbnmf/sbnmf.h.
//
// Exit codes: 0 success, 1 usage, 2 data/parse/io, 3 numeric guard.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbnmf/sbnmf.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitGuard = 3;

struct CommandError {
  int code;
  std::string message;
};

void check(sbn_status status) {
  if (status == SBN_OK) {
    return;
  }
  const int code = status == SBN_ERR_GUARD ? kExitGuard : kExitData;
  throw CommandError{code, std::string(sbn_status_name(status)) + ": " + sbn_last_error()};
}

struct NetworkDeleter {
  void operator()(sbn_network* p) const { sbn_network_free(p); }
};
struct EvidenceDeleter {
  void operator()(sbn_evidence* p) const { sbn_evidence_free(p); }
};
struct DatasetDeleter {
  void operator()(sbn_dataset* p) const { sbn_dataset_free(p); }
};
using Network = std::unique_ptr<sbn_network, NetworkDeleter>;
using EvidenceHandle = std::unique_ptr<sbn_evidence, EvidenceDeleter>;
using Dataset = std::unique_ptr<sbn_dataset, DatasetDeleter>;

Network load_network(const std::string& path) {
  sbn_network* raw = nullptr;
  check(sbn_network_load(path.c_str(), &raw));
  return Network(raw);
}

EvidenceHandle load_evidence(const std::string& path) {
  sbn_evidence* raw = nullptr;
  check(sbn_evidence_load(path.c_str(), &raw));
  return EvidenceHandle(raw);
}

Dataset load_dataset(const std::string& path) {
  sbn_dataset* raw = nullptr;
  check(sbn_dataset_load(path.c_str(), &raw));
  return Dataset(raw);
}

Network generate(const std::vector<std::size_t>& layers, double lo, double hi, std::uint64_t seed) {
  sbn_network* raw = nullptr;
  check(sbn_network_generate_layered(layers.data(), layers.size(), lo, hi, seed, &raw));
  return Network(raw);
}

// Shortest round-trip decimal, independent of the C locale.
std::string real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CommandError{kExitData, "cannot open " + path + " for writing"};
  }
  return out;
}

std::vector<std::uint8_t> pattern_of(const sbn_dataset* data, std::size_t k) {
  std::vector<std::uint8_t> p(sbn_dataset_rows(data) * sbn_dataset_cols(data));
  check(sbn_dataset_pattern(data, k, p.data(), p.size()));
  return p;
}

std::string class_file(const fs::path& dir, std::size_t k, const char* ext) {
  return (dir / ("class-" + std::to_string(k) + ext)).string();
}

// class-0<ext>, class-1<ext>, ... up to the first gap.
std::vector<std::string> class_files(const fs::path& dir, const char* ext) {
  std::vector<std::string> files;
  for (std::size_t k = 0;; ++k) {
    const std::string f = class_file(dir, k, ext);
    if (!fs::exists(f)) {
      break;
    }
    files.push_back(f);
  }
  if (files.empty()) {
    throw CommandError{kExitData, "no class-0" + std::string(ext) + " in " + dir.string()};
  }
  return files;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw CommandError{kExitData, "cannot create " + dir.string() + ": " + ec.message()};
  }
}

struct SolverFlags {
  sbn_solve_options options = sbn_solve_options_default();

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol-mu", options.tol_mu, "Convergence threshold on max |change in mu|")->capture_default_str();
    cmd->add_option("--tol-bound", options.tol_bound, "Convergence threshold on |change in bound|")
        ->capture_default_str();
    cmd->add_option("--max-sweeps", options.max_sweeps, "Maximum solver sweeps")->capture_default_str();
  }
};

void print_bound(const sbn_solve_report& r) {
  std::cout << "bound " << real(r.bound.total) << "\n"
            << "quadratic " << real(r.bound.quadratic) << "\n"
            << "bias " << real(r.bound.bias) << "\n"
            << "xi_linear " << real(r.bound.xi_linear) << "\n"
            << "log_moment " << real(r.bound.log_moment) << "\n"
            << "entropy " << real(r.bound.entropy) << "\n"
            << "converged " << r.converged << "\n"
            << "sweeps " << r.sweeps << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean field inference and learning for sigmoid belief networks"};
  app.require_subcommand(1);

  // gen-net
  std::vector<std::size_t> gen_layers;
  std::vector<double> gen_range{-1.0, 1.0};
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen_net = app.add_subcommand("gen-net", "Random layered network (full bipartite, top layer first)");
  gen_net->add_option("--layers", gen_layers, "Layer sizes, top first, e.g. 2,4,6")->required()->delimiter(',');
  gen_net->add_option("--weight-range", gen_range, "lo,hi for uniform weights and biases")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  gen_net->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen_net->add_option("--out", gen_out, "Output network file")->required();

  // loglik
  std::string ll_net, ll_evidence;
  auto* loglik = app.add_subcommand("loglik", "Exact ln P(V) by enumeration of hidden states");
  loglik->add_option("--net", ll_net, "Network file")->required();
  loglik->add_option("--evidence", ll_evidence, "Evidence file")->required();

  // mf
  std::string mf_net, mf_evidence, mf_out;
  SolverFlags mf_solver;
  auto* mf = app.add_subcommand("mf", "Mean field lower bound L_V on ln P(V)");
  mf->add_option("--net", mf_net, "Network file")->required();
  mf->add_option("--evidence", mf_evidence, "Evidence file")->required();
  mf->add_option("--out", mf_out, "CSV of the solved state; columns: node,mu,xi");
  mf_solver.attach(mf);

  // sample
  std::string sample_net, sample_out;
  std::size_t sample_count = 0, sample_rows = 0, sample_cols = 0;
  std::uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "Ancestral samples of the last rows*cols nodes as a bitmap dataset");
  sample->add_option("--net", sample_net, "Network file")->required();
  sample->add_option("--count", sample_count, "Number of samples")->required();
  sample->add_option("--rows", sample_rows, "Bitmap rows")->required();
  sample->add_option("--cols", sample_cols, "Bitmap columns")->required();
  sample->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
  sample->add_option("--out", sample_out, "Output dataset file")->required();

  // train
  std::string train_data, train_out, train_net, train_data_dir, train_model_dir, train_trace;
  std::vector<std::size_t> train_layers;
  double train_init = 0.1;
  sbn_train_options train_options = sbn_train_options_default();
  SolverFlags train_solver;
  auto* train = app.add_subcommand("train", "Gradient ascent on the mean field bound");
  auto* t_data = train->add_option("--data", train_data, "Training dataset (single model)");
  auto* t_out = train->add_option("--out", train_out, "Output network (single model)");
  auto* t_dir = train->add_option("--data-dir", train_data_dir, "Directory of class-<k>.bitmap (one model per class)");
  auto* t_models = train->add_option("--model-dir", train_model_dir, "Output directory for class-<k>.sbn");
  t_data->excludes(t_dir);
  t_data->needs(t_out);
  t_dir->needs(t_models);
  auto* t_net = train->add_option("--net", train_net, "Initial network (single model)");
  auto* t_layers = train->add_option("--layers", train_layers, "Layer sizes for fresh initial networks")->delimiter(',');
  t_net->excludes(t_layers);
  train->add_option("--init-range", train_init, "Fresh networks draw parameters uniform on [-r, r]")
      ->capture_default_str();
  train->add_option("--rate", train_options.rate, "Learning rate")->capture_default_str();
  train->add_option("--sweeps", train_options.sweeps, "Passes through the training set")->capture_default_str();
  train->add_option("--seed", train_options.seed, "Seed for initialisation and pattern order")->capture_default_str();
  train->add_option("--trace", train_trace, "CSV of epoch-mean bounds; columns: class,epoch,mean_bound");
  train_solver.attach(train);

  // classify
  std::string cls_model_dir, cls_data_dir, cls_data, cls_out;
  SolverFlags cls_solver;
  auto* classify = app.add_subcommand("classify", "Assign each pattern to the model with the highest bound");
  classify->add_option("--model-dir", cls_model_dir, "Directory of class-<k>.sbn")->required();
  auto* c_dir = classify->add_option("--data-dir", cls_data_dir, "Labelled test sets class-<k>.bitmap");
  auto* c_data = classify->add_option("--data", cls_data, "Unlabelled dataset");
  c_dir->excludes(c_data);
  classify->add_option("--out", cls_out, "CSV of predictions; columns: label,index,predicted (label -1 if unknown)");
  cls_solver.attach(classify);

  // score
  std::string score_net, score_data;
  SolverFlags score_solver;
  auto* score = app.add_subcommand("score", "Normalized bound score: total / (patterns * pixels * ln 2)");
  score->add_option("--net", score_net, "Network file")->required();
  score->add_option("--data", score_data, "Dataset file")->required();
  score_solver.attach(score);

  // synth
  sbn_synthetic_setup synth_setup = sbn_synthetic_setup_default();
  std::vector<std::size_t> synth_layers{4, 8, 16};
  std::size_t synth_rows = 4, synth_cols = 4;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Teacher networks with sampled train/test sets");
  synth->add_option("--classes", synth_setup.classes, "Number of classes")->capture_default_str();
  synth->add_option("--layers", synth_layers, "Teacher layer sizes")->delimiter(',')->capture_default_str();
  synth->add_option("--rows", synth_rows, "Bitmap rows")->capture_default_str();
  synth->add_option("--cols", synth_cols, "Bitmap columns")->capture_default_str();
  synth->add_option("--train", synth_setup.train_per_class, "Training samples per class")->capture_default_str();
  synth->add_option("--test", synth_setup.test_per_class, "Test samples per class")->capture_default_str();
  synth->add_option("--offset", synth_setup.visible_offset, "Visible bias shift magnitude")->capture_default_str();
  synth->add_option("--seed", synth_setup.seed, "Random seed")->capture_default_str();
  synth->add_option("--out-dir", synth_out, "Writes teachers/, train/, test/ here")->required();

  // fig5
  std::size_t f5_count = 10000;
  std::uint64_t f5_seed = 0;
  std::string f5_out;
  SolverFlags f5_solver;
  auto* fig5 = app.add_subcommand(
      "fig5", "Relative error of L_V on random 2x4x6 nets, bottom layer clamped to 0");
  fig5->add_option("--count", f5_count, "Number of networks")->capture_default_str();
  fig5->add_option("--seed", f5_seed, "Random seed")->capture_default_str();
  fig5->add_option("--out", f5_out, "CSV; columns: index,exact,bound,rel_mean_field,rel_uniform,converged");
  f5_solver.attach(fig5);

  auto* gauss = app.add_subcommand("gauss-check", "xi-bound on <ln(1+e^z)> for standard normal z");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_net) {
      if (gen_range.size() != 2) {
        throw CommandError{kExitUsage, "--weight-range needs exactly two values"};
      }
      const Network net = generate(gen_layers, gen_range[0], gen_range[1], gen_seed);
      check(sbn_network_save(net.get(), gen_out.c_str()));
    } else if (*loglik) {
      const Network net = load_network(ll_net);
      const EvidenceHandle ev = load_evidence(ll_evidence);
      double value = 0.0;
      check(sbn_log_likelihood_exact(net.get(), ev.get(), &value));
      std::cout << "log_likelihood " << real(value) << "\n";
    } else if (*mf) {
      const Network net = load_network(mf_net);
      const EvidenceHandle ev = load_evidence(mf_evidence);
      const std::size_t n = sbn_network_node_count(net.get());
      std::vector<double> mu(n), xi(n);
      sbn_solve_report report{};
      check(sbn_mean_field_solve(net.get(), ev.get(), &mf_solver.options, &report, mu.data(), xi.data()));
      print_bound(report);
      if (!mf_out.empty()) {
        std::ofstream out = open_output(mf_out);
        out << "node,mu,xi\n";
        for (std::size_t i = 0; i < n; ++i) {
          out << i << ',' << real(mu[i]) << ',' << real(xi[i]) << '\n';
        }
      }
    } else if (*sample) {
      const Network net = load_network(sample_net);
      sbn_dataset* raw = nullptr;
      check(sbn_sample_dataset(net.get(), sample_count, sample_rows, sample_cols, sample_seed, &raw));
      const Dataset data(raw);
      check(sbn_dataset_save(data.get(), sample_out.c_str()));
    } else if (*train) {
      if (train_data.empty() && train_data_dir.empty()) {
        throw CommandError{kExitUsage, "train needs --data/--out or --data-dir/--model-dir"};
      }
      if (train_net.empty() && train_layers.empty()) {
        throw CommandError{kExitUsage, "train needs --net or --layers for the initial network"};
      }
      train_options.solver = train_solver.options;

      std::vector<std::string> inputs;
      std::vector<std::string> outputs;
      if (!train_data.empty()) {
        inputs.push_back(train_data);
        outputs.push_back(train_out);
      } else {
        inputs = class_files(train_data_dir, ".bitmap");
        ensure_directory(train_model_dir);
        for (std::size_t k = 0; k < inputs.size(); ++k) {
          outputs.push_back(class_file(train_model_dir, k, ".sbn"));
        }
      }

      std::ofstream trace;
      if (!train_trace.empty()) {
        trace = open_output(train_trace);
        trace << "class,epoch,mean_bound\n";
      }
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        const Dataset data = load_dataset(inputs[k]);
        const std::uint64_t seed = sbn_derive_seed(train_options.seed, k);
        Network net = train_net.empty() ? generate(train_layers, -train_init, train_init, seed)
                                         : load_network(train_net);
        sbn_train_options options = train_options;
        options.seed = seed;
        std::vector<double> epochs(options.sweeps);
        std::size_t nonconverged = 0;
        check(sbn_train(net.get(), data.get(), &options, epochs.data(), &nonconverged));
        check(sbn_network_save(net.get(), outputs[k].c_str()));
        std::cout << "class " << k << " patterns " << sbn_dataset_count(data.get());
        for (double e : epochs) {
          std::cout << ' ' << real(e);
        }
        std::cout << " nonconverged " << nonconverged << "\n";
        if (trace.is_open()) {
          for (std::size_t e = 0; e < epochs.size(); ++e) {
            trace << k << ',' << e + 1 << ',' << real(epochs[e]) << '\n';
          }
        }
      }
    } else if (*classify) {
      if (cls_data_dir.empty() && cls_data.empty()) {
        throw CommandError{kExitUsage, "classify needs --data-dir or --data"};
      }
      std::vector<Network> models;
      for (const std::string& f : class_files(cls_model_dir, ".sbn")) {
        models.push_back(load_network(f));
      }
      std::vector<const sbn_network*> raw_models;
      for (const Network& m : models) {
        raw_models.push_back(m.get());
      }

      std::vector<std::pair<long, Dataset>> sets;
      if (!cls_data_dir.empty()) {
        const auto files = class_files(cls_data_dir, ".bitmap");
        for (std::size_t k = 0; k < files.size(); ++k) {
          sets.emplace_back(static_cast<long>(k), load_dataset(files[k]));
        }
      } else {
        sets.emplace_back(-1, load_dataset(cls_data));
      }

      std::ofstream out;
      if (!cls_out.empty()) {
        out = open_output(cls_out);
        out << "label,index,predicted\n";
      }
      std::vector<std::vector<std::size_t>> confusion(sets.size(), std::vector<std::size_t>(models.size(), 0));
      std::size_t correct = 0;
      std::size_t total = 0;
      for (std::size_t s = 0; s < sets.size(); ++s) {
        const auto& [label, data] = sets[s];
        for (std::size_t k = 0; k < sbn_dataset_count(data.get()); ++k) {
          const auto pattern = pattern_of(data.get(), k);
          std::size_t predicted = 0;
          check(sbn_classify(raw_models.data(), raw_models.size(), pattern.data(), pattern.size(),
                             &cls_solver.options, &predicted));
          if (out.is_open()) {
            out << label << ',' << k << ',' << predicted << '\n';
          }
          if (label >= 0) {
            ++confusion[s][predicted];
            ++total;
            if (static_cast<long>(predicted) == label) {
              ++correct;
            }
          } else {
            std::cout << predicted << "\n";
          }
        }
      }
      if (!cls_data_dir.empty()) {
        std::cout << "confusion (rows true, columns predicted)\n";
        for (const auto& row : confusion) {
          for (std::size_t c = 0; c < row.size(); ++c) {
            std::cout << (c ? " " : "") << row[c];
          }
          std::cout << "\n";
        }
        std::cout << "accuracy " << real(total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0)
                  << "\n";
      }
    } else if (*score) {
      const Network net = load_network(score_net);
      const Dataset data = load_dataset(score_data);
      const std::size_t width = sbn_dataset_rows(data.get()) * sbn_dataset_cols(data.get());
      double total = 0.0;
      for (std::size_t k = 0; k < sbn_dataset_count(data.get()); ++k) {
        const auto pattern = pattern_of(data.get(), k);
        double b = 0.0;
        check(sbn_pattern_bound(net.get(), pattern.data(), pattern.size(), &score_solver.options, &b));
        total += b;
      }
      double normalized = 0.0;
      check(sbn_normalized_score(total, sbn_dataset_count(data.get()), width, &normalized));
      std::cout << "total_bound " << real(total) << "\n"
                << "normalized_score " << real(normalized) << "\n";
    } else if (*synth) {
      const std::size_t classes = synth_setup.classes;
      std::vector<sbn_network*> teachers(classes, nullptr);
      std::vector<sbn_dataset*> train_sets(classes, nullptr);
      std::vector<sbn_dataset*> test_sets(classes, nullptr);
      check(sbn_synthetic_generate(&synth_setup, synth_layers.data(), synth_layers.size(), synth_rows, synth_cols,
                                   teachers.data(), train_sets.data(), test_sets.data()));
      std::vector<Network> owned_teachers;
      std::vector<Dataset> owned_sets;
      for (std::size_t c = 0; c < classes; ++c) {
        owned_teachers.emplace_back(teachers[c]);
        owned_sets.emplace_back(train_sets[c]);
        owned_sets.emplace_back(test_sets[c]);
      }
      const fs::path root(synth_out);
      for (const char* sub : {"teachers", "train", "test"}) {
        ensure_directory(root / sub);
      }
      for (std::size_t c = 0; c < classes; ++c) {
        check(sbn_network_save(teachers[c], class_file(root / "teachers", c, ".sbn").c_str()));
        check(sbn_dataset_save(train_sets[c], class_file(root / "train", c, ".bitmap").c_str()));
        check(sbn_dataset_save(test_sets[c], class_file(root / "test", c, ".bitmap").c_str()));
      }
    } else if (*fig5) {
      std::ofstream out;
      if (!f5_out.empty()) {
        out = open_output(f5_out);
        out << "index,exact,bound,rel_mean_field,rel_uniform,converged\n";
      }
      auto on_row = [](const sbn_relative_error_row* row, void* user) {
        auto* stream = static_cast<std::ofstream*>(user);
        *stream << row->index << ',' << real(row->exact) << ',' << real(row->bound) << ','
                << real(row->rel_mean_field) << ',' << real(row->rel_uniform) << ',' << row->converged << '\n';
      };
      sbn_relative_error_summary summary{};
      check(sbn_relative_error_study(f5_count, f5_seed, &f5_solver.options, out.is_open() ? +on_row : nullptr,
                                     &out, &summary));
      std::cout << "networks " << summary.count << "\n"
                << "mean_rel_mean_field " << real(summary.mean_rel_mean_field) << "\n"
                << "rms_rel_uniform " << real(summary.rms_rel_uniform) << "\n"
                << "min_rel_mean_field " << real(summary.min_rel_mean_field) << "\n"
                << "nonconverged " << summary.nonconverged << "\n";
    } else if (*gauss) {
      sbn_gaussian_report report{};
      check(sbn_gaussian_bound_check(&report));
      std::cout << "argmin_xi " << real(report.argmin) << "\n"
                << "min_bound " << real(report.minimum) << "\n"
                << "bound_at_xi_0 " << real(report.at_zero) << "\n"
                << "exact_reference " << real(report.exact_reference) << "\n";
    }
  } catch (const CommandError& e) {
    std::cerr << "sbnmf: " << e.message << "\n";
    return e.code;
  }
  return 0;
}
