#include "sbnmf/sbnmf.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "sbnmf/errors.hpp"
#include "sbnmf/exact.hpp"
#include "sbnmf/experiments.hpp"
#include "sbnmf/generate.hpp"
#include "sbnmf/learning.hpp"
#include "sbnmf/mean_field.hpp"
#include "sbnmf/text_io.hpp"

struct sbn_network {
  sbn::SigmoidBeliefNetwork net;
};

struct sbn_evidence {
  sbn::Evidence evidence;
};

struct sbn_dataset {
  sbn::BitmapDataset data;
};

namespace {

thread_local std::string last_error;

template <class Body>
sbn_status guarded(Body&& body) {
  last_error.clear();
  try {
    body();
    return SBN_OK;
  } catch (const sbn::ParseError& e) {
    last_error = e.what();
    return SBN_ERR_PARSE;
  } catch (const sbn::IoError& e) {
    last_error = e.what();
    return SBN_ERR_IO;
  } catch (const sbn::GuardError& e) {
    last_error = e.what();
    return SBN_ERR_GUARD;
  } catch (const sbn::InvalidArgument& e) {
    last_error = e.what();
    return SBN_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SBN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SBN_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return SBN_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* name) {
  if (p == nullptr) {
    throw sbn::InvalidArgument(std::string(name) + " is null");
  }
}

sbn::SolveOptions to_cpp(const sbn_solve_options* options) {
  sbn::SolveOptions out;
  if (options != nullptr) {
    out.init_mu = options->init_mu;
    out.tol_mu = options->tol_mu;
    out.tol_bound = options->tol_bound;
    out.max_sweeps = options->max_sweeps;
    out.xi_tol = options->xi_tol;
  }
  return out;
}

sbn_bound_breakdown to_c(const sbn::BoundBreakdown& b) {
  return {b.quadratic, b.bias, b.xi_linear, b.log_moment, b.entropy, b.total};
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::size_t> layer_list(const size_t* layers, size_t n_layers) {
  if (n_layers > 0) {
    require(layers, "layers");
  }
  return std::vector<std::size_t>(layers, layers + n_layers);
}

sbn::SyntheticSetup to_cpp(const sbn_synthetic_setup* setup, const size_t* layers, size_t n_layers, size_t rows,
                           size_t cols) {
  require(setup, "setup");
  sbn::SyntheticSetup s;
  s.classes = setup->classes;
  s.train_per_class = setup->train_per_class;
  s.test_per_class = setup->test_per_class;
  s.visible_offset = setup->visible_offset;
  s.student_init = setup->student_init;
  s.seed = setup->seed;
  s.layers = layer_list(layers, n_layers);
  s.rows = rows;
  s.cols = cols;
  return s;
}

}  // namespace

extern "C" {

const char* sbn_last_error(void) { return last_error.c_str(); }

const char* sbn_status_name(sbn_status status) {
  switch (status) {
    case SBN_OK:
      return "ok";
    case SBN_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SBN_ERR_PARSE:
      return "parse error";
    case SBN_ERR_IO:
      return "i/o error";
    case SBN_ERR_GUARD:
      return "numeric guard";
    case SBN_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void sbn_string_free(char* text) { delete[] text; }

sbn_status sbn_network_parse(const char* text, sbn_network** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sbn_network{sbn::parse_network(text)};
  });
}

sbn_status sbn_network_load(const char* path, sbn_network** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sbn_network{sbn::parse_network(sbn::read_text_file(path))};
  });
}

sbn_status sbn_network_emit(const sbn_network* net, char** text_out) {
  return guarded([&] {
    require(net, "net");
    require(text_out, "text_out");
    *text_out = copy_string(sbn::emit_network(net->net));
  });
}

sbn_status sbn_network_save(const sbn_network* net, const char* path) {
  return guarded([&] {
    require(net, "net");
    require(path, "path");
    sbn::write_text_file(path, sbn::emit_network(net->net));
  });
}

sbn_status sbn_network_clone(const sbn_network* net, sbn_network** out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    *out = new sbn_network{net->net};
  });
}

void sbn_network_free(sbn_network* net) { delete net; }

size_t sbn_network_node_count(const sbn_network* net) { return net ? net->net.size() : 0; }

size_t sbn_network_edge_count(const sbn_network* net) { return net ? net->net.edge_count() : 0; }

sbn_status sbn_network_bias(const sbn_network* net, size_t node, double* out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    if (node >= net->net.size()) {
      throw sbn::InvalidArgument("node index out of range");
    }
    *out = net->net.bias(node);
  });
}

sbn_status sbn_network_weight(const sbn_network* net, size_t child, size_t parent, double* out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    if (child >= net->net.size() || parent >= net->net.size()) {
      throw sbn::InvalidArgument("node index out of range");
    }
    *out = net->net.weight(child, parent);
  });
}

sbn_status sbn_network_generate_layered(const size_t* layers, size_t n_layers, double lo, double hi, uint64_t seed,
                                        sbn_network** out) {
  return guarded([&] {
    require(out, "out");
    const auto sizes = layer_list(layers, n_layers);
    *out = new sbn_network{sbn::gen_random_layered(sizes, lo, hi, seed)};
  });
}

sbn_status sbn_evidence_create(sbn_evidence** out) {
  return guarded([&] {
    require(out, "out");
    *out = new sbn_evidence{};
  });
}

sbn_status sbn_evidence_parse(const char* text, sbn_evidence** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sbn_evidence{sbn::parse_evidence(text)};
  });
}

sbn_status sbn_evidence_load(const char* path, sbn_evidence** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sbn_evidence{sbn::parse_evidence(sbn::read_text_file(path))};
  });
}

sbn_status sbn_evidence_clamp(sbn_evidence* evidence, size_t node, int value) {
  return guarded([&] {
    require(evidence, "evidence");
    if (value != 0 && value != 1) {
      throw sbn::InvalidArgument("evidence value must be 0 or 1");
    }
    evidence->evidence.clamp(node, static_cast<sbn::Bit>(value));
  });
}

size_t sbn_evidence_count(const sbn_evidence* evidence) { return evidence ? evidence->evidence.size() : 0; }

void sbn_evidence_free(sbn_evidence* evidence) { delete evidence; }

sbn_status sbn_dataset_parse(const char* text, sbn_dataset** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sbn_dataset{sbn::parse_dataset(text)};
  });
}

sbn_status sbn_dataset_load(const char* path, sbn_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sbn_dataset{sbn::parse_dataset(sbn::read_text_file(path))};
  });
}

sbn_status sbn_dataset_save(const sbn_dataset* data, const char* path) {
  return guarded([&] {
    require(data, "data");
    require(path, "path");
    sbn::write_text_file(path, sbn::emit_dataset(data->data));
  });
}

void sbn_dataset_free(sbn_dataset* data) { delete data; }

size_t sbn_dataset_rows(const sbn_dataset* data) { return data ? data->data.rows() : 0; }

size_t sbn_dataset_cols(const sbn_dataset* data) { return data ? data->data.cols() : 0; }

size_t sbn_dataset_count(const sbn_dataset* data) { return data ? data->data.size() : 0; }

sbn_status sbn_dataset_pattern(const sbn_dataset* data, size_t k, uint8_t* out, size_t out_len) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    if (k >= data->data.size()) {
      throw sbn::InvalidArgument("pattern index out of range");
    }
    if (out_len != data->data.width()) {
      throw sbn::InvalidArgument("output buffer length must equal rows * cols");
    }
    const auto p = data->data.pattern(k);
    std::memcpy(out, p.data(), p.size());
  });
}

sbn_status sbn_sample_dataset(const sbn_network* net, size_t count, size_t rows, size_t cols, uint64_t seed,
                              sbn_dataset** out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    const auto map = sbn::default_visible_map(net->net, rows * cols);
    sbn::Rng rng(seed);
    *out = new sbn_dataset{sbn::sample_bitmaps(net->net, count, rows, cols, map, rng)};
  });
}

sbn_status sbn_log_likelihood_exact(const sbn_network* net, const sbn_evidence* evidence, double* out) {
  return guarded([&] {
    require(net, "net");
    require(evidence, "evidence");
    require(out, "out");
    *out = sbn::log_likelihood_exact(net->net, evidence->evidence);
  });
}

sbn_solve_options sbn_solve_options_default(void) {
  const sbn::SolveOptions d;
  return {d.init_mu, d.tol_mu, d.tol_bound, d.max_sweeps, d.xi_tol};
}

sbn_status sbn_mean_field_solve(const sbn_network* net, const sbn_evidence* evidence,
                                const sbn_solve_options* options, sbn_solve_report* report, double* mu_out,
                                double* xi_out) {
  return guarded([&] {
    require(net, "net");
    require(evidence, "evidence");
    require(report, "report");
    const sbn::SolveResult r = sbn::solve(net->net, evidence->evidence, to_cpp(options));
    report->bound = to_c(r.bound);
    report->converged = r.converged ? 1 : 0;
    report->sweeps = r.sweeps;
    if (mu_out != nullptr) {
      std::copy(r.state.mu.begin(), r.state.mu.end(), mu_out);
    }
    if (xi_out != nullptr) {
      std::copy(r.state.xi.begin(), r.state.xi.end(), xi_out);
    }
  });
}

sbn_train_options sbn_train_options_default(void) {
  const sbn::TrainOptions d;
  return {d.rate, d.sweeps, d.seed, d.shuffle ? 1 : 0, sbn_solve_options_default()};
}

sbn_status sbn_train(sbn_network* net, const sbn_dataset* data, const sbn_train_options* options,
                     double* epoch_trace, size_t* nonconverged) {
  return guarded([&] {
    require(net, "net");
    require(data, "data");
    require(options, "options");
    sbn::TrainOptions opts;
    opts.rate = options->rate;
    opts.sweeps = options->sweeps;
    opts.seed = options->seed;
    opts.shuffle = options->shuffle != 0;
    opts.solver = to_cpp(&options->solver);
    const auto map = sbn::default_visible_map(net->net, data->data.width());
    sbn::TrainResult r = sbn::train(net->net, data->data, map, opts);
    net->net = std::move(r.net);
    if (epoch_trace != nullptr) {
      std::copy(r.epoch_mean_bound.begin(), r.epoch_mean_bound.end(), epoch_trace);
    }
    if (nonconverged != nullptr) {
      *nonconverged = r.nonconverged_solves;
    }
  });
}

sbn_status sbn_pattern_bound(const sbn_network* net, const uint8_t* pattern, size_t len,
                             const sbn_solve_options* options, double* out) {
  return guarded([&] {
    require(net, "net");
    require(pattern, "pattern");
    require(out, "out");
    const auto map = sbn::default_visible_map(net->net, len);
    *out = sbn::pattern_bound(net->net, map, std::span<const sbn::Bit>(pattern, len), to_cpp(options));
  });
}

sbn_status sbn_classify(const sbn_network* const* models, size_t n_models, const uint8_t* pattern, size_t len,
                        const sbn_solve_options* options, size_t* label_out) {
  return guarded([&] {
    require(models, "models");
    require(pattern, "pattern");
    require(label_out, "label_out");
    std::vector<sbn::SigmoidBeliefNetwork> nets;
    nets.reserve(n_models);
    for (size_t c = 0; c < n_models; ++c) {
      require(models[c], "model");
      nets.push_back(models[c]->net);
    }
    if (nets.empty()) {
      throw sbn::InvalidArgument("classification needs at least two models");
    }
    for (const auto& n : nets) {
      if (n.size() != nets.front().size()) {
        throw sbn::InvalidArgument("models must share the same node layout");
      }
    }
    const auto map = sbn::default_visible_map(nets.front(), len);
    *label_out = sbn::classify(nets, std::span<const sbn::Bit>(pattern, len), map, to_cpp(options));
  });
}

uint64_t sbn_derive_seed(uint64_t seed, uint64_t task) { return sbn::derive_seed(seed, task); }

sbn_status sbn_normalized_score(double total_bound, size_t n_patterns, size_t n_visible, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = sbn::normalized_score(total_bound, n_patterns, n_visible);
  });
}

sbn_status sbn_relative_error_study(size_t count, uint64_t seed, const sbn_solve_options* options,
                                    sbn_row_callback on_row, void* user, sbn_relative_error_summary* summary) {
  return guarded([&] {
    require(summary, "summary");
    std::function<void(const sbn::RelativeErrorRow&)> forward;
    if (on_row != nullptr) {
      forward = [&](const sbn::RelativeErrorRow& row) {
        const sbn_relative_error_row c_row{row.index,          row.exact,       row.bound,
                                           row.rel_mean_field, row.rel_uniform, row.converged ? 1 : 0};
        on_row(&c_row, user);
      };
    }
    const sbn::RelativeErrorSummary s = sbn::run_relative_error_study(count, seed, to_cpp(options), forward);
    *summary = {s.count, s.mean_rel_mean_field, s.rms_rel_uniform, s.min_rel_mean_field, s.nonconverged};
  });
}

sbn_status sbn_gaussian_bound_check(sbn_gaussian_report* report) {
  return guarded([&] {
    require(report, "report");
    const sbn::GaussianBoundReport r = sbn::gaussian_bound_check();
    *report = {r.argmin, r.minimum, r.at_zero, sbn::GaussianBoundReport::kExactReference};
  });
}

sbn_synthetic_setup sbn_synthetic_setup_default(void) {
  const sbn::SyntheticSetup d;
  return {d.classes, d.train_per_class, d.test_per_class, d.visible_offset, d.student_init, d.seed};
}

sbn_status sbn_synthetic_generate(const sbn_synthetic_setup* setup, const size_t* layers, size_t n_layers,
                                  size_t rows, size_t cols, sbn_network** teachers_out, sbn_dataset** train_out,
                                  sbn_dataset** test_out) {
  return guarded([&] {
    require(teachers_out, "teachers_out");
    require(train_out, "train_out");
    require(test_out, "test_out");
    const sbn::SyntheticSetup s = to_cpp(setup, layers, n_layers, rows, cols);
    const auto teachers = sbn::make_teachers(s);
    const auto data = sbn::make_synthetic_data(s, teachers);
    std::vector<std::unique_ptr<sbn_network>> nets;
    std::vector<std::unique_ptr<sbn_dataset>> train_sets;
    std::vector<std::unique_ptr<sbn_dataset>> test_sets;
    for (size_t c = 0; c < s.classes; ++c) {
      nets.push_back(std::make_unique<sbn_network>(sbn_network{teachers[c]}));
      train_sets.push_back(std::make_unique<sbn_dataset>(sbn_dataset{data.train[c]}));
      test_sets.push_back(std::make_unique<sbn_dataset>(sbn_dataset{data.test[c]}));
    }
    for (size_t c = 0; c < s.classes; ++c) {
      teachers_out[c] = nets[c].release();
      train_out[c] = train_sets[c].release();
      test_out[c] = test_sets[c].release();
    }
  });
}

sbn_status sbn_synthetic_student(const sbn_synthetic_setup* setup, const size_t* layers, size_t n_layers, size_t rows,
                                 size_t cols, size_t c, sbn_network** out) {
  return guarded([&] {
    require(out, "out");
    const sbn::SyntheticSetup s = to_cpp(setup, layers, n_layers, rows, cols);
    if (c >= s.classes) {
      throw sbn::InvalidArgument("class index out of range");
    }
    *out = new sbn_network{sbn::make_student(s, c)};
  });
}

}  // extern "C"
