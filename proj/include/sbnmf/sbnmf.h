/*
 * C interface to the sigmoid belief network mean field library.
 *
 * Objects are opaque handles created by *_create / *_load / *_parse and
 * released with the matching *_free. Every fallible call returns an
 * sbn_status; on failure sbn_last_error() gives a message for the calling
 * thread, valid until that thread's next library call.
 */
#ifndef SBNMF_H
#define SBNMF_H

#include <stddef.h>
#include <stdint.h>

#if defined(SBNMF_BUILDING_LIBRARY)
#define SBN_API __attribute__((visibility("default")))
#else
#define SBN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbn_status {
  SBN_OK = 0,
  SBN_ERR_INVALID_ARGUMENT = 1,
  SBN_ERR_PARSE = 2,
  SBN_ERR_IO = 3,
  SBN_ERR_GUARD = 4,
  SBN_ERR_INTERNAL = 5
} sbn_status;

typedef struct sbn_network sbn_network;
typedef struct sbn_evidence sbn_evidence;
typedef struct sbn_dataset sbn_dataset;

SBN_API const char* sbn_last_error(void);
SBN_API const char* sbn_status_name(sbn_status status);

/* Seed of an independent stream for task `task` (seed XOR task, one generator step). */
SBN_API uint64_t sbn_derive_seed(uint64_t seed, uint64_t task);

/* Releases strings returned through char** out-parameters. */
SBN_API void sbn_string_free(char* text);

/* Networks ---------------------------------------------------------------- */

SBN_API sbn_status sbn_network_parse(const char* text, sbn_network** out);
SBN_API sbn_status sbn_network_load(const char* path, sbn_network** out);
SBN_API sbn_status sbn_network_emit(const sbn_network* net, char** text_out);
SBN_API sbn_status sbn_network_save(const sbn_network* net, const char* path);
SBN_API sbn_status sbn_network_clone(const sbn_network* net, sbn_network** out);
SBN_API void sbn_network_free(sbn_network* net);

SBN_API size_t sbn_network_node_count(const sbn_network* net);
SBN_API size_t sbn_network_edge_count(const sbn_network* net);
SBN_API sbn_status sbn_network_bias(const sbn_network* net, size_t node, double* out);
/* J_ij; zero when j is not a parent of i. */
SBN_API sbn_status sbn_network_weight(const sbn_network* net, size_t child, size_t parent, double* out);

/* Full bipartite layered network, parameters uniform on [lo, hi]. */
SBN_API sbn_status sbn_network_generate_layered(const size_t* layers, size_t n_layers, double lo, double hi,
                                                uint64_t seed, sbn_network** out);

/* Evidence ---------------------------------------------------------------- */

SBN_API sbn_status sbn_evidence_create(sbn_evidence** out);
SBN_API sbn_status sbn_evidence_parse(const char* text, sbn_evidence** out);
SBN_API sbn_status sbn_evidence_load(const char* path, sbn_evidence** out);
SBN_API sbn_status sbn_evidence_clamp(sbn_evidence* evidence, size_t node, int value);
SBN_API size_t sbn_evidence_count(const sbn_evidence* evidence);
SBN_API void sbn_evidence_free(sbn_evidence* evidence);

/* Datasets ---------------------------------------------------------------- */

SBN_API sbn_status sbn_dataset_parse(const char* text, sbn_dataset** out);
SBN_API sbn_status sbn_dataset_load(const char* path, sbn_dataset** out);
SBN_API sbn_status sbn_dataset_save(const sbn_dataset* data, const char* path);
SBN_API void sbn_dataset_free(sbn_dataset* data);
SBN_API size_t sbn_dataset_rows(const sbn_dataset* data);
SBN_API size_t sbn_dataset_cols(const sbn_dataset* data);
SBN_API size_t sbn_dataset_count(const sbn_dataset* data);
/* Copies pattern k (rows*cols bytes of 0/1) into out. */
SBN_API sbn_status sbn_dataset_pattern(const sbn_dataset* data, size_t k, uint8_t* out, size_t out_len);

/* Ancestral samples of the last rows*cols nodes, row-major. */
SBN_API sbn_status sbn_sample_dataset(const sbn_network* net, size_t count, size_t rows, size_t cols,
                                      uint64_t seed, sbn_dataset** out);

/* Exact inference --------------------------------------------------------- */

SBN_API sbn_status sbn_log_likelihood_exact(const sbn_network* net, const sbn_evidence* evidence, double* out);

/* Mean field -------------------------------------------------------------- */

typedef struct sbn_solve_options {
  double init_mu;
  double tol_mu;
  double tol_bound;
  size_t max_sweeps;
  double xi_tol;
} sbn_solve_options;

/* 0.5, 1e-8, 1e-10, 1000, 1e-10 */
SBN_API sbn_solve_options sbn_solve_options_default(void);

typedef struct sbn_bound_breakdown {
  double quadratic;
  double bias;
  double xi_linear;
  double log_moment;
  double entropy;
  double total;
} sbn_bound_breakdown;

typedef struct sbn_solve_report {
  sbn_bound_breakdown bound;
  int converged;
  size_t sweeps;
} sbn_solve_report;

/* mu_out and xi_out may be NULL; otherwise they receive node_count values. */
SBN_API sbn_status sbn_mean_field_solve(const sbn_network* net, const sbn_evidence* evidence,
                                        const sbn_solve_options* options, sbn_solve_report* report, double* mu_out,
                                        double* xi_out);

/* Learning ---------------------------------------------------------------- */

typedef struct sbn_train_options {
  double rate;
  size_t sweeps;
  uint64_t seed;
  int shuffle;
  sbn_solve_options solver;
} sbn_train_options;

/* rate 0.05, 5 sweeps, seed 0, shuffle on, default solver. */
SBN_API sbn_train_options sbn_train_options_default(void);

/*
 * Trains net in place on the dataset, whose pixels map onto the last
 * rows*cols nodes. epoch_trace (may be NULL) receives options->sweeps
 * epoch-mean bounds; nonconverged (may be NULL) the count of solves that
 * hit max_sweeps.
 */
SBN_API sbn_status sbn_train(sbn_network* net, const sbn_dataset* data, const sbn_train_options* options,
                             double* epoch_trace, size_t* nonconverged);

/* Mean field bound of one pattern mapped onto the last len nodes. */
SBN_API sbn_status sbn_pattern_bound(const sbn_network* net, const uint8_t* pattern, size_t len,
                                     const sbn_solve_options* options, double* out);

/* Index of the model with the highest bound; ties go to the lowest index. */
SBN_API sbn_status sbn_classify(const sbn_network* const* models, size_t n_models, const uint8_t* pattern,
                                size_t len, const sbn_solve_options* options, size_t* label_out);

SBN_API sbn_status sbn_normalized_score(double total_bound, size_t n_patterns, size_t n_visible, double* out);

/* Experiments ------------------------------------------------------------- */

typedef struct sbn_relative_error_row {
  size_t index;
  double exact;
  double bound;
  double rel_mean_field;
  double rel_uniform;
  int converged;
} sbn_relative_error_row;

typedef struct sbn_relative_error_summary {
  size_t count;
  double mean_rel_mean_field;
  double rms_rel_uniform;
  double min_rel_mean_field;
  size_t nonconverged;
} sbn_relative_error_summary;

typedef void (*sbn_row_callback)(const sbn_relative_error_row* row, void* user);

/* Random 2x4x6 networks, bottom layer clamped to zero. on_row may be NULL. */
SBN_API sbn_status sbn_relative_error_study(size_t count, uint64_t seed, const sbn_solve_options* options,
                                            sbn_row_callback on_row, void* user,
                                            sbn_relative_error_summary* summary);

typedef struct sbn_gaussian_report {
  double argmin;
  double minimum;
  double at_zero;
  double exact_reference;
} sbn_gaussian_report;

SBN_API sbn_status sbn_gaussian_bound_check(sbn_gaussian_report* report);

typedef struct sbn_synthetic_setup {
  size_t classes;
  size_t train_per_class;
  size_t test_per_class;
  double visible_offset;
  double student_init;
  uint64_t seed;
} sbn_synthetic_setup;

/* 4 classes, 200 train / 100 test, offset 2, student init 0.1, seed 0. */
SBN_API sbn_synthetic_setup sbn_synthetic_setup_default(void);

/*
 * Builds the teacher networks and their sampled datasets for a layered
 * layout whose bottom layer is rows*cols. Output arrays have `classes`
 * entries and must be released by the caller with the matching *_free.
 */
SBN_API sbn_status sbn_synthetic_generate(const sbn_synthetic_setup* setup, const size_t* layers, size_t n_layers,
                                          size_t rows, size_t cols, sbn_network** teachers_out,
                                          sbn_dataset** train_out, sbn_dataset** test_out);

/* Untrained student network for class c. */
SBN_API sbn_status sbn_synthetic_student(const sbn_synthetic_setup* setup, const size_t* layers, size_t n_layers,
                                         size_t rows, size_t cols, size_t c, sbn_network** out);

#ifdef __cplusplus
}
#endif

#endif /* SBNMF_H */
