/*
 * prefnet C API.
 *
 * Every function returns a prefnet_status. On failure the message for the
 * calling thread is available from prefnet_last_error() until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with prefnet_string_free(). Handles are released with their
 * matching *_free function; passing NULL to a free function is a no-op.
 */
#ifndef PREFNET_H
#define PREFNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PREFNET_BUILDING)
#    define PREFNET_API __declspec(dllexport)
#  else
#    define PREFNET_API __declspec(dllimport)
#  endif
#else
#  define PREFNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prefnet_status {
  PREFNET_OK = 0,
  PREFNET_ERROR_INVALID_ARGUMENT = 1,
  PREFNET_ERROR_IO = 2,
  PREFNET_ERROR_PARSE = 3,
  PREFNET_ERROR_VALIDATION = 4,
  PREFNET_ERROR_DOMAIN = 5,
  PREFNET_ERROR_INTERNAL = 6
} prefnet_status;

typedef enum prefnet_network {
  PREFNET_BEHAVIORAL = 0,
  PREFNET_COGNITIVE = 1
} prefnet_network;

typedef enum prefnet_task {
  PREFNET_FORMATION = 0,
  PREFNET_DISSOLUTION = 1
} prefnet_task;

typedef enum prefnet_method {
  PREFNET_EQUAL_PREFERENCE = 0,
  PREFNET_MINIMUM_PREFERENCE = 1
} prefnet_method;

typedef enum prefnet_classifier {
  PREFNET_LINEAR_REGRESSION = 0,
  PREFNET_LINEAR_SVM = 1,
  PREFNET_KNN = 2,
  PREFNET_RANDOM_FOREST = 3,
  PREFNET_NAIVE_BAYES = 4
} prefnet_classifier;

#define PREFNET_CLASSIFIER_COUNT 5

typedef struct prefnet_series prefnet_series;
typedef struct prefnet_dataset prefnet_dataset;
typedef struct prefnet_model prefnet_model;

PREFNET_API const char* prefnet_version(void);
PREFNET_API const char* prefnet_last_error(void);
PREFNET_API const char* prefnet_status_name(prefnet_status status);
PREFNET_API void prefnet_string_free(char* text);

/* Name <-> enum helpers; names match the CLI flags. */
PREFNET_API prefnet_status prefnet_parse_network(const char* name, prefnet_network* out);
PREFNET_API prefnet_status prefnet_parse_task(const char* name, prefnet_task* out);
PREFNET_API prefnet_status prefnet_parse_method(const char* name, prefnet_method* out);
PREFNET_API prefnet_status prefnet_parse_classifier(const char* name, prefnet_classifier* out);
PREFNET_API const char* prefnet_classifier_name(prefnet_classifier classifier);

/* ---- synthetic data ---------------------------------------------------- */

PREFNET_API prefnet_status prefnet_synth_default_config(char** out_json);
/* config_json may be NULL for the defaults. Writes schema.json, events.csv,
 * nominations.csv, attributes.csv and ledger.json into out_dir. */
PREFNET_API prefnet_status prefnet_synth(const char* config_json, const char* out_dir,
                                         char** out_files_json);

/* ---- snapshots --------------------------------------------------------- */

typedef struct prefnet_ingest_options {
  const char* schema_path;
  const char* events_path;
  const char* nominations_path;
  const char* attributes_path;
  int mutual_nominations;
} prefnet_ingest_options;

PREFNET_API prefnet_status prefnet_series_ingest(const prefnet_ingest_options* options,
                                                 prefnet_series** out, char** out_warnings_json);
PREFNET_API prefnet_status prefnet_series_load(const char* path, prefnet_series** out);
PREFNET_API prefnet_status prefnet_series_save(const prefnet_series* series, const char* path);
PREFNET_API size_t prefnet_series_semesters(const prefnet_series* series);
PREFNET_API void prefnet_series_free(prefnet_series* series);

/* ---- preferences ------------------------------------------------------- */

/* semester 0 emits every semester. */
PREFNET_API prefnet_status prefnet_preferences(const prefnet_series* series, int semester,
                                               prefnet_network network, char** out_json);
PREFNET_API prefnet_status prefnet_matrices(const prefnet_series* series, const char* attribute,
                                            prefnet_network network, double epsilon,
                                            char** out_json, char** out_matrix_csv,
                                            char** out_trend_csv);

/* ---- datasets ---------------------------------------------------------- */

typedef struct prefnet_dataset_options {
  prefnet_task task;
  prefnet_method method;
  prefnet_network network;
  int semester; /* label semester K of the test split, K >= 3 */
  unsigned hop_limit;
} prefnet_dataset_options;

PREFNET_API void prefnet_dataset_options_init(prefnet_dataset_options* options);
PREFNET_API prefnet_status prefnet_dataset_build(const prefnet_series* series,
                                                 const prefnet_dataset_options* options,
                                                 prefnet_dataset** out_train,
                                                 prefnet_dataset** out_test);
PREFNET_API prefnet_status prefnet_dataset_to_csv(const prefnet_dataset* dataset, char** out_csv);
PREFNET_API prefnet_status prefnet_dataset_from_csv(const char* csv, prefnet_dataset** out);
PREFNET_API size_t prefnet_dataset_rows(const prefnet_dataset* dataset);
PREFNET_API size_t prefnet_dataset_positives(const prefnet_dataset* dataset);
PREFNET_API void prefnet_dataset_free(prefnet_dataset* dataset);

/* ---- models ------------------------------------------------------------ */

typedef struct prefnet_train_options {
  double validation_fraction;
  uint64_t seed;
  double negative_ratio; /* <= 0 disables negative downsampling */
  int allow_expansion;
  unsigned threads;
} prefnet_train_options;

PREFNET_API void prefnet_train_options_init(prefnet_train_options* options);

/* Trains one classifier on `train` (a validation share is held out). */
PREFNET_API prefnet_status prefnet_train(const prefnet_dataset* train,
                                         prefnet_classifier classifier,
                                         const prefnet_train_options* options,
                                         prefnet_model** out_model,
                                         char** out_validation_json);

/* Trains the listed classifiers, possibly concurrently, and reports the
 * validation-selected kind. out_models must have room for `count` handles. */
PREFNET_API prefnet_status prefnet_train_many(const prefnet_dataset* train,
                                              const prefnet_classifier* classifiers, size_t count,
                                              const prefnet_train_options* options,
                                              prefnet_model** out_models,
                                              prefnet_classifier* out_selected,
                                              char** out_summary_json);

PREFNET_API prefnet_status prefnet_model_to_json(const prefnet_model* model, char** out_json);
PREFNET_API prefnet_status prefnet_model_from_json(const char* json, prefnet_model** out);
PREFNET_API prefnet_classifier prefnet_model_kind(const prefnet_model* model);
PREFNET_API size_t prefnet_model_dims(const prefnet_model* model);
/* `features` are already-scaled model inputs of length prefnet_model_dims(). */
PREFNET_API prefnet_status prefnet_model_predict(const prefnet_model* model,
                                                 const double* features, size_t count,
                                                 int* out_label, double* out_score);
PREFNET_API void prefnet_model_free(prefnet_model* model);

PREFNET_API prefnet_status prefnet_evaluate(const prefnet_model* model,
                                            const prefnet_dataset* test, char** out_report_json,
                                            char** out_roc_csv);

/* ---- importance -------------------------------------------------------- */

PREFNET_API prefnet_status prefnet_importance(const prefnet_model* regression,
                                              prefnet_task task, prefnet_network network,
                                              char** out_json);

/* Trains an unexpanded regression for each (task, network) cell and emits
 * weight and rank tables plus the top-k comparison. */
PREFNET_API prefnet_status prefnet_importance_tables(
    const prefnet_series* series, const prefnet_task* tasks, const prefnet_network* networks,
    size_t cells, prefnet_method method, int semester, const prefnet_train_options* options,
    unsigned top_k, char** out_weights_csv, char** out_ranks_csv, char** out_comparison_json);

/* ---- survival ---------------------------------------------------------- */

PREFNET_API prefnet_status prefnet_survival(const prefnet_series* series,
                                            prefnet_network network, double threshold,
                                            char** out_csv, char** out_json);
/* Parses "a:b:step" into an inclusive grid; release with prefnet_doubles_free. */
PREFNET_API prefnet_status prefnet_parse_grid(const char* text, double** out_values, size_t* out_count);
PREFNET_API void prefnet_doubles_free(double* values);
PREFNET_API prefnet_status prefnet_survival_sweep(const prefnet_series* series,
                                                  prefnet_network network, const double* grid,
                                                  size_t count, char** out_csv);

/* ---- run manifests ----------------------------------------------------- */

/* Records one subcommand run in <out_dir>/manifest.json, replacing any
 * previous entry for the same subcommand. Input files are digested with
 * SHA-256; options_json is hashed as given. */
PREFNET_API prefnet_status prefnet_manifest_record(const char* out_dir, const char* subcommand,
                                                   const char* options_json, uint64_t seed,
                                                   const char* const* inputs, size_t input_count,
                                                   const char* const* outputs,
                                                   size_t output_count);

PREFNET_API prefnet_status prefnet_sha256_file(const char* path, char** out_hex);

#ifdef __cplusplus
}
#endif

#endif /* PREFNET_H */
