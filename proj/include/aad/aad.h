/*
 * C interface to the unsupervised attention-decoding library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns an aad_status; on failure a human-readable
 * message for the calling thread is available from aad_last_error().
 */
#ifndef AAD_AAD_H
#define AAD_AAD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define AAD_API __declspec(dllexport)
#else
#  define AAD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aad_status {
    AAD_OK = 0,
    AAD_ERR_INVALID_ARGUMENT = 1,
    AAD_ERR_DIMENSION_MISMATCH = 2,
    AAD_ERR_NOT_POSITIVE_DEFINITE = 3,
    AAD_ERR_SEGMENT_TOO_SHORT = 4,
    AAD_ERR_MALFORMED_FILE = 5,
    AAD_ERR_IO = 6,
    AAD_ERR_INVALID_PROBABILITY = 7,
    AAD_ERR_INVALID_CONFIG = 8,
    AAD_ERR_PLAN_INFEASIBLE = 9,
    AAD_ERR_INTERNAL = 10
} aad_status;

typedef struct aad_config aad_config;
typedef struct aad_dataset aad_dataset;
typedef struct aad_report aad_report;

typedef struct aad_dataset_info {
    size_t n_segments;
    size_t segment_len;
    size_t eeg_channels;
    size_t audio_features;
    int has_truth;
} aad_dataset_info;

typedef struct aad_train_summary {
    double transductive_accuracy; /* NaN without ground truth */
    int iterations_run;
    int converged;
    int solver_calls;
    double wall_time_seconds;
    double cpu_time_seconds;
} aad_train_summary;

AAD_API const char* aad_status_string(aad_status status);
AAD_API const char* aad_last_error(void);

/* Flat key/value settings; see README for the recognized keys. */
AAD_API aad_status aad_config_create(aad_config** out);
AAD_API void aad_config_destroy(aad_config* cfg);
AAD_API aad_status aad_config_load_file(aad_config* cfg, const char* path);
AAD_API aad_status aad_config_set(aad_config* cfg, const char* key, const char* value);
/* Copies the value of `key` (NUL-terminated) into buf. Returns
 * AAD_ERR_INVALID_ARGUMENT when the key is unset or buf is too small. */
AAD_API aad_status aad_config_get(const aad_config* cfg, const char* key, char* buf, size_t buf_len);

AAD_API aad_status aad_dataset_synthesize(const aad_config* cfg, aad_dataset** out);
AAD_API aad_status aad_dataset_load(const char* dir, aad_dataset** out);
AAD_API aad_status aad_dataset_save(const aad_dataset* data, const char* dir);
AAD_API aad_status aad_dataset_info_get(const aad_dataset* data, aad_dataset_info* out);
AAD_API void aad_dataset_destroy(aad_dataset* data);

/* Trains cfg's `method` on every segment of `data`. The supervised method
 * requires ground truth. Optionally writes the 1/2 labels predicted for each
 * segment into `labels` (capacity `labels_len`, at least n_segments). */
AAD_API aad_status aad_train(const aad_dataset* data, const aad_config* cfg, aad_train_summary* out,
                             int* labels, size_t labels_len);

/* Runs the fold x training-size x seed grid described by cfg. */
AAD_API aad_status aad_experiment_run(const aad_config* cfg, aad_report** out);
AAD_API size_t aad_report_rows(const aad_report* report);
AAD_API aad_status aad_report_write_csv(const aad_report* report, const char* path);
AAD_API void aad_report_destroy(aad_report* report);

/* Reads an experiment CSV and writes per (method, training_size) means and
 * population standard deviations. */
AAD_API aad_status aad_summarize_csv(const char* in_path, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* AAD_AAD_H */
