/* C interface to the image-based disturbance observer simulator. */
#ifndef IDOB_IDOB_H
#define IDOB_IDOB_H

#include <stddef.h>

#if defined(_WIN32)
#define IDOB_API __declspec(dllexport)
#elif defined(__GNUC__)
#define IDOB_API __attribute__((visibility("default")))
#else
#define IDOB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum idob_status {
    IDOB_OK = 0,
    IDOB_E_INVALID_INPUT = 1,
    IDOB_E_INTEGRATION_BLOWUP = 2,
    IDOB_E_INFEASIBLE_THRUST = 3,
    IDOB_E_DEGENERATE_DENOMINATOR = 4,
    IDOB_E_INVALID_CUTOFF = 5,
    IDOB_E_ESTIMATOR_FAULT = 6,
    IDOB_E_DIMENSION_MISMATCH = 7,
    IDOB_E_NUMERICAL_FAILURE = 8,
    IDOB_E_PRECONDITION = 9,
    IDOB_E_SYNTHESIS_FAILURE = 10,
    IDOB_E_INSTABILITY = 11,
    IDOB_E_SHAPE_MISMATCH = 12,
    IDOB_E_TRAINING_FAILURE = 13,
    IDOB_E_IO = 14,
    IDOB_E_CONFIG = 15,
    IDOB_E_INTERNAL = 99
} idob_status;

typedef enum idob_case { IDOB_CASE_NODOB = 0, IDOB_CASE_CDOB = 1, IDOB_CASE_IDOB = 2 } idob_case;

typedef struct idob_config idob_config;
typedef struct idob_result idob_result;

typedef struct idob_metrics {
    double ez_norm;
    double max_z_dev;
    int crashed;
    int diverged;
    long last_valid_step;
    size_t samples;
} idob_metrics;

/* Message for the last failing call on this thread; never NULL. */
IDOB_API const char* idob_last_error(void);
IDOB_API const char* idob_status_name(idob_status s);

IDOB_API idob_status idob_config_create(idob_config** out);
IDOB_API idob_status idob_config_load(const char* path, idob_config** out);
IDOB_API idob_status idob_config_save(const idob_config* cfg, const char* path);
IDOB_API idob_status idob_config_set(idob_config* cfg, const char* key, const char* value);
/* Writes a NUL-terminated value; fails with INVALID_INPUT if cap is too small. */
IDOB_API idob_status idob_config_get(const idob_config* cfg, const char* key, char* buf, size_t cap);
IDOB_API void idob_config_free(idob_config* cfg);

/* Training and synthesis write plain-text model files. Any out pointer may be NULL. */
IDOB_API idob_status idob_train_cnn(const idob_config* cfg, const char* out_path,
                                    double* train_acc, double* val_acc, double* test_acc);
IDOB_API idob_status idob_train_lstm(const idob_config* cfg, const char* out_path,
                                     double* rmse_initial, double* rmse_final);
IDOB_API idob_status idob_synthesize_l(const idob_config* cfg, const char* out_path, double* rho,
                                       double* gamma, double* energy_ratio);

/* model_dir holds cnn.txt, lstm.txt and L.txt; missing files are built and
 * saved first. It is ignored for cases other than IDOB_CASE_IDOB. */
IDOB_API idob_status idob_simulate(const idob_config* cfg, idob_case which, int weight_class,
                                   const char* model_dir, idob_result** out);
IDOB_API idob_status idob_result_metrics(const idob_result* res, idob_metrics* out);
IDOB_API idob_status idob_result_export_csv(const idob_result* res, const char* path);
/* Writes <case>.csv and metrics.txt into dir. */
IDOB_API idob_status idob_result_write(const idob_result* res, const char* dir);
IDOB_API void idob_result_free(idob_result* res);

/* Runs all three cases and writes CSVs, comparison.txt and plot.gp into out_dir. */
IDOB_API idob_status idob_compare(const idob_config* cfg, int weight_class, const char* model_dir,
                                  const char* out_dir);
/* Recomputes metrics from the CSVs in dir and rewrites metrics.txt and plot.gp.
 * The metrics text is copied into buf when it is non-NULL. */
IDOB_API idob_status idob_report(const char* dir, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif
