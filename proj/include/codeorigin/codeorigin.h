/* C interface to the codeorigin detector library.
 *
 * Objects are opaque handles created by *_load / *_new / *_train functions and
 * released with the matching *_free. Every fallible call returns a co_status;
 * on failure, co_last_error() describes the problem for the calling thread.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with co_string_free.
 */
#ifndef CODEORIGIN_H
#define CODEORIGIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(CODEORIGIN_BUILDING_LIBRARY)
#define CO_API __attribute__((visibility("default")))
#else
#define CO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum co_status {
    CO_OK = 0,
    CO_ERR_TRAINING = 1, /* fitting failed (e.g. diverging loss) */
    CO_ERR_INPUT = 2,    /* bad file, record, option or argument */
    CO_ERR_INTERNAL = 3  /* unexpected failure */
} co_status;

typedef struct co_dataset co_dataset;
typedef struct co_embeddings co_embeddings;
typedef struct co_train_options co_train_options;
typedef struct co_model co_model;

CO_API const char* co_version(void);
CO_API const char* co_last_error(void);
CO_API void co_string_free(char* text);

/* ---- corpus ---------------------------------------------------------- */

/* require_label = 0 accepts records without a label (scoring input). */
CO_API co_status co_dataset_load(const char* path, int require_label, co_dataset** out);
CO_API void co_dataset_free(co_dataset* dataset);
CO_API size_t co_dataset_size(const co_dataset* dataset);
CO_API const char* co_dataset_id(const co_dataset* dataset, size_t index);
CO_API void co_dataset_class_balance(const co_dataset* dataset, size_t* human, size_t* machine);

/* Stratified split rendered as a manifest JSON document. */
CO_API co_status co_split_manifest(const co_dataset* dataset, double val_ratio, uint64_t seed, char** manifest_json);

/* which: 0 = train part, 1 = validation part of a manifest. */
CO_API co_status co_dataset_from_manifest(const co_dataset* dataset, const char* manifest_json, int which,
                                          co_dataset** out);

/* ---- stylometry ------------------------------------------------------ */

CO_API size_t co_feature_count(void);
CO_API const char* co_feature_name(size_t index);
CO_API const char* co_feature_schema_version(void);
CO_API co_status co_feature_schema_json(char** json);

/* language may be NULL. out must hold co_feature_count() doubles. */
CO_API co_status co_extract_features(const char* code, size_t length, const char* language, double* out,
                                     size_t out_length);
CO_API co_status co_featurize_csv(const co_dataset* dataset, char** csv);

/* ---- embeddings ------------------------------------------------------ */

CO_API co_status co_embeddings_load(const char* path, co_embeddings** out);
CO_API void co_embeddings_free(co_embeddings* embeddings);
CO_API size_t co_embeddings_count(const co_embeddings* embeddings);
CO_API size_t co_embeddings_dim(const co_embeddings* embeddings);
/* Rows whose stored L2 norm was off from 1 by more than 1e-4. */
CO_API size_t co_embeddings_renormalized(const co_embeddings* embeddings);

/* ---- training -------------------------------------------------------- */

CO_API co_train_options* co_train_options_new(void);
CO_API void co_train_options_free(co_train_options* options);
/* Keys: representation (features|embeddings), model (lr|rf|et|hgb), seed,
 * or a hyperparameter name of the chosen model. */
CO_API co_status co_train_options_set(co_train_options* options, const char* key, const char* value);

/* embeddings may be NULL for the features representation. */
CO_API co_status co_model_train(const co_dataset* train, const co_dataset* validation, const co_embeddings* embeddings,
                                const co_train_options* options, co_model** out, char** validation_report_json);

CO_API co_status co_model_save(const co_model* model, const char* path);
CO_API co_status co_model_load(const char* path, co_model** out);
CO_API void co_model_free(co_model* model);
CO_API const char* co_model_id(const co_model* model);
CO_API double co_model_threshold(const co_model* model);
CO_API const char* co_model_representation(const co_model* model);

/* ---- scoring and evaluation ----------------------------------------- */

/* probabilities and verdicts (1 = machine) must hold co_dataset_size() items;
 * verdicts may be NULL. has_threshold = 0 uses the model's threshold. */
CO_API co_status co_model_predict(const co_model* model, const co_dataset* dataset, const co_embeddings* embeddings,
                                  int has_threshold, double threshold, double* probabilities, int* verdicts,
                                  size_t length);

CO_API co_status co_model_evaluate(const co_model* model, const co_dataset* dataset, const co_embeddings* embeddings,
                                   const char* dataset_name, int has_threshold, double threshold, char** report_json);

/* Re-renders a report JSON document as CSV (header + one row). */
CO_API co_status co_report_to_csv(const char* report_json, char** csv);

/* Forest models only. out must hold the model's input width. */
CO_API co_status co_model_importance(const co_model* model, double* out, size_t length);
CO_API co_status co_model_importance_chart(const co_model* model, char** csv, char** svg);

/* Ranks report JSON documents by (PR-AUC, ROC-AUC, id); summary is JSON. */
CO_API co_status co_select_model(const char* const* report_jsons, size_t count, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* CODEORIGIN_H */
