/*
Copyright 2026 The apkleak Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/* C interface to the apkleak scanner. All strings are UTF-8. Functions
 * return APKLEAK_OK or an error status; apkleak_last_error() then holds a
 * message for the calling thread. */

#ifndef APKLEAK_APKLEAK_H
#define APKLEAK_APKLEAK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(APKLEAK_BUILDING_LIBRARY)
#    define APKLEAK_API __declspec(dllexport)
#  else
#    define APKLEAK_API __declspec(dllimport)
#  endif
#else
#  define APKLEAK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum apkleak_status {
    APKLEAK_OK = 0,
    APKLEAK_E_INVALID_ARGUMENT = 1,
    APKLEAK_E_IO = 2,
    APKLEAK_E_NOT_AN_APP = 3,
    APKLEAK_E_CORRUPT_ARCHIVE = 4,
    APKLEAK_E_BAD_MAGIC = 5,
    APKLEAK_E_TRUNCATED_POOL = 6,
    APKLEAK_E_EMPTY_STRING = 7,
    APKLEAK_E_BAD_CONFIDENCE = 8,
    APKLEAK_E_SAMPLE_TOO_LARGE = 9,
    APKLEAK_E_REDACTION_TOO_WIDE = 10,
    APKLEAK_E_NO_ENDPOINT_TEMPLATE = 11,
    APKLEAK_E_MISSING_TAG_ORDER = 12,
    APKLEAK_E_CONFIG = 13,
    APKLEAK_E_NETWORK = 14,
    APKLEAK_E_BUFFER_TOO_SMALL = 15,
    APKLEAK_E_INTERNAL = 16
} apkleak_status;

typedef struct apkleak_context apkleak_context;
typedef struct apkleak_dex_pool apkleak_dex_pool;

typedef void (*apkleak_log_fn)(void* user_data, const char* message);

APKLEAK_API const char* apkleak_version(void);
APKLEAK_API const char* apkleak_status_string(apkleak_status status);
/* Message for the last failed call on this thread; never NULL. */
APKLEAK_API const char* apkleak_last_error(void);

/* config_path may be NULL for built-in defaults. */
APKLEAK_API apkleak_status apkleak_context_create(const char* config_path, apkleak_context** out);
APKLEAK_API void apkleak_context_destroy(apkleak_context* ctx);
/* Warnings (skipped apps, unreadable entries) go to `fn`. */
APKLEAK_API void apkleak_context_set_log(apkleak_context* ctx, apkleak_log_fn fn, void* user_data);

/* Keys: seed, sample_size, include_numeric_only, confidence, offline,
 * redact, csv, output_dir, tag_order (comma list), dataset_b (comma list),
 * min_shared_apps, max_in_flight, per_service_rate, scan_threads,
 * dictionary, patterns, endpoints. Booleans take "true"/"false". */
APKLEAK_API apkleak_status apkleak_set_option(apkleak_context* ctx, const char* key, const char* value);

/* Inputs are APK files, disassembled app trees, or directories holding
 * either. With no inputs the configured datasets are used. `count`
 * receives the number of records written and may be NULL. */
APKLEAK_API apkleak_status apkleak_scan(apkleak_context* ctx, const char* const* inputs, size_t n_inputs,
                                        const char* tag, const char* out_path, size_t* count);
APKLEAK_API apkleak_status apkleak_rank(apkleak_context* ctx, const char* candidates_path, const char* out_path,
                                        size_t* count);
APKLEAK_API apkleak_status apkleak_sample(apkleak_context* ctx, const char* ranked_path, const char* out_path,
                                          size_t* count, double* margin_of_error);
APKLEAK_API apkleak_status apkleak_detect(apkleak_context* ctx, const char* const* inputs, size_t n_inputs,
                                          const char* tag, const char* out_path, size_t* count);

typedef struct apkleak_validation_summary {
    size_t total;
    size_t valid;
    size_t invalid;
    size_t rate_limited;
    size_t network_error;
    size_t skipped_offline;
    size_t error;
    size_t transport_calls;
    int live;
} apkleak_validation_summary;

/* fixtures_path may be NULL. summary may be NULL. */
APKLEAK_API apkleak_status apkleak_validate(apkleak_context* ctx, const char* detections_path,
                                            const char* fixtures_path, const char* out_path,
                                            apkleak_validation_summary* summary);

/* outcomes_path and candidates_path may be NULL. */
APKLEAK_API apkleak_status apkleak_report(apkleak_context* ctx, const char* const* detection_paths,
                                          size_t n_detection_paths, const char* outcomes_path,
                                          const char* candidates_path, const char* out_dir);

APKLEAK_API apkleak_status apkleak_margin_of_error(uint64_t n, double confidence, double* out);
APKLEAK_API apkleak_status apkleak_diversity_score(const char* value, double* out);
APKLEAK_API apkleak_status apkleak_word_score(apkleak_context* ctx, const char* value, double* out);

/* Writes a NUL-terminated redaction into buf. `needed` receives the size
 * including the terminator; a short buffer yields
 * APKLEAK_E_BUFFER_TOO_SMALL. buf may be NULL when capacity is 0. */
APKLEAK_API apkleak_status apkleak_redact(const char* value, size_t keep_prefix, size_t keep_suffix, char* buf,
                                          size_t capacity, size_t* needed);

APKLEAK_API apkleak_status apkleak_dex_pool_parse(const uint8_t* data, size_t size, apkleak_dex_pool** out);
APKLEAK_API size_t apkleak_dex_pool_size(const apkleak_dex_pool* pool);
APKLEAK_API size_t apkleak_dex_pool_malformed_count(const apkleak_dex_pool* pool);
/* The returned pointer stays valid until the pool is destroyed. */
APKLEAK_API apkleak_status apkleak_dex_pool_entry(const apkleak_dex_pool* pool, size_t index, const char** utf8,
                                                  size_t* length);
APKLEAK_API void apkleak_dex_pool_destroy(apkleak_dex_pool* pool);

#ifdef __cplusplus
}
#endif

#endif /* APKLEAK_APKLEAK_H */
