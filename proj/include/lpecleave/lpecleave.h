/* Copyright (c) lpecleave contributors.
 * SPDX-License-Identifier: Apache-2.0 */
#ifndef LPECLEAVE_H
#define LPECLEAVE_H

/* C interface of the lpecleave library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Strings returned through `char**` are owned by
 * the caller and released with lpc_string_free. Every function returning
 * lpc_status stores a message retrievable with lpc_last_error on failure. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LPC_API __declspec(dllexport)
#else
#define LPC_API __attribute__((visibility("default")))
#endif

typedef enum lpc_status {
    LPC_OK = 0,
    LPC_ERR_ARGUMENT = 1,
    LPC_ERR_PARSE = 2,
    LPC_ERR_VALIDATION = 3,
    LPC_ERR_LIMIT = 4,
    LPC_ERR_IO = 5,
    LPC_ERR_INTERNAL = 6
} lpc_status;

typedef struct lpc_spec lpc_spec;
typedef struct lpc_lts lpc_lts;
typedef struct lpc_plan lpc_plan;
typedef struct lpc_pipeline_result lpc_pipeline_result;

typedef struct lpc_limits {
    uint64_t nat_bound;
    uint64_t max_states;
    uint64_t max_transitions;
} lpc_limits;

typedef struct lpc_pipeline_options {
    lpc_limits limits;
    /* Invariant expression, or NULL. */
    const char* invariant;
    int invariant_on_update;
    int no_tag;
    int force;
} lpc_pipeline_options;

typedef enum lpc_table_format { LPC_TABLE_TEXT = 0, LPC_TABLE_KV = 1 } lpc_table_format;

/* Message of the last failure on this thread; empty if none. */
LPC_API const char* lpc_last_error(void);
LPC_API void lpc_string_free(char* s);
LPC_API void lpc_limits_default(lpc_limits* limits);
LPC_API void lpc_pipeline_options_default(lpc_pipeline_options* options);

/* Specifications */
LPC_API lpc_status lpc_spec_parse(const char* text, lpc_spec** out);
LPC_API lpc_status lpc_spec_load(const char* path, lpc_spec** out);
LPC_API void lpc_spec_free(lpc_spec* spec);
/* Name of the initial process. */
LPC_API const char* lpc_spec_init_name(const lpc_spec* spec);

/* Transition systems. On LPC_ERR_LIMIT, `*out` holds the partial result. */
LPC_API lpc_status lpc_explore(const lpc_spec* spec, const lpc_limits* limits, lpc_lts** out);
LPC_API lpc_status lpc_compose(const lpc_spec* spec, const char* composition, const lpc_limits* limits, lpc_lts** out);
LPC_API lpc_status lpc_minimise(const lpc_lts* lts, lpc_lts** out);
LPC_API lpc_status lpc_lts_read_aut(const char* path, lpc_lts** out);
LPC_API lpc_status lpc_lts_write_aut(const lpc_lts* lts, const char* path);
LPC_API lpc_status lpc_lts_to_aut(const lpc_lts* lts, char** out);
/* Newline-separated warnings attached during construction. */
LPC_API lpc_status lpc_lts_warnings(const lpc_lts* lts, char** out);
LPC_API size_t lpc_lts_num_states(const lpc_lts* lts);
LPC_API size_t lpc_lts_num_transitions(const lpc_lts* lts);
LPC_API void lpc_lts_free(lpc_lts* lts);

/* Strong bisimilarity of the initial states. On a negative answer `witness`
 * receives the distinguishing labels, one per line. `witness` may be NULL. */
LPC_API lpc_status lpc_compare(const lpc_lts* a, const lpc_lts* b, int* bisimilar, char** witness);

/* Cleaving. `partition_json` is {"V": [names], "W": [names]}. */
LPC_API lpc_status lpc_cleave(const lpc_spec* spec, const char* partition_json, int no_tag, lpc_plan** out);
LPC_API lpc_status lpc_plan_dump(const lpc_plan* plan, char** out);
/* Component in specification syntax; side 0 is V, 1 is W. */
LPC_API lpc_status lpc_plan_component(const lpc_plan* plan, int side, char** out);
LPC_API lpc_status lpc_plan_oracle(const lpc_plan* plan, uint64_t nat_bound, int* passed, char** report);
LPC_API void lpc_plan_free(lpc_plan* plan);

LPC_API lpc_status lpc_check_invariant(const lpc_spec* spec, const char* invariant, uint64_t nat_bound, int* holds,
                                       char** report);

/* Full pipeline on the initial process. */
LPC_API lpc_status lpc_pipeline(const lpc_spec* spec, const char* partition_json, const lpc_pipeline_options* options,
                                lpc_pipeline_result** out);
LPC_API int lpc_pipeline_bisimilar(const lpc_pipeline_result* r);
LPC_API int lpc_pipeline_unverified(const lpc_pipeline_result* r);
LPC_API lpc_status lpc_pipeline_table(const lpc_pipeline_result* r, lpc_table_format format, int resources, char** out);
LPC_API lpc_status lpc_pipeline_witness(const lpc_pipeline_result* r, char** out);
LPC_API lpc_status lpc_pipeline_plan(const lpc_pipeline_result* r, char** out);
LPC_API lpc_status lpc_pipeline_oracle(const lpc_pipeline_result* r, char** out);
LPC_API lpc_status lpc_pipeline_warnings(const lpc_pipeline_result* r, char** out);
/* Writes every explored and minimised system as <dir>/<name>.aut. */
LPC_API lpc_status lpc_pipeline_write_artifacts(const lpc_pipeline_result* r, const char* dir);
LPC_API void lpc_pipeline_result_free(lpc_pipeline_result* r);

#ifdef __cplusplus
}
#endif

#endif
