/* Copyright 2026 The nlhb Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the nlhb library.
 *
 * Every fallible call returns nlhb_status; on failure nlhb_last_error()
 * holds a message for the calling thread until its next call. Strings
 * returned through char** are owned by the caller and released with
 * nlhb_string_free(). Rationals are passed as "num/den" text. In config
 * structs a zero or NULL field selects the documented default.
 */
#ifndef NLHB_NLHB_H
#define NLHB_NLHB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NLHB_API __declspec(dllexport)
#else
#define NLHB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlhb_status {
    NLHB_OK = 0,
    NLHB_ERR_ARGUMENT = 1,
    NLHB_ERR_DIMENSION = 2,
    NLHB_ERR_PARSE = 3,
    NLHB_ERR_RANGE = 4,
    NLHB_ERR_SINGULAR = 5,
    NLHB_ERR_IO = 6,
    NLHB_ERR_NETWORK = 7,
    NLHB_ERR_TIMEOUT = 8,
    NLHB_ERR_PROTOCOL = 9,
    NLHB_ERR_UNKNOWN_IDENTITY = 10,
    NLHB_ERR_MALFORMED_RESPONSE = 11,
    NLHB_ERR_INSUFFICIENT_SAMPLES = 12,
    NLHB_ERR_UNSUPPORTED = 13,
    NLHB_ERR_INTERNAL = 14
} nlhb_status;

NLHB_API const char* nlhb_version(void);
NLHB_API const char* nlhb_status_name(nlhb_status status);
NLHB_API const char* nlhb_last_error(void);
NLHB_API void nlhb_string_free(char* s);

/* ---- nonlinear functions ------------------------------------------- */

typedef struct nlhb_spec nlhb_spec;

/* "p=3; g=x1x2+x2x3+x3x1" */
NLHB_API nlhb_status nlhb_spec_parse(const char* text, nlhb_spec** out);
NLHB_API nlhb_status nlhb_spec_candidate(nlhb_spec** out);
NLHB_API void nlhb_spec_free(nlhb_spec* spec);
NLHB_API unsigned nlhb_spec_window(const nlhb_spec* spec);
NLHB_API nlhb_status nlhb_spec_describe(const nlhb_spec* spec, char** out);
/* bits: '0'/'1' text of length n > p; out: n - p bits */
NLHB_API nlhb_status nlhb_spec_apply(const nlhb_spec* spec, const char* bits, char** out);
/* Exact merge-error entropy; exact_text is "5/2" style when dyadic (may be NULL). */
NLHB_API nlhb_status nlhb_spec_merge_entropy(const nlhb_spec* spec, double* bits, char** exact_text);

typedef struct nlhb_balance {
    int uniform;
    uint64_t expected_count;
    uint64_t min_count;
    uint64_t max_count;
    uint64_t distinct_outputs;
} nlhb_balance;

/* Exhaustive over 2^n inputs, n <= 20. */
NLHB_API nlhb_status nlhb_spec_balance(const nlhb_spec* spec, unsigned n, nlhb_balance* out);

/* TSV of the maximum-entropy functions for window p in {2,3,4}. */
NLHB_API nlhb_status nlhb_analyze_enumerate(unsigned p, int all_maximizers, char** tsv);

/* ---- parameters ---------------------------------------------------- */

NLHB_API nlhb_status nlhb_false_accept(uint64_t D, uint64_t u, double* log2_value);
NLHB_API nlhb_status nlhb_false_reject(uint64_t D, const char* eps, uint64_t u, double* log2_value);
/* u = floor(epsp * D) */
NLHB_API nlhb_status nlhb_threshold(const char* epsp, uint64_t D, uint64_t* u);
/* Canonical reduced "num/den" form of a rational. */
NLHB_API nlhb_status nlhb_rational_normalize(const char* text, char** out);
/* *holds = 1 iff the exact tail is <= 2^exponent. */
NLHB_API nlhb_status nlhb_false_accept_at_most(uint64_t D, uint64_t u, long exponent, int* holds);
NLHB_API nlhb_status nlhb_false_reject_at_most(uint64_t D, const char* eps, uint64_t u, long exponent, int* holds);

typedef struct nlhb_length_result {
    uint64_t D;
    uint64_t u;
    double pfa_log2;
    double pfr_log2;
    uint64_t scanned;
    uint64_t exact_checks;
    uint64_t pfa_increases;
    uint64_t pfr_increases;
} nlhb_length_result;

NLHB_API nlhb_status nlhb_find_min_length(const char* eps, const char* epsp, double pfa_log2, double pfr_log2,
                                          nlhb_length_result* out);

/* ---- cost ---------------------------------------------------------- */

typedef struct nlhb_op_count {
    uint64_t multiplications;
    uint64_t additions;
} nlhb_op_count;

/* proto: "hb", "hb+", "nlhb", "nlhb+"; spec required for the nonlinear
 * variants. breakdown_tsv may be NULL. */
NLHB_API nlhb_status nlhb_count_ops(const char* proto, uint64_t k, uint64_t D, const nlhb_spec* spec,
                                    nlhb_op_count* out, char** breakdown_tsv);
NLHB_API nlhb_status nlhb_cost_table(char** tsv);

/* ---- protocol runs ------------------------------------------------- */

typedef struct nlhb_simulate_config {
    const char* proto;  /* default "nlhb" */
    uint64_t k;         /* default 64 */
    uint64_t n;         /* default 1164 + p */
    uint64_t p;         /* default 3 (ignored for linear variants) */
    const char* eps;    /* default "1/4" */
    const char* epsp;   /* default "87/250" */
    const char* spec;   /* default candidate */
    uint64_t sessions;  /* default 10 */
    uint64_t seed;
    int random_responder;
} nlhb_simulate_config;

/* transcripts (may be NULL) receives the record text. */
NLHB_API nlhb_status nlhb_simulate(const nlhb_simulate_config* config, char** transcripts, uint64_t* sessions,
                                   uint64_t* accepted);
/* Audits and counts transcript records. */
NLHB_API nlhb_status nlhb_transcripts_check(const char* text, uint64_t* count, uint64_t* accepted);
/* One keystore record with a freshly drawn key. */
NLHB_API nlhb_status nlhb_keygen(const nlhb_simulate_config* config, const char* identity, char** record);

/* ---- attacks and reductions ---------------------------------------- */

typedef struct nlhb_report nlhb_report;

typedef struct nlhb_attack_config {
    const char* attack; /* "majority" | "lf2" | "noisefree" */
    const char* proto;  /* "hb" | "nlhb"; default "hb" */
    uint64_t k;         /* default 16 */
    uint64_t n;         /* default 64 + p */
    uint64_t p;         /* default 3 */
    const char* eps;    /* default "1/8" */
    const char* epsp;   /* default "1/4" */
    const char* spec;
    uint64_t b;         /* default 8 */
    uint64_t samples;   /* transcripts; 0 -> per-attack default */
    unsigned reps;      /* majority repetitions; 0 -> 2^-20 rule */
    uint64_t seed;
} nlhb_attack_config;

typedef struct nlhb_reduce_config {
    const char* mode;   /* "embed" | "hybrid" | "thm2" | "thm3" | "thm4" */
    const char* oracle; /* thm2: ideal|random; thm3: perfect|random; thm4: perfect|honest|random */
    uint64_t k;
    uint64_t n;
    uint64_t n_prime;
    uint64_t p;
    const char* eps;
    const char* epsp;
    const char* spec;
    uint64_t trials;
    uint64_t q;
    double delta;       /* default 1 */
    double c;           /* default 4 */
    uint64_t seed;
    int bounded_noise;
} nlhb_reduce_config;

NLHB_API nlhb_status nlhb_attack(const nlhb_attack_config* config, nlhb_report** out);
NLHB_API nlhb_status nlhb_reduce(const nlhb_reduce_config* config, nlhb_report** out);
NLHB_API void nlhb_report_free(nlhb_report* report);
NLHB_API int nlhb_report_success(const nlhb_report* report);
/* Borrowed; valid until the report is freed. */
NLHB_API const char* nlhb_report_summary(const nlhb_report* report);
/* Returns 1 and sets *value if the statistic exists, else 0. */
NLHB_API int nlhb_report_stat(const nlhb_report* report, const char* key, double* value);
NLHB_API nlhb_status nlhb_report_tsv(const nlhb_report* report, char** out);

/* ---- networked service --------------------------------------------- */

typedef struct nlhb_server nlhb_server;

typedef struct nlhb_server_config {
    const char* bind;            /* default "127.0.0.1:0" */
    const char* keystore_path;   /* one of path / text */
    const char* keystore_text;
    uint64_t seed;
    int mute_decisions;
    const char* transcript_log;  /* append-only file; NULL keeps memory only */
    uint32_t io_timeout_ms;      /* default 10000 */
} nlhb_server_config;

NLHB_API nlhb_status nlhb_server_start(const nlhb_server_config* config, nlhb_server** out);
NLHB_API uint16_t nlhb_server_port(const nlhb_server* server);
/* Blocks until nlhb_server_stop is called from another thread. */
NLHB_API nlhb_status nlhb_server_wait(nlhb_server* server);
NLHB_API nlhb_status nlhb_server_stop(nlhb_server* server);
NLHB_API nlhb_status nlhb_server_transcripts(const nlhb_server* server, char** out);
NLHB_API void nlhb_server_free(nlhb_server* server);

typedef struct nlhb_auth_result {
    int accepted;
    int muted;
    uint64_t distance;
} nlhb_auth_result;

/* key_text: one keystore record. timeout_ms 0 -> 10000. */
NLHB_API nlhb_status nlhb_authenticate(const char* server, const char* identity, const char* key_text,
                                       uint64_t seed, uint32_t timeout_ms, nlhb_auth_result* out);

#ifdef __cplusplus
}
#endif

#endif /* NLHB_NLHB_H */
