#ifndef SCREENFRONT_H
#define SCREENFRONT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SF_API __declspec(dllexport)
#else
#define SF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum sf_status {
    SF_OK = 0,
    SF_INPUT_ERROR = 1,
    SF_INFEASIBLE = 2,
    SF_BUDGET_EXCEEDED = 3,
    SF_NO_CERTIFICATE = 4,
    SF_CHECK_FAILED = 5,
    SF_INTERNAL_ERROR = 6
} sf_status;

typedef struct sf_problem sf_problem;

SF_API const char* sf_version(void);
SF_API const char* sf_status_name(sf_status status);

/* Message for the most recent failing call on this thread; empty after success. */
SF_API const char* sf_last_error(void);
/* Byte offset of the last JSON parse error, or -1. */
SF_API long sf_last_error_byte(void);

/* Every char** output is allocated by the library and must be released with sf_string_free. */
SF_API void sf_string_free(char* s);

SF_API sf_status sf_problem_from_json(const char* text, sf_problem** out);
SF_API sf_status sf_problem_load(const char* path, sf_problem** out);
SF_API void sf_problem_free(sf_problem* problem);
SF_API size_t sf_problem_num_types(const sf_problem* problem);
SF_API size_t sf_problem_num_allocations(const sf_problem* problem);

/* {"ok": bool, "violations": [...]}; SF_INPUT_ERROR when any invariant fails. */
SF_API sf_status sf_validate(const sf_problem* problem, char** out_json);

/* options: {"strong": bool, "generalized": bool, "order": [ids]}. NULL means {}. */
SF_API sf_status sf_frontier(const sf_problem* problem, const char* options_json, char** out_json);

/* options: {"space": "det"|"stoch", "ic": "full"|"down", "menu": [ids], "assignment": [ids],
   "exact": bool, "budget": n}. */
SF_API sf_status sf_solve(const sf_problem* problem, const char* options_json, char** out_json);

/* options: {"exact": bool, "budget": n}. Also checks the "expected" block when present. */
SF_API sf_status sf_verify(const sf_problem* problem, const char* options_json, char** out_json);

/* mechanism_json: a deterministic mechanism or a solve result holding one. */
SF_API sf_status sf_reconstruct(const sf_problem* problem, const char* mechanism_json, char** out_json);

/* Emits the problem JSON plus "expected" and "provenance" blocks. */
SF_API sf_status sf_generate(const char* app, const char* params_json, char** out_json);

/* Wraps results in the versioned report envelope. */
SF_API sf_status sf_make_report(const char* command_json, const char* input, size_t input_len,
                                const char* results_json, double timing_ms, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
