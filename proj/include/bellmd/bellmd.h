/*
 * C interface to libbellmd: finite local hidden-variable models with
 * measurement dependence in the CHSH scenario.
 *
 * Conventions
 *   - Every fallible call returns bellmd_status; BELLMD_OK is zero.  The
 *     message of the most recent failure on the calling thread is available
 *     from bellmd_last_error() until the next failing call on that thread.
 *   - Handles are opaque and owned by the caller; release them with the
 *     matching *_destroy function.  Destroy functions accept NULL.
 *   - Context distributions are passed as 4*n doubles, context-major, with
 *     contexts ordered (x,y) = (0,0),(0,1),(1,0),(1,1).
 *   - Strings returned through char** are heap allocated; free them with
 *     bellmd_string_free().
 */
#ifndef BELLMD_BELLMD_H
#define BELLMD_BELLMD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BELLMD_BUILDING)
#    define BELLMD_API __declspec(dllexport)
#  else
#    define BELLMD_API __declspec(dllimport)
#  endif
#else
#  define BELLMD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bellmd_status {
  BELLMD_OK = 0,
  BELLMD_ERR_VALIDATION = 1,
  BELLMD_ERR_DIMENSION = 2,
  BELLMD_ERR_DOMAIN = 3,
  BELLMD_ERR_INFEASIBLE = 4,
  BELLMD_ERR_RESOURCE = 5,
  BELLMD_ERR_INVARIANT = 6,
  BELLMD_ERR_PARSE = 7,
  BELLMD_ERR_IO = 8,
  BELLMD_ERR_NULL_ARGUMENT = 9,
  BELLMD_ERR_INTERNAL = 10
} bellmd_status;

typedef enum bellmd_hiddenness_mode {
  BELLMD_HIDDENNESS_DECLARED = 0,
  BELLMD_HIDDENNESS_EFFECTIVE = 1
} bellmd_hiddenness_mode;

typedef enum bellmd_family {
  BELLMD_FAMILY_H1 = 0,
  BELLMD_FAMILY_H2 = 1,
  BELLMD_FAMILY_H3PLUS = 2
} bellmd_family;

typedef struct bellmd_dist bellmd_dist;
typedef struct bellmd_model bellmd_model;
typedef struct bellmd_record bellmd_record;

typedef struct bellmd_tradeoff_report {
  uint64_t hiddenness;
  double dependence;   /* M */
  double chsh;         /* C of the model's responses */
  double optimal_chsh; /* C_opt */
  double lower_bound;  /* M + 2 */
  double upper_bound;  /* min(min(H,3) M + 2, 4) */
  int chsh_within_optimal;
  int chsh_within_upper;
  int optimal_within_upper;
  int lower_within_optimal;
} bellmd_tradeoff_report;

typedef struct bellmd_lemma_witness {
  uint32_t i; /* context indices 0..3 */
  uint32_t j;
  uint64_t lambda;
  double lhs;
} bellmd_lemma_witness;

typedef struct bellmd_coarse_grain_check {
  double sum_min_original;
  double sum_min_coarse;
  double dependence_original;
  double dependence_coarse;
  bellmd_lemma_witness witness;
  double chained_lhs;
  int sums_agree;
  int dependence_monotone;
  int chained_holds;
} bellmd_coarse_grain_check;

typedef struct bellmd_estimate {
  double correlators[4];
  double chsh;
  double stderr_chsh;
} bellmd_estimate;

typedef struct bellmd_oracle_summary {
  uint64_t instances;
  uint64_t agreements;
  double max_abs_difference;
} bellmd_oracle_summary;

/* ---- library ---------------------------------------------------------- */

BELLMD_API const char* bellmd_version(void);
BELLMD_API const char* bellmd_status_string(bellmd_status status);
BELLMD_API const char* bellmd_last_error(void);
BELLMD_API void bellmd_string_free(char* s);
/* Name of the pseudo-random stream used by bellmd_sample. */
BELLMD_API const char* bellmd_rng_stream(void);

/* ---- context distributions -------------------------------------------- */

BELLMD_API bellmd_status bellmd_dist_create(const double* probs, size_t n, bellmd_dist** out);
/* Same, with an explicit cap on n (0 selects the default of 10^6). */
BELLMD_API bellmd_status bellmd_dist_create_capped(const double* probs, size_t n, size_t max_hidden,
                                                   bellmd_dist** out);
BELLMD_API bellmd_status bellmd_dist_random(size_t n, uint64_t seed, bellmd_dist** out);
BELLMD_API void bellmd_dist_destroy(bellmd_dist* dist);
BELLMD_API size_t bellmd_dist_size(const bellmd_dist* dist);
/* Copies 4*n values into out; len must be at least 4*n. */
BELLMD_API bellmd_status bellmd_dist_values(const bellmd_dist* dist, double* out, size_t len);
BELLMD_API bellmd_status bellmd_dist_to_json(const bellmd_dist* dist, char** out);
BELLMD_API bellmd_status bellmd_dist_pad(const bellmd_dist* dist, size_t n, bellmd_dist** out);
BELLMD_API bellmd_status bellmd_dist_trim(const bellmd_dist* dist, bellmd_dist** out);
BELLMD_API bellmd_status bellmd_dist_interpolate(const bellmd_dist* a, const bellmd_dist* b, double t,
                                                 bellmd_dist** out);

/* ---- models ------------------------------------------------------------ */

/* a_plus and b_plus are 2*n values, setting-major. */
BELLMD_API bellmd_status bellmd_model_create(const bellmd_dist* dist, const double* a_plus,
                                             const double* b_plus, bellmd_model** out);
/* Deterministic responses attaining the optimal CHSH value. */
BELLMD_API bellmd_status bellmd_model_create_optimal(const bellmd_dist* dist, bellmd_model** out);
BELLMD_API bellmd_status bellmd_model_random(size_t n, uint64_t seed, bellmd_model** out);
/* max_hidden = 0 selects the default cap.  responses_given (may be NULL)
 * reports whether the document carried a_plus/b_plus. */
BELLMD_API bellmd_status bellmd_model_parse(const char* text, size_t max_hidden, bellmd_model** out,
                                            int* responses_given);
BELLMD_API bellmd_status bellmd_model_load(const char* path, size_t max_hidden, bellmd_model** out,
                                           int* responses_given);
BELLMD_API bellmd_status bellmd_model_to_json(const bellmd_model* model, char** out);
BELLMD_API bellmd_status bellmd_model_save(const bellmd_model* model, const char* path);
BELLMD_API void bellmd_model_destroy(bellmd_model* model);
BELLMD_API size_t bellmd_model_size(const bellmd_model* model);
/* Copy of the model's distribution; destroy it separately. */
BELLMD_API bellmd_status bellmd_model_dist(const bellmd_model* model, bellmd_dist** out);
BELLMD_API bellmd_status bellmd_model_responses(const bellmd_model* model, double* a_plus, double* b_plus,
                                                size_t len);
/* joint[4*context + pair], pairs ordered (+,+),(+,-),(-,+),(-,-). */
BELLMD_API bellmd_status bellmd_model_joint(const bellmd_model* model, double joint[16]);
BELLMD_API bellmd_status bellmd_model_correlators(const bellmd_model* model, double correlators[4]);
BELLMD_API bellmd_status bellmd_model_chsh(const bellmd_model* model, double* out);

/* ---- behaviors --------------------------------------------------------- */

BELLMD_API bellmd_status bellmd_behavior_correlator(const double joint[16], int x, int y, double* out);
BELLMD_API bellmd_status bellmd_behavior_chsh(const double joint[16], double* out);

/* ---- measures ---------------------------------------------------------- */

BELLMD_API bellmd_status bellmd_total_variation(const double* p, const double* q, size_t n, double* out);
BELLMD_API bellmd_status bellmd_measurement_dependence(const bellmd_dist* dist, double* out);
BELLMD_API bellmd_status bellmd_hiddenness(const bellmd_dist* dist, bellmd_hiddenness_mode mode,
                                           uint64_t* out);

/* ---- bounds ------------------------------------------------------------ */

BELLMD_API bellmd_status bellmd_g_function(const double z[4], double* out);
BELLMD_API bellmd_status bellmd_optimal_chsh(const bellmd_dist* dist, double* out);
/* cap = 0 selects the default of 20 hidden variables. */
BELLMD_API bellmd_status bellmd_brute_force_optimal_chsh(const bellmd_dist* dist, size_t cap, double* out);
BELLMD_API bellmd_status bellmd_upper_bound(uint64_t hiddenness, double dependence, double* out);
BELLMD_API bellmd_status bellmd_lower_bound_copt(double dependence, double* out);
BELLMD_API bellmd_status bellmd_min_dependence_for_chsh(double chsh, uint64_t hiddenness, double* out);
BELLMD_API bellmd_status bellmd_check_tradeoff(const bellmd_model* model, bellmd_hiddenness_mode mode,
                                               bellmd_tradeoff_report* out);
/* out receives n context indices (0..3). */
BELLMD_API bellmd_status bellmd_min_index_per_lambda(const bellmd_dist* dist, uint32_t* out, size_t len);
/* Dispatches on n: 3 uses weight 2, 4 uses weight 3; other sizes are a domain error. */
BELLMD_API bellmd_status bellmd_find_lemma_witness(const bellmd_dist* dist, bellmd_lemma_witness* out);
/* cells (may be NULL) receives, for each lambda, the cell index 0..3 it falls in. */
BELLMD_API bellmd_status bellmd_coarse_grain(const bellmd_dist* dist, bellmd_dist** out, uint32_t* cells,
                                             size_t len);
BELLMD_API bellmd_status bellmd_check_coarse_grain(const bellmd_dist* dist, bellmd_coarse_grain_check* out);
/* Compares optimal and brute-force CHSH on `count` random distributions of size n. */
BELLMD_API bellmd_status bellmd_oracle_random(uint64_t count, size_t n, uint64_t seed, double tolerance,
                                              bellmd_oracle_summary* out);

/* ---- tight models and sweeps ------------------------------------------- */

/* pad_to = 0 keeps the family's own size. */
BELLMD_API bellmd_status bellmd_tight_model(bellmd_family family, double p, size_t pad_to, bellmd_dist** out);
BELLMD_API bellmd_status bellmd_parse_family(const char* name, bellmd_family* out);
BELLMD_API bellmd_status bellmd_family_curve_csv(bellmd_family family, size_t steps, size_t pad_to, char** out);
BELLMD_API bellmd_status bellmd_region_csv(uint64_t hiddenness, size_t steps_m, size_t steps_t, char** out);

/* ---- Monte Carlo -------------------------------------------------------- */

BELLMD_API bellmd_status bellmd_sample(const bellmd_model* model, uint64_t trials_per_context, uint64_t seed,
                                       bellmd_record** out);
BELLMD_API bellmd_status bellmd_record_parse(const char* text, bellmd_record** out);
BELLMD_API void bellmd_record_destroy(bellmd_record* record);
/* counts[4*context + pair]. */
BELLMD_API bellmd_status bellmd_record_counts(const bellmd_record* record, uint64_t counts[16]);
BELLMD_API bellmd_status bellmd_record_estimate(const bellmd_record* record, bellmd_estimate* out);
/* include_estimate != 0 appends the plug-in estimates. */
BELLMD_API bellmd_status bellmd_record_to_json(const bellmd_record* record, int include_estimate, char** out);

/* ---- files ------------------------------------------------------------- */

BELLMD_API bellmd_status bellmd_write_text(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* BELLMD_BELLMD_H */
