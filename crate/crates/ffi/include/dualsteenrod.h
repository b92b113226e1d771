#ifndef DUALSTEENROD_H
#define DUALSTEENROD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_NULL_POINTER = 1,
  DS_STATUS_INVALID_ARGUMENT = 2,
  DS_STATUS_RESOURCE = 3,
  DS_STATUS_INTERNAL = 4,
  DS_STATUS_PANIC = 5,
} DsStatus;

// A finite quotient `A<k>* / (zeta_{m+1}, ..., zeta_{m+k})`.
typedef struct DsQuotient DsQuotient;

// The pages of one spectral sequence run.
typedef struct DsRun DsRun;

// Message for the last failed call on this thread, or NULL. Owned by the
// library; valid until the next call on this thread.
const char *ds_last_error(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ds_string_free(char *s);

// `zeta_n` as polynomial JSON. `truncate = 0` works in `F2[xi1..xin]`,
// otherwise in `A<truncate>*`.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_zeta_json(uint32_t n, uint32_t truncate, char **out);

// Builds and verifies the quotient for `(k, m)` under default limits.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_quotient_new(uint32_t k, uint32_t m, struct DsQuotient **out);

// # Safety
// `q` must come from [`ds_quotient_new`] and not have been freed. NULL is ignored.
void ds_quotient_free(struct DsQuotient *q);

// # Safety
// `q` and `out` must be valid pointers.
enum DsStatus ds_quotient_total_dim(const struct DsQuotient *q, uint64_t *out);

// # Safety
// `q` and `out` must be valid pointers.
enum DsStatus ds_quotient_top_degree(const struct DsQuotient *q, int64_t *out);

// Dimension in one internal degree.
//
// # Safety
// `q` and `out` must be valid pointers.
enum DsStatus ds_quotient_dim(const struct DsQuotient *q, int64_t degree, uint64_t *out);

// Normal form of a polynomial written like `xi1^3 xi2 + xi2^2`, as polynomial JSON.
//
// # Safety
// `q` and `out` must be valid pointers; `poly` must be a NUL-terminated string.
enum DsStatus ds_quotient_normal_form_json(const struct DsQuotient *q,
                                           const char *poly,
                                           char **out);

// Frobenius pairing report as JSON.
//
// # Safety
// `q` and `out` must be valid pointers.
enum DsStatus ds_quotient_frobenius_json(const struct DsQuotient *q, char **out);

// Runs the spectral sequence for `(k, m, n)`. `end_j < 0` runs the bare
// quotient; otherwise the run is smashed with `End(M_{<=end_j})` (and `n`
// is ignored). `stem_bound <= 0` selects the default bound.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_run_new(uint32_t k,
                         uint32_t m,
                         uint32_t n,
                         int32_t end_j,
                         int64_t stem_bound,
                         struct DsRun **out);

// # Safety
// `run` must come from [`ds_run_new`] and not have been freed. NULL is ignored.
void ds_run_free(struct DsRun *run);

// Number of recorded pages (each page carrying a differential, then the last page).
//
// # Safety
// `run` and `out` must be valid pointers.
enum DsStatus ds_run_page_count(const struct DsRun *run, size_t *out);

// Page `index` as JSON `{r, stem_bound, trusted_max_stem, entries, differentials}`.
//
// # Safety
// `run` and `out` must be valid pointers.
enum DsStatus ds_run_page_json(const struct DsRun *run, size_t index, char **out);

// Runs acceptance check `id` (1 to 12); `passed` receives the outcome and
// `detail` (if not NULL) a description to be freed with [`ds_string_free`].
//
// # Safety
// `passed` must be valid; `detail` may be NULL.
enum DsStatus ds_verify(uint32_t id, bool *passed, char **detail);

#endif  /* DUALSTEENROD_H */
