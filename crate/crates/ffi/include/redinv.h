#ifndef REDINV_H
#define REDINV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a call. Values match the command-line exit codes where both
// exist.
typedef enum RedinvStatus {
  REDINV_STATUS_OK = 0,
  // The computation finished and its verdict is a failure.
  REDINV_STATUS_VERDICT_FAIL = 1,
  // Malformed ring text, ideal expression or argument value.
  REDINV_STATUS_INPUT_ERROR = 2,
  // The input was well-formed but the computation could not finish.
  REDINV_STATUS_COMPUTATION_ERROR = 3,
  REDINV_STATUS_NULL_ARGUMENT = 4,
  REDINV_STATUS_INVALID_UTF8 = 5,
  REDINV_STATUS_PANIC = 6,
} RedinvStatus;

// A parsed ring together with the ideals declared in its file.
typedef struct RedinvRing RedinvRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a ring file. On success `*out` receives a handle to release with
// [`redinv_ring_free`].
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum RedinvStatus redinv_ring_parse(const char *text_ptr, struct RedinvRing **out);

// Releases a ring handle. Null is ignored.
//
// # Safety
// `ring` must come from [`redinv_ring_parse`] and not be used afterwards.
void redinv_ring_free(struct RedinvRing *ring);

// `λ(A/K)` for the ideal expression `ideal`.
//
// # Safety
// Pointers must be valid; `ideal` NUL-terminated.
enum RedinvStatus redinv_length(const struct RedinvRing *handle, const char *ideal, size_t *out);

// `λ(M/N)` for ideal expressions `inner` = N ⊆ `outer` = M.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum RedinvStatus redinv_length_quotient(const struct RedinvRing *handle,
                                         const char *inner,
                                         const char *outer,
                                         size_t *out);

// Minimal number of generators of an m-primary ideal.
//
// # Safety
// Pointers must be valid; `ideal` NUL-terminated.
enum RedinvStatus redinv_mu(const struct RedinvRing *handle, const char *ideal, size_t *out);

// Invariant report of the maximal ideal as JSON.
//
// # Safety
// Pointers must be valid.
enum RedinvStatus redinv_invariants_json(const struct RedinvRing *handle,
                                         uint64_t seed,
                                         char **out);

// Cohen–Macaulay check as JSON. Returns `VerdictFail` when the ring is
// found not Cohen–Macaulay and `ComputationError` when inconclusive; the
// report is written in every case.
//
// # Safety
// Pointers must be valid.
enum RedinvStatus redinv_cm_check_json(const struct RedinvRing *handle, uint64_t seed, char **out);

// Runs an identity check over `samples` sampled reductions and writes the
// report as JSON. `experiment` is one of `serre`, `vv`, `theorem1`,
// `koszul` or `scan` (the `λ(m⁴/Jm³)` scan). `ideal` may be null and is
// only read by `serre` and `vv`, defaulting to `m`. A failed verdict
// returns `VerdictFail` with the report still written.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum RedinvStatus redinv_experiment_json(const struct RedinvRing *handle,
                                         const char *experiment,
                                         const char *ideal,
                                         uint32_t samples,
                                         uint64_t seed,
                                         char **out);

// The fixed two-reduction example over `F_p` (or the rationals for
// characteristic 0) as JSON.
//
// # Safety
// `out` must be valid.
enum RedinvStatus redinv_example_huckaba_json(uint64_t characteristic, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void redinv_string_free(char *s);

// Message of the last error on this thread, or null. Valid until the next
// failing call on the same thread.
const char *redinv_last_error(void);

// Library version as a static string.
const char *redinv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REDINV_H */
