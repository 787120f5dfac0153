#ifndef SECRECY_GAME_H
#define SECRECY_GAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_CONFIG = 2,
  SG_STATUS_CONDITIONS_VIOLATED = 3,
  SG_STATUS_DEGENERATE_GAME = 4,
  SG_STATUS_UNSUPPORTED = 5,
  SG_STATUS_SOLVER_FAILURE = 6,
  SG_STATUS_INVALID_ARGUMENT = 7,
  SG_STATUS_PANIC = 8,
} SgStatus;

/**
 * Opaque channel handle.
 */
typedef struct SgChannel SgChannel;

/**
 * Opaque handle to an equilibrium: value plus both mixed strategies.
 */
typedef struct SgSolution SgSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a channel from channel gains and transmit powers.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SgStatus sg_channel_from_gains(double h_sd,
                                    double h_rd,
                                    double h_se,
                                    double h_re,
                                    double p_s,
                                    double p_r,
                                    struct SgChannel **out);

/**
 * Creates a channel from received powers `g = h^2 P`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SgStatus sg_channel_from_powers(double g_sd,
                                     double g_rd,
                                     double g_se,
                                     double g_re,
                                     struct SgChannel **out);

/**
 * Creates a channel from a JSON document (same format as the CLI).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SgStatus sg_channel_from_json(const char *json, struct SgChannel **out);

/**
 * Releases a channel handle. Null is ignored.
 *
 * # Safety
 * `channel` must come from an `sg_channel_*` constructor and not be used
 * afterwards.
 */
void sg_channel_free(struct SgChannel *channel);

/**
 * Secrecy rate with a silent relay, in bits per channel use.
 *
 * # Safety
 * `channel` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_channel_baseline(const struct SgChannel *channel, double *out);

/**
 * Whether the corner points satisfy all case conditions the solver covers.
 *
 * # Safety
 * `channel` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_channel_conditions_hold(const struct SgChannel *channel, bool *out);

/**
 * Solves the game in closed form.
 *
 * # Safety
 * `channel` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_solve_analytic(const struct SgChannel *channel, struct SgSolution **out);

/**
 * Solves the `(t+1) x (t+1)` grid approximation by linear programming.
 *
 * # Safety
 * `channel` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_solve_discrete(const struct SgChannel *channel, size_t t, struct SgSolution **out);

/**
 * Releases a solution handle. Null is ignored.
 *
 * # Safety
 * `solution` must come from an `sg_solve_*` call and not be used afterwards.
 */
void sg_solution_free(struct SgSolution *solution);

/**
 * Equilibrium secrecy rate.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_solution_value(const struct SgSolution *solution, double *out);

/**
 * Source c.d.f. at `rate`.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_solution_cdf_source(const struct SgSolution *solution, double rate, double *out);

/**
 * Jammer c.d.f. at `rate`.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_solution_cdf_jammer(const struct SgSolution *solution, double rate, double *out);

/**
 * Plays `blocks` independent blocks with both strategies from `seed` and
 * reports the mean secrecy rate and its standard error.
 *
 * # Safety
 * `solution` must be a live handle; `mean` and `std_error` must be writable.
 */
enum SgStatus sg_solution_simulate(const struct SgSolution *solution,
                                   uint64_t blocks,
                                   uint64_t seed,
                                   double *mean,
                                   double *std_error);

/**
 * Description of the last failure on this thread; empty after a success.
 * The pointer stays valid until the next `sg_*` call on the same thread.
 */
const char *sg_last_error(void);

/**
 * Static name of a status code.
 */
const char *sg_status_name(enum SgStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SECRECY_GAME_H */
