#ifndef MAJORITY_DIFFUSION_H
#define MAJORITY_DIFFUSION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum MdStatus {
  MD_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MD_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed or inconsistent input: bad JSON, self-loops, size mismatches.
   */
  MD_STATUS_INVALID = 2,
  /**
   * The request exceeds a configured cap.
   */
  MD_STATUS_REFUSED = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  MD_STATUS_UTF8 = 5,
  /**
   * The library panicked. This is a bug.
   */
  MD_STATUS_PANIC = 6,
} MdStatus;

typedef enum MdOutcome {
  MD_OUTCOME_CONVERGED = 0,
  MD_OUTCOME_CYCLE = 1,
  MD_OUTCOME_UNDETERMINED = 2,
} MdOutcome;

/**
 * Opaque network handle.
 */
typedef struct MdNetwork MdNetwork;

/**
 * Result of `md_run`. Fields that do not apply to `outcome` are zero.
 */
typedef struct MdRunResult {
  enum MdOutcome outcome;
  /**
   * Updates until the fixed point was first reached.
   */
  uint64_t steps;
  uint64_t preperiod;
  uint64_t period;
  /**
   * Updates actually computed.
   */
  uint64_t updates;
} MdRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *md_version(void);

/**
 * Message for the most recent failure on this thread. Valid until the next
 * failing call on the same thread. Empty if nothing has failed.
 */
const char *md_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void md_string_free(char *s);

/**
 * Builds a network of `n` agents from `edge_count` (influencer, influenced)
 * pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` values; `out` must be writable.
 */
enum MdStatus md_network_new(size_t n,
                             const size_t *edges,
                             size_t edge_count,
                             struct MdNetwork **out);

/**
 * Parses a network from its JSON form `{"n": .., "edges": [[u, v], ..]}`.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum MdStatus md_network_from_json(const char *json, struct MdNetwork **out);

/**
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum MdStatus md_network_to_json(const struct MdNetwork *net, char **out);

/**
 * Releases a network. Null is ignored.
 *
 * # Safety
 * `net` must come from this library and not have been freed.
 */
void md_network_free(struct MdNetwork *net);

/**
 * Number of agents, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t md_network_node_count(const struct MdNetwork *net);

/**
 * Number of influence edges, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t md_network_edge_count(const struct MdNetwork *net);

/**
 * One synchronous update of `labelling` into `out`. Both arrays hold `len`
 * opinions and may alias.
 *
 * # Safety
 * `labelling` and `out` must each point to `len` bytes.
 */
enum MdStatus md_update(const struct MdNetwork *net,
                        const uint8_t *labelling,
                        size_t len,
                        uint8_t *out);

/**
 * Runs the dynamics from `labelling` for at most `max_steps` updates
 * (0 means no limit). If `final_out` is not null it receives the limit on
 * convergence, or the first state of the cycle.
 *
 * # Safety
 * `labelling` must point to `len` bytes, `final_out` to `len` writable bytes
 * or null, and `result` must be writable.
 */
enum MdStatus md_run(const struct MdNetwork *net,
                     const uint8_t *labelling,
                     size_t len,
                     uint64_t max_steps,
                     struct MdRunResult *result,
                     uint8_t *final_out);

/**
 * Exhaustively searches for a labelling that never converges. Sets `found`
 * to 1 and fills `witness_out` (if not null) when one exists. `jobs` of 0
 * uses the default thread pool; a network larger than `max_n` is refused.
 *
 * # Safety
 * `found` must be writable; `witness_out` must be null or hold one byte per agent.
 */
enum MdStatus md_guarantee_search(const struct MdNetwork *net,
                                  size_t max_n,
                                  size_t jobs,
                                  bool deterministic,
                                  uint8_t *found,
                                  uint8_t *witness_out);

/**
 * Structural report and convergence prediction as JSON
 * `{"structure": .., "prediction": ..}`.
 *
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum MdStatus md_analyze_json(const struct MdNetwork *net, char **out);

/**
 * Compiles a circuit given as JSON into a network. If `map_out` is not null
 * it receives the JSON map of base, input and output pairs.
 *
 * # Safety
 * `circuit_json` must be NUL-terminated; `out` must be writable.
 */
enum MdStatus md_compile_circuit(const char *circuit_json, struct MdNetwork **out, char **map_out);

/**
 * Builds the main network of a machine given as JSON, with an alarm of
 * `2k` agents. `start` is a configuration `STATE@HEAD:TAPE`, or null for the
 * initial one. `labelling_out` receives the initial labelling as a string of
 * 0s and 1s; `manifest_out`, if not null, the manifest as JSON.
 *
 * # Safety
 * String arguments must be NUL-terminated or null where allowed; `out` and
 * `labelling_out` must be writable.
 */
enum MdStatus md_reduce_machine(const char *machine_json,
                                size_t k,
                                const char *start,
                                struct MdNetwork **out,
                                char **labelling_out,
                                char **manifest_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAJORITY_DIFFUSION_H */
