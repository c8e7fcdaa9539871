#ifndef MPP_H
#define MPP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MppStatus {
  MPP_STATUS_OK = 0,
  /**
   * Malformed or invalid input.
   */
  MPP_STATUS_INPUT = 1,
  /**
   * A valid input outside the domain of the operation.
   */
  MPP_STATUS_PRECONDITION = 2,
  MPP_STATUS_NULL_POINTER = 3,
  MPP_STATUS_UTF8 = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  MPP_STATUS_PANIC = 5,
} MppStatus;

/**
 * Opaque handle to a loaded workspace.
 */
typedef struct MppWorkspace MppWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a workspace document. When it has no inventory the built-in
 * three-label inventory is used. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MppStatus mpp_workspace_from_json(const char *json, struct MppWorkspace **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `ws` must come from [`mpp_workspace_from_json`] and not be freed twice.
 */
void mpp_workspace_free(struct MppWorkspace *ws);

/**
 * Emits the workspace back as JSON.
 *
 * # Safety
 * `ws` must be a live handle and `out` a valid pointer.
 */
enum MppStatus mpp_workspace_to_json(const struct MppWorkspace *ws, char **out);

/**
 * Non-vanishing verdict for the workspace XMS.
 *
 * # Safety
 * `ws` must be a live handle and `out` a valid pointer.
 */
enum MppStatus mpp_nonvanishing(const struct MppWorkspace *ws, bool *out);

/**
 * Cuspidality of the workspace parameter and character, read as a
 * discrete L-parameter.
 *
 * # Safety
 * `ws` must be a live handle and `out` a valid pointer.
 */
enum MppStatus mpp_is_cuspidal(const struct MppWorkspace *ws, bool *out);

/**
 * Exchanges positions k−1 and k of the row of `rho`. `*out` receives the
 * workspace with the exchanged XMS.
 *
 * # Safety
 * `ws` must be a live handle, `rho` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum MppStatus mpp_row_exchange(const struct MppWorkspace *ws,
                                const char *rho,
                                size_t k,
                                char **out);

/**
 * Enumerates the packet of the workspace parameter, restricted to the
 * workspace character when there is one. `*out` receives the workspace with
 * the members under `result.packets`.
 *
 * # Safety
 * `ws` must be a live handle and `out` a valid pointer.
 */
enum MppStatus mpp_packet(const struct MppWorkspace *ws, char **out);

/**
 * The Adams shift of the workspace XMS at `alpha`, using the inventory's
 * root numbers. `*out` receives the workspace with the shifted XMS and
 * `*central_sign` the sign of the added block.
 *
 * # Safety
 * `ws` must be a live handle; `out` and `central_sign` valid pointers.
 */
enum MppStatus mpp_adams(const struct MppWorkspace *ws,
                         int64_t alpha,
                         char **out,
                         int32_t *central_sign);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mpp_string_free(char *s);

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *mpp_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MPP_H */
