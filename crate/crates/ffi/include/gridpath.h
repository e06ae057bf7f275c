/* C interface to the gridpath engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Variant flag: cache g-values on corner points met during diagonal
// recursion.
#define GP_FLAG_DIAGONAL_CACHING 1

// Variant flag: label corner points by scanning backwards from found jump
// points.
#define GP_FLAG_BACKWARDS_SCANNING 2

// Variant flag: expand equal-cost re-arrivals with intersected successor
// sets.
#define GP_FLAG_INTERSECTION_PRUNING 4

// Status code returned by every fallible call.
typedef enum GpStatus {
  GP_OK = 0,
  // A required pointer argument was null.
  GP_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  GP_INVALID_UTF8 = 2,
  // A numeric argument was out of range.
  GP_INVALID_ARGUMENT = 3,
  // Map or scenario text failed to parse.
  GP_PARSE_ERROR = 4,
  // File could not be read or written.
  GP_IO_ERROR = 5,
  // A search endpoint was not traversable.
  GP_SEARCH_ERROR = 6,
  // An index was out of range.
  GP_OUT_OF_RANGE = 7,
  // The engine panicked; state may be inconsistent.
  GP_INTERNAL_ERROR = 8,
} GpStatus;

// Search algorithm selector.
typedef enum GpAlgorithm {
  GP_ASTAR = 0,
  GP_JPS = 1,
  GP_CJPS = 2,
} GpAlgorithm;

// Opaque traversability map handle.
typedef struct GpMap GpMap;

// Opaque handle to one solved query: the path plus its metrics.
typedef struct GpPath GpPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses MovingAI `.map` text into a new map handle.
//
// # Safety
// `text` must point to a NUL-terminated string; `out` must be a valid
// pointer. On success `*out` owns the map and must be released with
// [`gp_map_free`].
enum GpStatus gp_map_parse(const char *text, struct GpMap **out);

// Loads a MovingAI `.map` file.
//
// # Safety
// As [`gp_map_parse`]; `path` must be a NUL-terminated file path.
enum GpStatus gp_map_load_file(const char *path, struct GpMap **out);

// Generates a pathological synthetic map: an anti-diagonal wall covering
// fraction `blockage` of the diagonal plus `density` random obstacles,
// deterministic per seed.
//
// # Safety
// `out` must be a valid pointer.
enum GpStatus gp_map_synthetic(int32_t side,
                               double blockage,
                               double density,
                               uint64_t seed,
                               struct GpMap **out);

// Generates a perfect maze with corridors of width 1. `side` must be odd
// and at least 5.
//
// # Safety
// `out` must be a valid pointer.
enum GpStatus gp_map_maze(int32_t side, uint64_t seed, struct GpMap **out);

// Deep copy of a map handle.
//
// # Safety
// `map` must be a live handle from this interface; `out` as elsewhere.
enum GpStatus gp_map_clone(const struct GpMap *map, struct GpMap **out);

// Map width in cells; 0 for a null handle.
//
// # Safety
// `map` must be null or a live handle.
int32_t gp_map_width(const struct GpMap *map);

// Map height in cells; 0 for a null handle.
//
// # Safety
// `map` must be null or a live handle.
int32_t gp_map_height(const struct GpMap *map);

// True iff the cell is in bounds and traversable.
//
// # Safety
// `map` must be null or a live handle.
bool gp_map_is_traversable(const struct GpMap *map, int32_t x, int32_t y);

// Blocks a cell. Blocking an already-blocked cell is a no-op.
//
// # Safety
// `map` must be a live handle with no concurrent readers.
enum GpStatus gp_map_set_obstacle(struct GpMap *map, int32_t x, int32_t y);

// Reverts a cell to traversable.
//
// # Safety
// `map` must be a live handle with no concurrent readers.
enum GpStatus gp_map_unset_obstacle(struct GpMap *map, int32_t x, int32_t y);

// Renders the map as MovingAI `.map` text. Free the returned string with
// [`gp_string_free`]; returns null on a null handle.
//
// # Safety
// `map` must be null or a live handle.
char *gp_map_to_text(const struct GpMap *map);

// Releases a map handle. Null is ignored.
//
// # Safety
// `map` must be null or an unreleased handle from this interface.
void gp_map_free(struct GpMap *map);

// Releases a string returned by this interface. Null is ignored.
//
// # Safety
// `s` must be null or an unreleased string from this interface.
void gp_string_free(char *s);

// Solves one query on the map and returns a path handle. `flags` is a
// bitwise OR of the `GP_FLAG_*` constants. The map is borrowed exclusively
// for the duration of the call (constrained scans place and remove
// temporary obstacles) and is bit-identical afterwards.
//
// # Safety
// `map` must be a live handle with no concurrent use; `out` must be valid.
// On success `*out` must be released with [`gp_path_free`].
enum GpStatus gp_find_path(struct GpMap *map,
                           enum GpAlgorithm algorithm,
                           uint32_t flags,
                           int32_t start_x,
                           int32_t start_y,
                           int32_t target_x,
                           int32_t target_y,
                           struct GpPath **out);

// True iff the query was solved.
//
// # Safety
// `path` must be null or a live handle.
bool gp_path_found(const struct GpPath *path);

// Path length as a double (infinity when not found or on a null handle).
//
// # Safety
// `path` must be null or a live handle.
double gp_path_length(const struct GpPath *path);

// Exact path length as step counts: `cardinals` unit moves plus
// `diagonals` sqrt(2) moves.
//
// # Safety
// `path` must be a live handle; the out-pointers must be valid.
enum GpStatus gp_path_cost(const struct GpPath *path, uint32_t *cardinals, uint32_t *diagonals);

// Number of cells on the full interpolated path (0 when not found).
//
// # Safety
// `path` must be null or a live handle.
size_t gp_path_cell_count(const struct GpPath *path);

// Fetches one cell of the full path by index.
//
// # Safety
// `path` must be a live handle; the out-pointers must be valid.
enum GpStatus gp_path_cell(const struct GpPath *path, size_t index, int32_t *x, int32_t *y);

// Number of jump points on the path (every node the search queued).
//
// # Safety
// `path` must be null or a live handle.
size_t gp_path_jump_point_count(const struct GpPath *path);

// Fetches one jump point by index.
//
// # Safety
// As [`gp_path_cell`].
enum GpStatus gp_path_jump_point(const struct GpPath *path, size_t index, int32_t *x, int32_t *y);

// Node expansions performed by the query.
//
// # Safety
// `path` must be null or a live handle.
uint64_t gp_path_expansions(const struct GpPath *path);

// Open-list insertions performed by the query.
//
// # Safety
// `path` must be null or a live handle.
uint64_t gp_path_insertions(const struct GpPath *path);

// Cells traversed by scans and diagonal recursion.
//
// # Safety
// `path` must be null or a live handle.
uint64_t gp_path_scan_steps(const struct GpPath *path);

// Wall-clock time of the query in nanoseconds.
//
// # Safety
// `path` must be null or a live handle.
uint64_t gp_path_time_ns(const struct GpPath *path);

// Releases a path handle. Null is ignored.
//
// # Safety
// `path` must be null or an unreleased handle from this interface.
void gp_path_free(struct GpPath *path);

// Library version as a static string; do not free.
const char *gp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
