#ifndef CYLBENCH_H
#define CYLBENCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CYL_OK 0

#define CYL_ERR_NULL 1

#define CYL_ERR_USAGE 2

#define CYL_ERR_STRUCTURAL 3

#define CYL_ERR_RESOURCE 4

#define CYL_ERR_FORMAT 5

#define CYL_ERR_UTF8 6

#define CYL_ERR_PANIC 7

// An atom structure, CA or RA.
typedef struct CylStructure CylStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a structure from its JSON interchange text.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
int32_t cyl_structure_load(const char *json, struct CylStructure **out);

// Enumerate a rainbow preset such as `finiteRainbow(3,4,3)`.
//
// # Safety
// `preset` must be a nul-terminated string; `out` must be writable.
int32_t cyl_structure_rainbow(const char *preset, struct CylStructure **out);

// # Safety
// `s` must come from this library and not be used afterwards. Null is ignored.
void cyl_structure_free(struct CylStructure *s);

// # Safety
// `s` must be a live handle; `out` must be writable.
int32_t cyl_structure_atom_count(const struct CylStructure *s, size_t *out);

// Serialize to the interchange format.
//
// # Safety
// `s` must be a live handle; `out` must be writable.
int32_t cyl_structure_to_json(const struct CylStructure *s, char **out);

// Check the axioms; `passed` receives 1 or 0, `report` (if non-null) the JSON report.
//
// # Safety
// `s` must be a live handle; `passed` must be writable; `report` may be null.
int32_t cyl_check_axioms(const struct CylStructure *s,
                         uint64_t sample,
                         int32_t *passed,
                         char **report);

// Solve a game such as `Gmk(5,3)` or a JSON game spec. `s` may be null for pebble games.
// A zero budget field keeps the default.
//
// # Safety
// `s` is null or a live handle; `game` is a nul-terminated string; `report` must be writable.
int32_t cyl_solve(const struct CylStructure *s,
                  const char *game,
                  uint64_t budget_states,
                  uint32_t budget_depth,
                  char **report);

// Run a scenario file. `exit_code` receives the runner's code (0, 1 or 2).
//
// # Safety
// `path` is a nul-terminated string; `exit_code` and `report` must be writable.
int32_t cyl_run_scenario(const char *path, int32_t *exit_code, char **report);

// Copy of the calling thread's last error message, or null if the last call succeeded.
char *cyl_last_error_message(void);

// # Safety
// `s` must come from this library and not be used afterwards. Null is ignored.
void cyl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYLBENCH_H */
