#ifndef BTL_H
#define BTL_H

/* Generated by cbindgen from btl-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible calls.
 */
typedef enum BtlStatus {
  BTL_STATUS_OK = 0,
  /**
   * Syntax or validation error in an input.
   */
  BTL_STATUS_PARSE_ERROR = -1,
  /**
   * A handle or argument was null or out of range.
   */
  BTL_STATUS_BAD_ARGUMENT = -2,
  /**
   * The operation itself reported an error (see the message).
   */
  BTL_STATUS_OPERATION_ERROR = -3,
} BtlStatus;

typedef struct BtlFormula BtlFormula;

typedef struct BtlTree BtlTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a formula; returns null on error (fetch the message with
 * `btl_formula_parse_err`).
 */
struct BtlFormula *btl_formula_parse(const char *text);

/**
 * Error message for the most recent parse failure of `text`, as a fresh
 * string (free with `btl_string_free`); null when the text parses.
 */
char *btl_formula_parse_err(const char *text);

void btl_formula_free(struct BtlFormula *f);

/**
 * Render the formula; free the result with `btl_string_free`.
 */
char *btl_formula_print(const struct BtlFormula *f);

int btl_formula_size(const struct BtlFormula *f);

int btl_formula_depth(const struct BtlFormula *f);

/**
 * Syntactic class: 0 CTL, 1 CTL+, 2 CTL*.
 */
int btl_formula_class(const struct BtlFormula *f);

/**
 * Load a tree from its JSON form; null on error.
 */
struct BtlTree *btl_tree_load_json(const char *text);

void btl_tree_free(struct BtlTree *t);

char *btl_tree_save_json(const struct BtlTree *t);

/**
 * Model-check at the root under the all-root assignment. `strict_mode` 0
 * selects leaf-loop semantics. Returns 1, 0, or a negative status.
 */
int btl_models(const struct BtlTree *t, const struct BtlFormula *f, int strict_mode);

/**
 * Model-check at a node (external id) under an explicit assignment of
 * external ids (`assign`/`assign_len` may be null/0).
 */
int btl_check(const struct BtlTree *t,
              const struct BtlFormula *f,
              uint64_t node,
              const uint64_t *assign,
              uintptr_t assign_len,
              int strict_mode);

/**
 * Rewrite pipelines: 0 u-normal, 1 e-normal, 2 to-ctl, 3
 * eliminate-past-fairness. Returns a new handle or null on error. The
 * past/fairness pipeline may produce a top-level path formula; in that case
 * this entry point reports an error (use the CLI for those outputs).
 */
struct BtlFormula *btl_rewrite(const struct BtlFormula *f, int pipeline);

/**
 * Solve the comparison game: 1 spoiler wins, 0 duplicator, negative status
 * on error.
 */
int btl_game_solve(const struct BtlTree *left, const struct BtlTree *right, int rounds);

/**
 * Solve a tiling game from an instance in JSON form: 1 E wins, 0 A wins,
 * 2 inconclusive, negative status on error.
 */
int btl_solve_tiling(const char *instance_json, int width, int max_rows);

/**
 * Free a string returned by this library.
 */
void btl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BTL_H */
