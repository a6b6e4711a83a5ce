#ifndef GINV_H
#define GINV_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of a call. The nonzero values match the exit codes of the
// `ginv` command.
typedef enum GinvStatus {
  GINV_STATUS_OK = 0,
  // A panic or other internal fault.
  GINV_STATUS_INTERNAL = 1,
  // The requested inverse does not exist.
  GINV_STATUS_NOT_EXISTS = 2,
  // Invalid argument, null pointer or unparseable input.
  GINV_STATUS_INVALID_ARGUMENT = 3,
  // Numerical failure: singular system, eigenvalue on a contour,
  // unseparated spectrum, failed certification.
  GINV_STATUS_NUMERICAL = 4,
} GinvStatus;

typedef enum GinvBackend {
  GINV_BACKEND_EXACT = 0,
  GINV_BACKEND_FLOAT = 1,
} GinvBackend;

// Opaque matrix handle.
typedef struct GinvMatrix GinvMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next library call on the same thread.
const char *ginv_last_error(void);

// Sets the rank tolerance used by subsequent calls on this thread.
enum GinvStatus ginv_set_tolerance(double tau);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void ginv_string_free(char *s);

// Real matrix from `rows*cols` row-major doubles, on the float backend.
//
// # Safety
// `data` must point to `rows*cols` doubles; `out` must be writable.
enum GinvStatus ginv_matrix_from_f64(size_t rows,
                                     size_t cols,
                                     const double *data,
                                     struct GinvMatrix **out);

// Complex matrix from `rows*cols` row-major `(re, im)` pairs.
//
// # Safety
// `data` must point to `2*rows*cols` doubles; `out` must be writable.
enum GinvStatus ginv_matrix_from_complex(size_t rows,
                                         size_t cols,
                                         const double *data,
                                         struct GinvMatrix **out);

// Rational matrix from row-major numerators and denominators, on the
// exact backend.
//
// # Safety
// `num` and `den` must each point to `rows*cols` values; `out` must be
// writable.
enum GinvStatus ginv_matrix_from_rational(size_t rows,
                                          size_t cols,
                                          const int64_t *num,
                                          const int64_t *den,
                                          struct GinvMatrix **out);

// Reads a Matrix Market or JSON file. JSON rational files always load on
// the exact backend.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum GinvStatus ginv_matrix_read(const char *path,
                                 enum GinvBackend backend,
                                 struct GinvMatrix **out);

// Writes the matrix; the format follows the extension (`.json` or Matrix
// Market).
//
// # Safety
// `m` must be a live handle and `path` a NUL-terminated string.
enum GinvStatus ginv_matrix_write(const struct GinvMatrix *m, const char *path);

// # Safety
// `m` must be null or a live handle; it is invalid afterwards.
void ginv_matrix_free(struct GinvMatrix *m);

// # Safety
// `m` must be null or a live handle.
size_t ginv_matrix_rows(const struct GinvMatrix *m);

// # Safety
// `m` must be null or a live handle.
size_t ginv_matrix_cols(const struct GinvMatrix *m);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum GinvStatus ginv_matrix_backend(const struct GinvMatrix *m, enum GinvBackend *out);

// Entry `(i, j)` as a complex double; exact entries are rounded.
//
// # Safety
// `m` must be a live handle; `re` and `im` must be writable.
enum GinvStatus ginv_matrix_get(const struct GinvMatrix *m,
                                size_t i,
                                size_t j,
                                double *re,
                                double *im);

// Compact text form, e.g. `[[2,0],[1/3,0]]`. Free with
// [`ginv_string_free`].
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum GinvStatus ginv_matrix_to_string(const struct GinvMatrix *m, char **out);

// JSON form (`rows`, `cols`, `field`, `data`). Free with
// [`ginv_string_free`].
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum GinvStatus ginv_matrix_to_json(const struct GinvMatrix *m, char **out);

// # Safety
// `a` must be a live handle; `out` must be writable.
enum GinvStatus ginv_moore_penrose(const struct GinvMatrix *a, struct GinvMatrix **out);

// # Safety
// `a` must be a live handle; `out` must be writable.
enum GinvStatus ginv_group(const struct GinvMatrix *a, struct GinvMatrix **out);

// Drazin inverse; `index` (may be null) receives the Drazin index.
//
// # Safety
// `a` must be a live handle; `out` must be writable; `index` null or
// writable.
enum GinvStatus ginv_drazin(const struct GinvMatrix *a, struct GinvMatrix **out, size_t *index);

// Inverse of `a` along `d`.
//
// # Safety
// `a`, `d` must be live handles; `out` must be writable.
enum GinvStatus ginv_mary(const struct GinvMatrix *a,
                          const struct GinvMatrix *d,
                          struct GinvMatrix **out);

// Outer inverse whose range is spanned by the columns of `range` and whose
// nullspace is spanned by the columns of `nullspace`.
//
// # Safety
// `a`, `range`, `nullspace` must be live handles; `out` must be writable.
enum GinvStatus ginv_outer(const struct GinvMatrix *a,
                           const struct GinvMatrix *range,
                           const struct GinvMatrix *nullspace,
                           struct GinvMatrix **out);

// `(p, q)`-inverse: the outer inverse `b` with `ba = p`, `1 − ab = q`.
//
// # Safety
// `a`, `p`, `q` must be live handles; `out` must be writable.
enum GinvStatus ginv_pq(const struct GinvMatrix *a,
                        const struct GinvMatrix *p,
                        const struct GinvMatrix *q,
                        struct GinvMatrix **out);

// Spectral projection onto the eigenvalues inside the disk
// `|λ − (cx + i·cy)| < r`. Always computed in floating point.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum GinvStatus ginv_spectral_projection(const struct GinvMatrix *a,
                                         double cx,
                                         double cy,
                                         double r,
                                         struct GinvMatrix **out);

// Certifies `b` as an inverse of `a` of the given kind (`"inner"`,
// `"outer"`, `"reflexive"`, `"mp"`, `"group"`, `"drazin"`, `"mary"`).
// `along` is required for `"mary"` and ignored otherwise. Writes the
// certificate JSON to `json` (may be null) and the verdict to `passed`
// (may be null). A failed certificate is not an error.
//
// # Safety
// `a`, `b` must be live handles, `along` null or a live handle, `kind` a
// NUL-terminated string; `json` and `passed` null or writable.
enum GinvStatus ginv_certify(const struct GinvMatrix *a,
                             const struct GinvMatrix *b,
                             const char *kind,
                             const struct GinvMatrix *along,
                             char **json,
                             bool *passed);

// Column basis of the nullspace of `a`.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum GinvStatus ginv_nullspace(const struct GinvMatrix *a, struct GinvMatrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GINV_H */
