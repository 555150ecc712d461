#ifndef MINSURF_H
#define MINSURF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/*
 `MS_ALGEBRA_*` values accepted by [`ms_expr_parse`].
 */
#define MS_ALGEBRA_COMPLEX 0

#define MS_ALGEBRA_LORENTZ 1

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_UTF8 = 2,
  MS_STATUS_INVALID_ARGUMENT = 3,
  MS_STATUS_UNKNOWN_SURFACE = 4,
  MS_STATUS_PARSE_ERROR = 5,
  MS_STATUS_VALIDATION_FAILED = 6,
  MS_STATUS_EVAL_ERROR = 7,
  MS_STATUS_BUFFER_TOO_SMALL = 8,
  MS_STATUS_PANIC = 9,
} MsStatus;

/*
 A parsed expression in `z`.
 */
typedef struct MsExpr MsExpr;

/*
 A surface: Enneper data with a domain and an evaluable immersion.
 */
typedef struct MsSurface MsSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of this thread into `buf` (truncating to
 fit) and returns the length of the full message including its NUL.

 # Safety
 `buf` must be null or valid for `len` bytes.
 */
size_t ms_last_error(char *buf, size_t len);

/*
 Number of built-in catalog entries.

 # Safety
 `out` must be valid for a write.
 */
enum MsStatus ms_catalog_count(size_t *out);

/*
 Name of built-in entry `index`.

 # Safety
 `buf` must be null or valid for `len` bytes; `needed` null or writable.
 */
enum MsStatus ms_catalog_name(size_t index, char *buf, size_t len, size_t *needed);

/*
 Looks up a built-in entry by name.

 # Safety
 `name` must be a NUL-terminated string; `out` must be writable.
 */
enum MsStatus ms_surface_from_catalog(const char *name, struct MsSurface **out);

/*
 Builds a surface from Enneper data over the rect
 `[u_min, u_max] x [v_min, v_max]` (Cartesian chart, basepoint at the
 center). `character` is `"spacelike"` or `"timelike"`. The data must pass
 validation; the immersion is the path integral of the Weierstrass data.

 # Safety
 String arguments must be NUL-terminated; `out` must be writable.
 */
enum MsStatus ms_surface_from_data(const char *character,
                                   const char *lz,
                                   const char *pz,
                                   const char *hz,
                                   double u_min,
                                   double u_max,
                                   double v_min,
                                   double v_max,
                                   struct MsSurface **out);

/*
 Evaluates the immersion at chart point `(s, t)` into `out[0..3]`.

 # Safety
 `surface` must come from this library; `out` must be valid for 3 doubles.
 */
enum MsStatus ms_surface_eval(const struct MsSurface *surface, double s, double t, double *out);

/*
 Runs the verification suite. `*pass` receives 1 or 0; the text report is
 written to `buf` as described in the module docs. The status is `MS_STATUS_OK`
 whether or not the surface passes.

 # Safety
 `surface` must come from this library; `pass` writable; `buf`/`needed` as for text output.
 */
enum MsStatus ms_surface_verify(const struct MsSurface *surface,
                                int *pass,
                                char *buf,
                                size_t len,
                                size_t *needed);

/*
 Samples an `nu x nv` grid over the surface's rect as OBJ text.

 # Safety
 `surface` must come from this library; `buf`/`needed` as for text output.
 */
enum MsStatus ms_surface_sample_obj(const struct MsSurface *surface,
                                    size_t nu,
                                    size_t nv,
                                    char *buf,
                                    size_t len,
                                    size_t *needed);

/*
 Releases a surface. Null is ignored.

 # Safety
 `surface` must be null or come from this library and not be used afterwards.
 */
void ms_surface_free(struct MsSurface *surface);

/*
 Parses an expression in `z` over `MS_ALGEBRA_COMPLEX` or `MS_ALGEBRA_LORENTZ`.

 # Safety
 `src` must be NUL-terminated; `out` must be writable.
 */
enum MsStatus ms_expr_parse(const char *src, uint32_t algebra, struct MsExpr **out);

/*
 Evaluates at `z = re + e*im`; `value` and, when not null, `deriv` receive
 `(re, im)` pairs of the value and of `d/dz`.

 # Safety
 `expr` must come from this library; `value` valid for 2 doubles; `deriv` null or valid for 2.
 */
enum MsStatus ms_expr_eval(const struct MsExpr *expr,
                           double re,
                           double im,
                           double *value,
                           double *deriv);

/*
 Releases an expression. Null is ignored.

 # Safety
 `expr` must be null or come from this library and not be used afterwards.
 */
void ms_expr_free(struct MsExpr *expr);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MINSURF_H */
