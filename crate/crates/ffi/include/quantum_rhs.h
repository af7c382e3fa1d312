#ifndef QUANTUM_RHS_H
#define QUANTUM_RHS_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible function.
typedef enum QrStatus {
  QR_STATUS_OK = 0,
  // A required pointer argument was NULL.
  QR_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  QR_STATUS_INVALID_UTF8 = 2,
  // Malformed manifold description or JSON.
  QR_STATUS_INVALID_SPEC = 3,
  // The level argument is not an odd prime.
  QR_STATUS_NOT_PRIME = 4,
  // The manifold is not a rational homology sphere.
  QR_STATUS_NOT_RHS = 5,
  // `K` divides `|H₁|`; the invariant is outside the supported range.
  QR_STATUS_H1_DIVISIBLE_BY_K = 6,
  // `K` divides a Seifert fibre multiplicity.
  QR_STATUS_P_DIVISIBLE_BY_K = 7,
  // The request is valid but not implemented for this manifold.
  QR_STATUS_UNSUPPORTED = 8,
  // An index argument was out of range.
  QR_STATUS_OUT_OF_RANGE = 9,
  // Not enough primes to reconstruct the requested coefficients.
  QR_STATUS_INSUFFICIENT_MODULUS = 10,
  // An internal consistency check failed.
  QR_STATUS_COMPUTATION_FAILED = 11,
  // A Rust panic was caught at the boundary.
  QR_STATUS_PANIC = 12,
} QrStatus;

// Opaque exact element of `ℤ[q̌]`, `q̌ = e^{2πi/K}`.
typedef struct QrCycInt QrCycInt;

// Opaque λ-series `λ₀..λ_{n_max}`.
typedef struct QrLambda QrLambda;

// Opaque manifold description.
typedef struct QrManifold QrManifold;

// A double-precision complex number.
typedef struct QrComplex {
  double re;
  double im;
} QrComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The library version as a static NUL-terminated string.
const char *qr_version(void);

// Message for the last failure on this thread, or NULL if the last call
// succeeded.  The pointer stays valid until the next library call on the
// same thread.
const char *qr_last_error_message(void);

// Releases a string returned by the library.
//
// # Safety
// `s` is NULL or a pointer returned by this library and not yet freed.
void qr_string_free(char *s);

// Creates the lens space `L(p, q)`.
//
// # Safety
// `out` is valid for a pointer write.
enum QrStatus qr_manifold_lens(int64_t p, int64_t q, struct QrManifold **out);

// Creates the Seifert space with exceptional fibres `p[j]/q[j]`,
// `j < len`.
//
// # Safety
// `p` and `q` point to `len` readable integers; `out` is valid for a
// pointer write.
enum QrStatus qr_manifold_seifert(const int64_t *p,
                                  const int64_t *q,
                                  uintptr_t len,
                                  struct QrManifold **out);

// Creates a manifold from its JSON description, e.g.
// `{"type":"lens","p":5,"q":2}`.
//
// # Safety
// `json` is a NUL-terminated string; `out` is valid for a pointer write.
enum QrStatus qr_manifold_from_json(const char *json, struct QrManifold **out);

// Human-readable identifier such as `L(5,2)`; free with
// [`qr_string_free`].  Returns NULL if `m` is NULL.
//
// # Safety
// `m` is NULL or a live manifold handle.
char *qr_manifold_id(const struct QrManifold *m);

// `|H₁(M; ℤ)|`.
//
// # Safety
// `m` is a live manifold handle; `out` is valid for a write.
enum QrStatus qr_manifold_h1_order(const struct QrManifold *m, uint64_t *out);

// Releases a manifold handle.
//
// # Safety
// `m` is NULL or a handle from this library not yet freed.
void qr_manifold_free(struct QrManifold *m);

// The exact normalised invariant `Z′(M; k)` at the odd prime `k`.
//
// # Safety
// `m` is a live manifold handle; `out` is valid for a pointer write.
enum QrStatus qr_zprime_exact(const struct QrManifold *m, int64_t k, struct QrCycInt **out);

// Numeric `Z′(M; k)` from the surgery oracle.
//
// # Safety
// `m` is a live manifold handle; `out` is valid for a write.
enum QrStatus qr_zprime_numeric(const struct QrManifold *m, int64_t k, struct QrComplex *out);

// Numeric unnormalised SO(3) invariant `Z(M; k)` for any odd `k ≥ 3`.
//
// # Safety
// `m` is a live manifold handle; `out` is valid for a write.
enum QrStatus qr_z_numeric(const struct QrManifold *m, int64_t k, struct QrComplex *out);

// Number of stored coefficients: the value is
// `Σ_{i < len} c_i q̌^i`.
//
// # Safety
// `c` is NULL or a live handle.
uintptr_t qr_cycint_len(const struct QrCycInt *c);

// The modulus `K` of the element, or 0 for NULL.
//
// # Safety
// `c` is NULL or a live handle.
int64_t qr_cycint_modulus(const struct QrCycInt *c);

// Coefficient `i` as a decimal string; free with [`qr_string_free`].
//
// # Safety
// `c` is a live handle; `out` is valid for a pointer write.
enum QrStatus qr_cycint_coeff(const struct QrCycInt *c, uintptr_t i, char **out);

// Polynomial rendering in `q̌`; free with [`qr_string_free`].
//
// # Safety
// `c` is NULL or a live handle.
char *qr_cycint_to_string(const struct QrCycInt *c);

// Complex value at `q̌ = e^{2πi/K}`.
//
// # Safety
// `c` is a live handle; `out` is valid for a write.
enum QrStatus qr_cycint_eval(const struct QrCycInt *c, struct QrComplex *out);

// Releases an element handle.
//
// # Safety
// `c` is NULL or a handle from this library not yet freed.
void qr_cycint_free(struct QrCycInt *c);

// Closed-form `λ₀..λ_{n_max}` (lens spaces, Seifert spaces, unknot/unlink
// surgeries).
//
// # Safety
// `m` is a live manifold handle; `out` is valid for a pointer write.
enum QrStatus qr_lambda_closed_form(const struct QrManifold *m,
                                    uintptr_t n_max,
                                    struct QrLambda **out);

// `λ₀..λ_{n_max}` reconstructed from exact invariants at the given primes
// (extended automatically when more are needed).
//
// # Safety
// `primes` points to `len` readable integers; `m` is a live handle; `out`
// is valid for a pointer write.
enum QrStatus qr_lambda_reconstruct(const struct QrManifold *m,
                                    const int64_t *primes,
                                    uintptr_t len,
                                    uintptr_t n_max,
                                    struct QrLambda **out);

// Number of coefficients held (`n_max + 1`), or 0 for NULL.
//
// # Safety
// `l` is NULL or a live handle.
uintptr_t qr_lambda_len(const struct QrLambda *l);

// `λ_n` as a reduced fraction `"a/b"` (or `"a"` when integral); free with
// [`qr_string_free`].
//
// # Safety
// `l` is a live handle; `out` is valid for a pointer write.
enum QrStatus qr_lambda_coeff(const struct QrLambda *l, uintptr_t n, char **out);

// Releases a λ-series handle.
//
// # Safety
// `l` is NULL or a handle from this library not yet freed.
void qr_lambda_free(struct QrLambda *l);

// Checks `diamond(|H₁|·(|H₁|/K)·Z′) = vee(Σ λₙ xⁿ)` at the prime `k`
// using the closed-form λ-series.  `*equal` receives the verdict when the
// status is `Ok`; a prime outside the hypotheses yields
// `H1DivisibleByK`/`PDivisibleByK`.
//
// # Safety
// `m` is a live manifold handle; `equal` is valid for a write.
enum QrStatus qr_verify_identity(const struct QrManifold *m, int64_t k, bool *equal);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUANTUM_RHS_H */
