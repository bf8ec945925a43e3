#ifndef DECOLAB_H
#define DECOLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Values are stable across releases.
typedef enum DecolabStatus {
  DECOLAB_STATUS_OK = 0,
  DECOLAB_STATUS_INVALID_ARGUMENT = 1,
  DECOLAB_STATUS_CONFIG = 2,
  DECOLAB_STATUS_IO = 3,
  DECOLAB_STATUS_TRUNCATION = 4,
  DECOLAB_STATUS_DIMENSION_MISMATCH = 5,
  DECOLAB_STATUS_CONVERGENCE = 6,
  DECOLAB_STATUS_ENSEMBLE_EXPLOSION = 7,
  DECOLAB_STATUS_VALIDITY = 8,
  DECOLAB_STATUS_QUADRATURE = 9,
  DECOLAB_STATUS_DEGENERATE_MODEL = 10,
  DECOLAB_STATUS_DEGENERATE_FIT = 11,
  // The cutoff scan found no temperature where separability flips.
  DECOLAB_STATUS_NO_CROSSING = 12,
  DECOLAB_STATUS_NULL_POINTER = 13,
  DECOLAB_STATUS_BUFFER_TOO_SMALL = 14,
  DECOLAB_STATUS_PANIC = 15,
} DecolabStatus;

typedef enum DecolabFieldKind {
  // `param_re` holds the photon number.
  DECOLAB_FIELD_KIND_FOCK = 0,
  DECOLAB_FIELD_KIND_COHERENT = 1,
  DECOLAB_FIELD_KIND_EVEN_CAT = 2,
} DecolabFieldKind;

typedef enum DecolabColumn {
  DECOLAB_COLUMN_TIME = 0,
  // Field energy `w <a^dag a>`.
  DECOLAB_COLUMN_ENERGY = 1,
  // Field linear entropy.
  DECOLAB_COLUMN_DELTA1 = 2,
  // Reservoir linear entropy.
  DECOLAB_COLUMN_DELTA2 = 3,
  DECOLAB_COLUMN_MEAN_A_RE = 4,
  DECOLAB_COLUMN_MEAN_A_IM = 5,
  DECOLAB_COLUMN_NORM = 6,
  DECOLAB_COLUMN_TOTAL_EXCITATION = 7,
} DecolabColumn;

// Opaque, growable discrete bath.
typedef struct DecolabBath DecolabBath;

// Opaque spectral model.
typedef struct DecolabModel DecolabModel;

// Opaque simulation result.
typedef struct DecolabTrajectory DecolabTrajectory;

// Markovian timescales for one temperature. `beta` may be `INFINITY`;
// infinite timescales are reported as `INFINITY`.
typedef struct DecolabTimescales {
  double n_bar;
  // `g(w) gamma(w)^2`.
  double rate;
  double tau_dis;
  double tau_th;
  double tau_dec;
  double tau_res_dec;
  // `tau_res_dec / (2 pi / w)`.
  double ratio_period;
  // 1 if `tau_res_dec > margin * 2 pi / w`.
  int32_t separable;
  // 1 if every ratio identity holds to 1e-10.
  int32_t identities_hold;
} DecolabTimescales;

// Exact-evolution settings. `method`: 0 auto, 1 dense, 2 adaptive ODE.
typedef struct DecolabEvolution {
  double t_max;
  size_t samples;
  int32_t method;
  double tolerance;
  double weight_cutoff;
  size_t max_members;
} DecolabEvolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the calling thread's last error message into `buf` (NUL-terminated,
// truncated to fit). Returns the full message length without the NUL.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t decolab_last_error(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *decolab_version(void);

// Process exit code the command-line runner uses for `status`.
int32_t decolab_status_exit_code(enum DecolabStatus status);

// Constant density and coupling on `[band_min, band_max]`.
//
// # Safety
// `out` must be valid for one pointer write.
enum DecolabStatus decolab_model_flat(double density,
                                      double coupling,
                                      double band_min,
                                      double band_max,
                                      struct DecolabModel **out);

// Ohmic density with exponential cutoff.
//
// # Safety
// `out` must be valid for one pointer write.
enum DecolabStatus decolab_model_ohmic(double scale,
                                       double cutoff,
                                       double coupling,
                                       struct DecolabModel **out);

// Lorentzian density; `width` is the full width at half maximum.
//
// # Safety
// `out` must be valid for one pointer write.
enum DecolabStatus decolab_model_lorentzian(double center,
                                            double width,
                                            double peak,
                                            double coupling,
                                            struct DecolabModel **out);

// # Safety
// `model` must be null or a handle from a `decolab_model_*` constructor, freed once.
void decolab_model_free(struct DecolabModel *model);

// # Safety
// `model` must be a live handle and `out` valid for one write.
enum DecolabStatus decolab_timescales(const struct DecolabModel *model,
                                      double omega,
                                      double beta,
                                      double mean_n0,
                                      double mean_a_re,
                                      double mean_a_im,
                                      double margin,
                                      struct DecolabTimescales *out);

// Inverse temperatures where reservoir separability flips, ascending.
// Writes up to `cap` values to `betas` and the total count to `count`.
// Returns `BufferTooSmall` (with `count` set) when `cap` is short, and
// `NoCrossing` when the verdict never flips.
//
// # Safety
// `model` must be a live handle, `betas` valid for `cap` writes (or null
// with `cap == 0`), `count` valid for one write.
enum DecolabStatus decolab_cutoff_betas(const struct DecolabModel *model,
                                        double omega,
                                        double mean_n0,
                                        double mean_a_re,
                                        double mean_a_im,
                                        double margin,
                                        double *betas,
                                        size_t cap,
                                        size_t *count);

// # Safety
// `out` must be valid for one pointer write.
enum DecolabStatus decolab_bath_new(struct DecolabBath **out);

// Append one oscillator with real coupling and Fock cutoff `dim`.
//
// # Safety
// `bath` must be a live handle.
enum DecolabStatus decolab_bath_add_mode(struct DecolabBath *bath,
                                         double frequency,
                                         double coupling,
                                         size_t dim);

// # Safety
// `bath` must be null or a handle from [`decolab_bath_new`], freed once.
void decolab_bath_free(struct DecolabBath *bath);

// Defaults matching the library.
struct DecolabEvolution decolab_evolution_default(void);

// Exact evolution of the field plus `bath`. `beta` may be `INFINITY`.
//
// # Safety
// `bath` must be a live handle, `evolution` valid for one read and `out`
// valid for one pointer write.
enum DecolabStatus decolab_simulate(const struct DecolabBath *bath,
                                    enum DecolabFieldKind field_kind,
                                    double param_re,
                                    double param_im,
                                    size_t field_dim,
                                    double omega,
                                    double beta,
                                    const struct DecolabEvolution *evolution,
                                    struct DecolabTrajectory **out);

// # Safety
// `traj` must be null or a handle from [`decolab_simulate`], freed once.
void decolab_trajectory_free(struct DecolabTrajectory *traj);

// Number of time samples, or 0 for a null handle.
//
// # Safety
// `traj` must be null or a live handle.
size_t decolab_trajectory_len(const struct DecolabTrajectory *traj);

// Copy one column into `buf`, which must hold `decolab_trajectory_len` values.
//
// # Safety
// `traj` must be a live handle and `buf` valid for `cap` writes.
enum DecolabStatus decolab_trajectory_column(const struct DecolabTrajectory *traj,
                                             enum DecolabColumn column,
                                             double *buf,
                                             size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECOLAB_H */
