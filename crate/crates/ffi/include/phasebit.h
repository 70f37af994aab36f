#ifndef PHASEBIT_H
#define PHASEBIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>
#include <stddef.h>

typedef enum PbChshSampling {
  PB_CHSH_SAMPLING_SHARED_TRIALS = 0,
  PB_CHSH_SAMPLING_INDEPENDENT_STREAMS = 1,
} PbChshSampling;

typedef enum PbPhaseKind {
  PB_PHASE_KIND_IID_UNIFORM = 0,
  PB_PHASE_KIND_OSCILLATOR_ENSEMBLE = 1,
} PbPhaseKind;

typedef enum PbStatus {
  PB_STATUS_OK = 0,
  PB_STATUS_DOMAIN_ERROR = 1,
  PB_STATUS_USAGE_ERROR = 2,
  PB_STATUS_CONFIG_ERROR = 3,
  PB_STATUS_IO_ERROR = 4,
  PB_STATUS_NULL_POINTER = 5,
  PB_STATUS_PANIC = 6,
} PbStatus;

/**
 * Opaque phase stream handle.
 */
typedef struct PbPhaseStream PbPhaseStream;

/**
 * Opaque virtual register handle.
 */
typedef struct PbRegister PbRegister;

typedef struct PbPhaseModel {
  enum PbPhaseKind kind;
  uint64_t seed;
  uint32_t ensemble_size;
  double frequency_spread;
  uint64_t burn_in;
} PbPhaseModel;

typedef struct PbCorrelationEstimate {
  double mean;
  /**
   * Named to avoid the `stderr` macro from <stdio.h>.
   */
  double std_error;
  uint64_t n;
} PbCorrelationEstimate;

typedef struct PbChshResult {
  /**
   * a1, a2, b1, b2 in canonical form.
   */
  double angles[4];
  /**
   * E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2).
   */
  struct PbCorrelationEstimate terms[4];
  double s_value;
  double s_stderr;
} PbChshResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pb_last_error_message(void);

const char *pb_version(void);

/**
 * Default IID-uniform model for `seed`.
 */
struct PbPhaseModel pb_phase_model_iid(uint64_t seed);

enum PbStatus pb_wrap_angle(double x, double *out_radians);

/**
 * `+1` or `-1`: sign of cos(phi + alpha), with +1 on the tie.
 */
int32_t pb_dichotomic(double phi, double alpha);

enum PbStatus pb_analytic_correlation(double delta, double *out_value);

enum PbStatus pb_conditional_same_color_probability(double delta, double *out_value);

enum PbStatus pb_phase_stream_new(const struct PbPhaseModel *model,
                                  struct PbPhaseStream **out_stream);

void pb_phase_stream_free(struct PbPhaseStream *stream);

/**
 * Next sample. Returns `UsageError` when a bounded stream is exhausted.
 */
enum PbStatus pb_phase_stream_next(struct PbPhaseStream *stream, uint64_t *out_t, double *out_phi);

uint64_t pb_phase_stream_position(const struct PbPhaseStream *stream);

/**
 * New handle over chunk `index` of a `chunks`-way split of the next `n` trials.
 */
enum PbStatus pb_phase_stream_substream(const struct PbPhaseStream *stream,
                                        uint64_t n,
                                        uintptr_t chunks,
                                        uintptr_t index,
                                        struct PbPhaseStream **out_stream);

/**
 * Estimate the correlation over the next `n` trials; the stream is not advanced.
 */
enum PbStatus pb_estimate_correlation(const struct PbPhaseStream *stream,
                                      double alpha1,
                                      double alpha2,
                                      uint64_t n,
                                      uintptr_t workers,
                                      struct PbCorrelationEstimate *out_estimate);

/**
 * Register of `n_qubits` balanced qubits at `angles`, reading a fresh
 * stream of `model`.
 */
enum PbStatus pb_register_new(const struct PbPhaseModel *model,
                              const double *angles,
                              uintptr_t n_qubits,
                              uintptr_t signal_index,
                              struct PbRegister **out_register);

void pb_register_free(struct PbRegister *register_);

uintptr_t pb_register_len(const struct PbRegister *register_);

enum PbStatus pb_register_set_definite(struct PbRegister *register_, uintptr_t qubit, uint8_t bit);

enum PbStatus pb_register_set_balanced(struct PbRegister *register_, uintptr_t qubit, double alpha);

/**
 * Virtual-qubit Hadamard on one qubit.
 */
enum PbStatus pb_register_hadamard(struct PbRegister *register_,
                                   uintptr_t qubit,
                                   double default_alpha);

/**
 * One trial. `out_bits` must hold `pb_register_len` bytes.
 */
enum PbStatus pb_register_measure_trial(struct PbRegister *register_,
                                        uint8_t *out_bits,
                                        bool *out_accepted);

/**
 * Run `trials` trials and keep the accepted ones.
 *
 * Writes up to `capacity` accepted records into `out_bits` as a row-major
 * `records × n_qubits` byte matrix (may be NULL when `capacity` is 0) and
 * their trial indices into `out_t` (may be NULL). `out_accepted` receives
 * the total accepted count, which can exceed `capacity`.
 */
enum PbStatus pb_register_initialize(struct PbRegister *register_,
                                     uint64_t trials,
                                     uintptr_t workers,
                                     uint8_t *out_bits,
                                     uint64_t *out_t,
                                     uintptr_t capacity,
                                     uintptr_t *out_accepted);

enum PbStatus pb_cnot(uint8_t control_bit, uint8_t target_bit, uint8_t *out_bit);

enum PbStatus pb_analytic_chsh(const double *angles, double *out_s);

enum PbStatus pb_chsh_classical(const struct PbPhaseModel *model,
                                const double *angles,
                                uint64_t n,
                                enum PbChshSampling sampling,
                                uintptr_t workers,
                                struct PbChshResult *out_result);

enum PbStatus pb_singlet_correlation(double a, double b, double *out_value);

enum PbStatus pb_chsh_quantum(const double *angles, double *out_s);

/**
 * KS statistic against the uniform law on [0, 2π) and its 1% critical value.
 */
enum PbStatus pb_ks_uniformity(const double *samples,
                               uintptr_t len,
                               double *out_statistic,
                               double *out_critical_1pct);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASEBIT_H */
