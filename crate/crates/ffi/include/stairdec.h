#ifndef STAIRDEC_H
#define STAIRDEC_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StairdecStatus {
  STAIRDEC_STATUS_OK = 0,
  STAIRDEC_STATUS_NULL_POINTER = 1,
  STAIRDEC_STATUS_INVALID_ARGUMENT = 2,
  STAIRDEC_STATUS_LENGTH_MISMATCH = 3,
  STAIRDEC_STATUS_IO = 4,
  STAIRDEC_STATUS_PANIC = 5,
} StairdecStatus;

typedef enum StairdecVariant {
  STAIRDEC_VARIANT_STANDARD = 0,
  STAIRDEC_VARIANT_SABM = 1,
  STAIRDEC_VARIANT_ISABM = 2,
} StairdecVariant;

/**
 * A component code.
 */
typedef struct StairdecBch StairdecBch;

/**
 * Streaming window decoder.
 */
typedef struct StairdecDecoder StairdecDecoder;

/**
 * A configured BER sweep.
 */
typedef struct StairdecSimulation StairdecSimulation;

/**
 * Decoder settings. Obtain defaults from [`stairdec_decoder_config_default`].
 */
typedef struct StairdecDecoderConfig {
  enum StairdecVariant variant;
  size_t window;
  size_t iterations;
  size_t k;
  double delta1;
  double delta2;
  uint32_t quant_bits;
  uint64_t seed;
} StairdecDecoderConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from this thread.
 */
const char *stairdec_last_error(void);

/**
 * Releases a string returned by the library.
 */
void stairdec_string_free(char *s);

/**
 * Creates the code with transmitted parameters `(n, k, t)`, e.g. 256, 239, 2.
 */
enum StairdecStatus stairdec_bch_new(size_t n, size_t k, size_t t, struct StairdecBch **out);

void stairdec_bch_free(struct StairdecBch *code);

/**
 * Reports `n`, `k`, `t` and the minimum distance. Any output may be NULL.
 */
enum StairdecStatus stairdec_bch_params(const struct StairdecBch *code,
                                        size_t *n,
                                        size_t *k,
                                        size_t *t,
                                        size_t *d0);

/**
 * Systematic encoding of `k` information bits (one per byte) into `n` bits.
 */
enum StairdecStatus stairdec_bch_encode(const struct StairdecBch *code,
                                        const uint8_t *info,
                                        size_t info_len,
                                        uint8_t *codeword,
                                        size_t codeword_len);

/**
 * Bounded-distance decoding of `n` received bits. On success `decoded`
 * holds the codeword and `corrected` the number of flipped bits; on a
 * decoding failure `decoded` is a copy of the input and `corrected` is -1.
 */
enum StairdecStatus stairdec_bch_decode(const struct StairdecBch *code,
                                        const uint8_t *word,
                                        size_t len,
                                        uint8_t *decoded,
                                        int32_t *corrected);

/**
 * Per-bit LLRs of `count` received M-PAM samples. `llrs` receives
 * `count * log2(order)` values, symbol by symbol, most significant bit first.
 * Positive values favour bit 1.
 */
enum StairdecStatus stairdec_compute_llr(size_t order,
                                         double snr_db,
                                         double noise_variance,
                                         double llr_variance,
                                         const double *samples,
                                         size_t count,
                                         double *llrs,
                                         size_t llrs_len);

/**
 * Quantizes reliabilities with the `bits`-bit quantizer aligned to `delta1`.
 */
enum StairdecStatus stairdec_quantize(double delta1,
                                      uint32_t bits,
                                      const double *reliabilities,
                                      size_t count,
                                      double *out);

/**
 * Saturation `T` and step of the quantizer aligned to `delta1`.
 */
enum StairdecStatus stairdec_quantizer_params(double delta1,
                                              uint32_t bits,
                                              double *saturation,
                                              double *step);

struct StairdecDecoderConfig stairdec_decoder_config_default(void);

enum StairdecStatus stairdec_decoder_new(const struct StairdecBch *code,
                                         struct StairdecDecoderConfig config,
                                         struct StairdecDecoder **out);

void stairdec_decoder_free(struct StairdecDecoder *dec);

/**
 * Side length `w` of the blocks the decoder expects.
 */
enum StairdecStatus stairdec_decoder_block_side(const struct StairdecDecoder *dec, size_t *w);

/**
 * Feeds the next received block: `w * w` hard bits row-major and, for soft
 * variants, the matching reliabilities |LLR| (NULL treats the block as
 * known exactly). When the window is full the oldest decoded block is
 * written to `emitted` and `*has_emitted` is set to 1, otherwise to 0.
 */
enum StairdecStatus stairdec_decoder_push(struct StairdecDecoder *dec,
                                          const uint8_t *hard,
                                          const double *reliabilities,
                                          size_t len,
                                          uint8_t *emitted,
                                          int32_t *has_emitted);

/**
 * Builds a sweep from a JSON object using the command-line option names
 * (`code`, `mod`, `snr_db`, `decoder`, `window`, `iters`, `k`, ...). Missing
 * keys keep their defaults. `config_json` may be NULL for all defaults.
 */
enum StairdecStatus stairdec_simulation_new(const char *config_json,
                                            struct StairdecSimulation **out);

void stairdec_simulation_free(struct StairdecSimulation *sim);

/**
 * Runs the sweep. `csv` receives the result table and `json` (if not NULL)
 * the sidecar document; release both with [`stairdec_string_free`].
 */
enum StairdecStatus stairdec_simulation_run(const struct StairdecSimulation *sim,
                                            char **csv,
                                            char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STAIRDEC_H */
