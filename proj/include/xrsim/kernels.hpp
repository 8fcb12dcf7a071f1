#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp; both produce
// bit-identical results because work is split into fixed chunks whose
// partial results are merged in chunk order.

#include <cstdint>
#include <span>

namespace xrsim::kernels {

// Trials per reduction chunk. Part of the determinism contract: changing it
// changes the floating-point summation order of Monte-Carlo estimates.
inline constexpr std::uint64_t kTrialChunk = 1024;

enum class Exec { serial, parallel };

// Symbols per noise substream in add_awgn.
inline constexpr std::uint64_t kNoiseChunk = 4096;

struct DeepscMcInput {
  std::uint64_t features;
  std::uint64_t n_symbols;
  std::uint64_t trials;
  std::uint64_t seed;
};

namespace serial {

// In place: x[i] += sigma * z_i with z drawn from NormalStream(seed, stream).
void add_awgn(std::span<double> symbols, double sigma, std::uint64_t seed,
              std::uint64_t stream);

// Sum over trials of the squared feature error of the repetition/MMSE
// analog link, one sum per entry of snr_db written to sse. Each trial draws
// a fresh unit-variance feature vector and per-symbol unit noise from
// stream = trial index; the same draws are scaled to every SNR, so the
// result at one SNR does not depend on which other SNRs are evaluated.
void deepsc_mc_sse(const DeepscMcInput& in, std::span<const double> snr_db,
                   std::span<double> sse);

// Sum of x[i]^2 over the range, chunked as above.
double sum_squares(std::span<const double> x);

// floor(scale * weight[i]) into quota[i], remainder into frac[i].
void proportional_quotas(std::span<const double> weights, double scale,
                         std::span<std::uint64_t> quota,
                         std::span<double> frac);

}  // namespace serial

namespace omp {

void add_awgn(std::span<double> symbols, double sigma, std::uint64_t seed,
              std::uint64_t stream);
void deepsc_mc_sse(const DeepscMcInput& in, std::span<const double> snr_db,
                   std::span<double> sse);
double sum_squares(std::span<const double> x);
void proportional_quotas(std::span<const double> weights, double scale,
                         std::span<std::uint64_t> quota,
                         std::span<double> frac);

}  // namespace omp

void deepsc_mc_sse(const DeepscMcInput& in, std::span<const double> snr_db,
                   std::span<double> sse, Exec exec);
double sum_squares(std::span<const double> x, Exec exec);
void proportional_quotas(std::span<const double> weights, double scale,
                         std::span<std::uint64_t> quota, std::span<double> frac,
                         Exec exec);

}  // namespace xrsim::kernels
