#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "xrsim/kernels.hpp"
#include "xrsim/rng.hpp"

namespace xrsim::kernels::detail {

// Substream reserved for the source draw of a Monte-Carlo trial; noise
// chunks count up from substream 0.
inline constexpr std::uint64_t kSourceSubstream = RandomStream::kMaxSubstream;

inline std::uint64_t chunk_count(std::uint64_t n, std::uint64_t chunk) {
  return (n + chunk - 1) / chunk;
}

inline void add_awgn_chunk(std::span<double> symbols, double sigma,
                           std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kNoiseChunk;
  const std::uint64_t end =
      std::min<std::uint64_t>(begin + kNoiseChunk, symbols.size());
  NormalStream noise(seed, stream, chunk);
  for (std::uint64_t i = begin; i < end; ++i) symbols[i] += sigma * noise.next();
}

inline void add_awgn_all(std::span<double> symbols, double sigma,
                         std::uint64_t seed, std::uint64_t stream) {
  if (sigma == 0.0) return;
  const std::uint64_t chunks = chunk_count(symbols.size(), kNoiseChunk);
  for (std::uint64_t c = 0; c < chunks; ++c)
    add_awgn_chunk(symbols, sigma, seed, stream, c);
}

// Per-thread buffers for one Monte-Carlo trial.
struct TrialScratch {
  std::vector<double> source;
  std::vector<double> noise_sums;
  std::vector<double> spread;
};

struct SnrPoint {
  double gamma;
  double sigma;
};

// One transmission of a fresh N(0, I) feature vector. Symbol k carries
// feature k mod F, so the n mod F leftover symbols land on the lowest
// indices; its noise is the k-th draw of the add_awgn layout. The receiver
// sums each feature's m copies, m x + sigma * sum(z), and scales by the
// linear MMSE weight gamma / (1 + m gamma). Adds the trial's squared error
// at each SNR point to acc.
inline void deepsc_trial_sse(const DeepscMcInput& in, std::span<const SnrPoint> points,
                             std::uint64_t trial, TrialScratch& s,
                             std::span<double> acc) {
  const std::uint64_t f = in.features;
  s.source.resize(f);
  s.noise_sums.assign(f, 0.0);
  if (s.spread.size() != f) {
    s.spread.resize(f);
    for (std::uint64_t j = 0; j < f; ++j)
      s.spread[j] = static_cast<double>(in.n_symbols / f + (j < in.n_symbols % f ? 1 : 0));
  }

  NormalStream src(in.seed, trial, kSourceSubstream);
  for (auto& v : s.source) v = src.next();

  const std::uint64_t chunks = chunk_count(in.n_symbols, kNoiseChunk);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    NormalStream noise(in.seed, trial, c);
    const std::uint64_t end = std::min(in.n_symbols, (c + 1) * kNoiseChunk);
    std::uint64_t j = (c * kNoiseChunk) % f;
    for (std::uint64_t k = c * kNoiseChunk; k < end; ++k) {
      s.noise_sums[j] += noise.next();
      if (++j == f) j = 0;
    }
  }

  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto [gamma, sigma] = points[p];
    double sse = 0.0;
    for (std::uint64_t j = 0; j < f; ++j) {
      const double m = s.spread[j];
      const double sum = m * s.source[j] + sigma * s.noise_sums[j];
      const double estimate = std::isinf(gamma) ? sum / m : sum * gamma / (1.0 + m * gamma);
      const double err = estimate - s.source[j];
      sse += err * err;
    }
    acc[p] += sse;
  }
}

inline void deepsc_chunk_sse(const DeepscMcInput& in, std::span<const SnrPoint> points,
                             std::uint64_t chunk, TrialScratch& s,
                             std::span<double> acc) {
  const std::uint64_t begin = chunk * kTrialChunk;
  const std::uint64_t end = std::min(begin + kTrialChunk, in.trials);
  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::uint64_t t = begin; t < end; ++t) deepsc_trial_sse(in, points, t, s, acc);
}

inline double chunk_sum_squares(std::span<const double> x, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kTrialChunk;
  const std::uint64_t end = std::min<std::uint64_t>(begin + kTrialChunk, x.size());
  double acc = 0.0;
  for (std::uint64_t i = begin; i < end; ++i) acc += x[i] * x[i];
  return acc;
}

inline double gamma_of(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

inline double sigma_of(double gamma) {
  return std::isinf(gamma) ? 0.0 : std::sqrt(1.0 / gamma);
}

inline std::vector<SnrPoint> snr_points(std::span<const double> snr_db) {
  std::vector<SnrPoint> out;
  out.reserve(snr_db.size());
  for (double db : snr_db) {
    const double gamma = gamma_of(db);
    out.push_back({gamma, sigma_of(gamma)});
  }
  return out;
}

inline void check_sizes(std::span<const double> snr_db, std::span<double> sse) {
  if (snr_db.size() != sse.size())
    throw std::invalid_argument("kernels.deepsc_mc_sse: sse: size differs from snr_db");
}

}  // namespace xrsim::kernels::detail
