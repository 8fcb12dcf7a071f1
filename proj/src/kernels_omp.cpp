#include <omp.h>

#include <cmath>
#include <vector>

#include "kernels_detail.hpp"

namespace xrsim::kernels::omp {

void add_awgn(std::span<double> symbols, double sigma, std::uint64_t seed,
              std::uint64_t stream) {
  if (sigma == 0.0) return;
  const auto chunks =
      static_cast<std::int64_t>(detail::chunk_count(symbols.size(), kNoiseChunk));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c)
    detail::add_awgn_chunk(symbols, sigma, seed, stream,
                           static_cast<std::uint64_t>(c));
}

void deepsc_mc_sse(const DeepscMcInput& in, std::span<const double> snr_db,
                   std::span<double> sse) {
  detail::check_sizes(snr_db, sse);
  const auto points = detail::snr_points(snr_db);
  const std::size_t np = points.size();
  const auto chunks =
      static_cast<std::int64_t>(detail::chunk_count(in.trials, kTrialChunk));
  std::vector<double> partial(static_cast<std::size_t>(chunks) * np, 0.0);
#pragma omp parallel
  {
    detail::TrialScratch scratch;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < chunks; ++c)
      detail::deepsc_chunk_sse(
          in, points, static_cast<std::uint64_t>(c), scratch,
          std::span<double>(partial).subspan(static_cast<std::size_t>(c) * np, np));
  }
  std::fill(sse.begin(), sse.end(), 0.0);
  for (std::int64_t c = 0; c < chunks; ++c)
    for (std::size_t p = 0; p < np; ++p)
      sse[p] += partial[static_cast<std::size_t>(c) * np + p];
}

double sum_squares(std::span<const double> x) {
  const auto chunks =
      static_cast<std::int64_t>(detail::chunk_count(x.size(), kTrialChunk));
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c)
    partial[static_cast<std::size_t>(c)] =
        detail::chunk_sum_squares(x, static_cast<std::uint64_t>(c));
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void proportional_quotas(std::span<const double> weights, double scale,
                         std::span<std::uint64_t> quota,
                         std::span<double> frac) {
  const auto n = static_cast<std::int64_t>(weights.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double exact = scale * weights[static_cast<std::size_t>(i)];
    const double whole = std::floor(exact);
    quota[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(whole);
    frac[static_cast<std::size_t>(i)] = exact - whole;
  }
}

}  // namespace xrsim::kernels::omp
