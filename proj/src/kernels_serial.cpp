#include <cmath>
#include <stdexcept>
#include <vector>

#include "kernels_detail.hpp"

namespace xrsim::kernels {

namespace serial {

void add_awgn(std::span<double> symbols, double sigma, std::uint64_t seed,
              std::uint64_t stream) {
  detail::add_awgn_all(symbols, sigma, seed, stream);
}

void deepsc_mc_sse(const DeepscMcInput& in, std::span<const double> snr_db,
                   std::span<double> sse) {
  detail::check_sizes(snr_db, sse);
  const auto points = detail::snr_points(snr_db);
  const std::uint64_t chunks = detail::chunk_count(in.trials, kTrialChunk);
  detail::TrialScratch scratch;
  std::vector<double> partial(points.size());
  std::fill(sse.begin(), sse.end(), 0.0);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    detail::deepsc_chunk_sse(in, points, c, scratch, partial);
    for (std::size_t p = 0; p < points.size(); ++p) sse[p] += partial[p];
  }
}

double sum_squares(std::span<const double> x) {
  const std::uint64_t chunks = detail::chunk_count(x.size(), kTrialChunk);
  double total = 0.0;
  for (std::uint64_t c = 0; c < chunks; ++c)
    total += detail::chunk_sum_squares(x, c);
  return total;
}

void proportional_quotas(std::span<const double> weights, double scale,
                         std::span<std::uint64_t> quota,
                         std::span<double> frac) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = scale * weights[i];
    const double whole = std::floor(exact);
    quota[i] = static_cast<std::uint64_t>(whole);
    frac[i] = exact - whole;
  }
}

}  // namespace serial

void deepsc_mc_sse(const DeepscMcInput& in, std::span<const double> snr_db,
                   std::span<double> sse, Exec exec) {
  if (exec == Exec::serial)
    serial::deepsc_mc_sse(in, snr_db, sse);
  else
    omp::deepsc_mc_sse(in, snr_db, sse);
}

double sum_squares(std::span<const double> x, Exec exec) {
  return exec == Exec::serial ? serial::sum_squares(x) : omp::sum_squares(x);
}

void proportional_quotas(std::span<const double> weights, double scale,
                         std::span<std::uint64_t> quota, std::span<double> frac,
                         Exec exec) {
  if (exec == Exec::serial)
    serial::proportional_quotas(weights, scale, quota, frac);
  else
    omp::proportional_quotas(weights, scale, quota, frac);
}

}  // namespace xrsim::kernels
