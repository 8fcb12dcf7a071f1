#include "xrsim/channel.hpp"

#include <cmath>
#include <string>

#include "xrsim/error.hpp"
#include "xrsim/kernels.hpp"

namespace xrsim::channel {

namespace {

constexpr const char* kModule = "channel";

// 2^x - 1 overflows a double beyond this exponent.
constexpr double kMaxBitsPerSymbol = 1023.0;

}  // namespace

std::uint64_t ChannelSpec::trials() const {
  if (const auto* mc = std::get_if<MonteCarloMode>(&mode)) return mc->trials;
  return 0;
}

void validate(const ChannelSpec& spec) {
  if (!(spec.bandwidth_hz > 0.0) || !std::isfinite(spec.bandwidth_hz))
    throw ValidationError(kModule, "validate", "bandwidth_hz",
                          "must be finite and > 0");
  if (std::isnan(spec.snr_db))
    throw ValidationError(kModule, "validate", "snr_db", "must not be NaN");
  if (spec.n_symbols < 1)
    throw ValidationError(kModule, "validate", "n_symbols", "must be >= 1");
  if (spec.monte_carlo() && spec.trials() < 1)
    throw ValidationError(kModule, "validate", "mode.monte_carlo.trials",
                          "must be >= 1");
}

void validate(const SnrSweep& sweep) {
  if (!std::isfinite(sweep.start_db) || !std::isfinite(sweep.stop_db))
    throw ValidationError(kModule, "validate", "sweep", "bounds must be finite");
  if (!(sweep.step_db > 0.0))
    throw ValidationError(kModule, "validate", "step_db", "must be > 0");
  if (sweep.start_db > sweep.stop_db)
    throw ValidationError(kModule, "validate", "start_db",
                          "must be <= stop_db");
}

std::vector<double> sweep_points(const SnrSweep& sweep) {
  validate(sweep);
  const auto last = static_cast<std::uint64_t>(
      std::floor((sweep.stop_db - sweep.start_db) / sweep.step_db + 1e-9));
  std::vector<double> points;
  points.reserve(last + 1);
  for (std::uint64_t k = 0; k <= last; ++k)
    points.push_back(sweep.start_db + static_cast<double>(k) * sweep.step_db);
  return points;
}

double snr_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double shannon_capacity(double bandwidth_hz, double snr_db) {
  if (!(bandwidth_hz > 0.0))
    throw ValidationError(kModule, "shannon_capacity", "bandwidth_hz",
                          "must be > 0");
  return bandwidth_hz * std::log2(1.0 + snr_linear(snr_db));
}

double required_rate(double payload_bits, double window_s) {
  if (!(window_s > 0.0))
    throw ValidationError(kModule, "required_rate", "window",
                          "must be > 0, got " + std::to_string(window_s));
  if (payload_bits < 0.0)
    throw ValidationError(kModule, "required_rate", "payload", "must be >= 0");
  return payload_bits / window_s;
}

double deliverable_bits(std::uint64_t n_symbols, double snr_db) {
  return static_cast<double>(n_symbols) * std::log2(1.0 + snr_linear(snr_db));
}

Feasibility digital_feasible(double payload_bits, const ChannelSpec& spec) {
  validate(spec);
  const double bound = deliverable_bits(spec.n_symbols, spec.snr_db);
  return {payload_bits <= bound, bound - payload_bits};
}

double cliff_snr(double payload_bits, std::uint64_t n_symbols) {
  if (!(payload_bits > 0.0))
    throw ValidationError(kModule, "cliff_snr", "payload", "must be > 0");
  if (n_symbols == 0)
    throw ValidationError(kModule, "cliff_snr", "n_symbols", "must be > 0");
  const double rate = payload_bits / static_cast<double>(n_symbols);
  if (rate > kMaxBitsPerSymbol) return kNoiselessDb;
  // expm1 keeps precision for small per-symbol rates.
  return 10.0 * std::log10(std::expm1(rate * std::log(2.0)));
}

std::vector<double> awgn_corrupt(std::span<const double> symbols, double snr_db,
                                 std::uint64_t seed, std::uint64_t stream) {
  std::vector<double> out(symbols.begin(), symbols.end());
  const double gamma = snr_linear(snr_db);
  const double sigma = std::isinf(gamma) ? 0.0 : std::sqrt(1.0 / gamma);
  kernels::omp::add_awgn(out, sigma, seed, stream);
  return out;
}

}  // namespace xrsim::channel
