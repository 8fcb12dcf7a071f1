#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace xrsim::channel {

// Sentinel for a noiseless channel.
inline constexpr double kNoiselessDb = std::numeric_limits<double>::infinity();

struct AnalyticMode {
  bool operator==(const AnalyticMode&) const = default;
};

struct MonteCarloMode {
  std::uint64_t trials = 1;
  bool operator==(const MonteCarloMode&) const = default;
};

using ChannelMode = std::variant<AnalyticMode, MonteCarloMode>;

struct ChannelSpec {
  double bandwidth_hz = 1000.0;
  double snr_db = 0.0;
  // Channel uses available to one payload. The case study reads "two times
  // the channel bandwidth" as 2 * bandwidth_hz real symbols per payload.
  std::uint64_t n_symbols = 2000;
  ChannelMode mode = AnalyticMode{};
  std::uint64_t seed = 0;

  bool monte_carlo() const { return std::holds_alternative<MonteCarloMode>(mode); }
  std::uint64_t trials() const;

  bool operator==(const ChannelSpec&) const = default;
};

struct SnrSweep {
  double start_db = -20.0;
  double stop_db = 30.0;
  double step_db = 1.0;

  bool operator==(const SnrSweep&) const = default;
};

struct Feasibility {
  bool feasible;
  double margin_bits;
};

void validate(const ChannelSpec& spec);
void validate(const SnrSweep& sweep);

// Grid points start + k * step for k = 0..K, K = floor((stop - start) / step)
// with a small tolerance so that e.g. -20..30 step 0.5 yields 101 points.
std::vector<double> sweep_points(const SnrSweep& sweep);

double snr_linear(double snr_db);
double shannon_capacity(double bandwidth_hz, double snr_db);
double required_rate(double payload_bits, double window_s);

// Capacity-achieving code over n real channel uses: n * log2(1 + snr) bits.
double deliverable_bits(std::uint64_t n_symbols, double snr_db);
Feasibility digital_feasible(double payload_bits, const ChannelSpec& spec);

// Lowest SNR (dB) at which digital_feasible holds. Returns +infinity once
// payload / n_symbols exceeds the range of a double exponent.
double cliff_snr(double payload_bits, std::uint64_t n_symbols);

// Adds i.i.d. N(0, 1/snr_linear) noise per symbol. Deterministic in
// (symbols, snr_db, seed, stream). Caller normalizes to unit power.
std::vector<double> awgn_corrupt(std::span<const double> symbols, double snr_db,
                                 std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace xrsim::channel
