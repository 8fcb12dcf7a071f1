#include "xrsim/broadcast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "xrsim/error.hpp"

namespace xrsim::broadcast {

namespace {

constexpr const char* kModule = "broadcast";

std::uint64_t residual_sum(const BroadcastGroup& g) {
  return std::accumulate(g.residual_bits.begin(), g.residual_bits.end(),
                         std::uint64_t{0});
}

}  // namespace

void validate(const BroadcastGroup& g) {
  if (g.users < 1)
    throw ValidationError(kModule, "validate", "users", "must be >= 1");
  if (g.residual_bits.size() != g.users)
    throw ValidationError(kModule, "validate", "residual_bits",
                          "expected " + std::to_string(g.users) + " entries, got " +
                              std::to_string(g.residual_bits.size()));
  // Unicast total must fit in 64 bits.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (g.shared_bits > 0 && g.users > kMax / g.shared_bits)
    throw ValidationError(kModule, "validate", "shared_bits", "total overflows");
  std::uint64_t acc = g.users * g.shared_bits;
  for (std::uint64_t r : g.residual_bits) {
    if (r > kMax - acc)
      throw ValidationError(kModule, "validate", "residual_bits", "total overflows");
    acc += r;
  }
}

std::uint64_t unicast_total(const BroadcastGroup& g) {
  validate(g);
  return g.users * g.shared_bits + residual_sum(g);
}

std::uint64_t broadcast_total(const BroadcastGroup& g) {
  validate(g);
  return g.shared_bits + residual_sum(g);
}

std::uint64_t savings(const BroadcastGroup& g) {
  return unicast_total(g) - broadcast_total(g);
}

Airtime airtime(const BroadcastGroup& g, double capacity_bps) {
  if (!(capacity_bps > 0.0) || !std::isfinite(capacity_bps))
    throw ValidationError(kModule, "airtime", "capacity",
                          "must be finite and > 0");
  return {capacity_bps, static_cast<double>(broadcast_total(g)) / capacity_bps,
          static_cast<double>(unicast_total(g)) / capacity_bps};
}

Airtime airtime(const BroadcastGroup& g, const channel::ChannelSpec& spec) {
  channel::validate(spec);
  return airtime(g, channel::shannon_capacity(spec.bandwidth_hz, spec.snr_db));
}

Airtime airtime(const BroadcastGroup& g, const channel::ChannelSpec& spec,
                std::span<const double> user_snr_db) {
  if (user_snr_db.empty()) return airtime(g, spec);
  if (user_snr_db.size() != g.users)
    throw ValidationError(kModule, "airtime", "user_snr_db",
                          "expected one SNR per user");
  channel::validate(spec);
  const double weakest = *std::min_element(user_snr_db.begin(), user_snr_db.end());
  return airtime(g, channel::shannon_capacity(spec.bandwidth_hz, weakest));
}

}  // namespace xrsim::broadcast
