#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xrsim/channel.hpp"

namespace xrsim::broadcast {

// U users share S bits of semantically common content; user u additionally
// needs r_u bits of its own.
struct BroadcastGroup {
  std::uint64_t users = 1;
  std::uint64_t shared_bits = 0;
  std::vector<std::uint64_t> residual_bits;

  bool operator==(const BroadcastGroup&) const = default;
};

void validate(const BroadcastGroup& g);

// Sum over users of (S + r_u).
std::uint64_t unicast_total(const BroadcastGroup& g);
// S once plus every residual.
std::uint64_t broadcast_total(const BroadcastGroup& g);
// (U - 1) * S.
std::uint64_t savings(const BroadcastGroup& g);

struct Airtime {
  double capacity_bps;
  double broadcast_s;
  double unicast_s;
};

// Both totals over a common error-free link of the given rate.
Airtime airtime(const BroadcastGroup& g, double capacity_bps);
// Link rate is the Shannon capacity of spec.
Airtime airtime(const BroadcastGroup& g, const channel::ChannelSpec& spec);
// With per-user SNRs the shared link runs at the weakest user's capacity.
Airtime airtime(const BroadcastGroup& g, const channel::ChannelSpec& spec,
                std::span<const double> user_snr_db);

}  // namespace xrsim::broadcast
