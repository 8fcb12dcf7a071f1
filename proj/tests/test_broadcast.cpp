#include <doctest.h>

#include <algorithm>
#include <random>

#include "xrsim/broadcast.hpp"
#include "xrsim/error.hpp"

using namespace xrsim;
using namespace xrsim::broadcast;

TEST_SUITE("broadcast") {

TEST_CASE("four-user example") {
  const BroadcastGroup g{4, 1'000'000, {100'000, 100'000, 100'000, 100'000}};
  CHECK(unicast_total(g) == 4'400'000);
  CHECK(broadcast_total(g) == 1'400'000);
  CHECK(savings(g) == 3'000'000);
  const Airtime a = airtime(g, 1e9);
  CHECK(a.capacity_bps == 1e9);
  CHECK(a.broadcast_s == doctest::Approx(1.4e-3).epsilon(1e-15));
  CHECK(a.unicast_s == doctest::Approx(4.4e-3).epsilon(1e-15));
}

TEST_CASE("degenerate groups") {
  const BroadcastGroup one{1, 500, {70}};
  CHECK(unicast_total(one) == 570);
  CHECK(broadcast_total(one) == unicast_total(one));
  CHECK(savings(one) == 0);
  const Airtime a = airtime(one, 123.0);
  CHECK(a.broadcast_s == a.unicast_s);

  const BroadcastGroup no_shared{3, 0, {1, 2, 3}};
  CHECK(unicast_total(no_shared) == 6);
  CHECK(broadcast_total(no_shared) == 6);
  CHECK(savings(no_shared) == 0);

  const BroadcastGroup pure{9, 800, std::vector<std::uint64_t>(9, 0)};
  CHECK(broadcast_total(pure) == 800);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(BroadcastGroup{0, 1, {}}), ValidationError);
  CHECK_THROWS_AS(validate(BroadcastGroup{2, 1, {1}}), ValidationError);
  CHECK_THROWS_AS(validate(BroadcastGroup{2, ~0ULL, {0, 0}}), ValidationError);
  CHECK_THROWS_AS(airtime(BroadcastGroup{1, 1, {1}}, 0.0), ValidationError);
}

TEST_CASE("random groups: identity, ordering and permutation invariance") {
  std::mt19937_64 gen(81);
  std::uniform_int_distribution<std::uint64_t> users(1, 64), bits(0, 1ULL << 36);
  for (int trial = 0; trial < 1000; ++trial) {
    BroadcastGroup g{users(gen), bits(gen), {}};
    for (std::uint64_t u = 0; u < g.users; ++u) g.residual_bits.push_back(bits(gen));
    CHECK(savings(g) == (g.users - 1) * g.shared_bits);
    CHECK(unicast_total(g) - broadcast_total(g) == savings(g));
    CHECK(broadcast_total(g) <= unicast_total(g));
    CHECK((broadcast_total(g) == unicast_total(g)) == (g.users == 1 || g.shared_bits == 0));
    BroadcastGroup shuffled = g;
    std::shuffle(shuffled.residual_bits.begin(), shuffled.residual_bits.end(), gen);
    CHECK(unicast_total(shuffled) == unicast_total(g));
    CHECK(broadcast_total(shuffled) == broadcast_total(g));
  }
}

TEST_CASE("airtime over a channel uses the weakest user") {
  const BroadcastGroup g{3, 1000, {10, 20, 30}};
  channel::ChannelSpec spec;
  spec.bandwidth_hz = 1000.0;
  spec.snr_db = 30.0;
  CHECK(airtime(g, spec).capacity_bps == channel::shannon_capacity(1000.0, 30.0));
  const double snrs[] = {12.0, 0.0, 20.0};
  const Airtime a = airtime(g, spec, snrs);
  CHECK(a.capacity_bps == 1000.0);
  CHECK(a.broadcast_s == 1060.0 / 1000.0);
  CHECK(a.unicast_s == 3060.0 / 1000.0);
  CHECK_THROWS_AS(airtime(g, spec, std::span<const double>(snrs, 2)), ValidationError);
}

}  // TEST_SUITE
