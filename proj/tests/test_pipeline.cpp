#include <doctest.h>

#include <cmath>

#include "xrsim/error.hpp"
#include "xrsim/pipeline.hpp"

using namespace xrsim;
using namespace xrsim::pipeline;
using scenario::BlobPayload;
using scenario::FeaturesPayload;
using scenario::ImagePayload;

namespace {

// Every stage takes 1 ms: 1000 samples at 1e6/s, 1e6 bits at 1e9 bit/s.
scenario::ScenarioConfig one_ms_config() {
  scenario::ScenarioConfig c;
  c.device = {1e6, 1e6, 1e-3, 1e-3, 1e-3, 1000, 1000};
  c.uplink_payload = BlobPayload{1'000'000};
  c.downlink_payload = BlobPayload{1'000'000};
  c.link_rate_bps = 1e9;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("stage order and summation") {
  const auto trace = simulate_frame(one_ms_config());
  REQUIRE(trace.stages.size() == kStageCount);
  const Stage order[] = {Stage::sense,  Stage::encode,   Stage::uplink, Stage::compute,
                         Stage::render, Stage::downlink, Stage::display};
  double sum = 0.0;
  for (std::size_t i = 0; i < kStageCount; ++i) {
    CHECK(trace.stages[i].stage == order[i]);
    CHECK(trace.stages[i].duration == doctest::Approx(1e-3).epsilon(1e-15));
    sum += trace.stages[i].duration;
  }
  CHECK(trace.total == sum);
  CHECK(trace.total == doctest::Approx(7e-3).epsilon(1e-15));
  const auto rep = check_budget(trace, {});
  CHECK(rep.pass);
  CHECK(rep.slack == doctest::Approx(3e-3).epsilon(1e-12));
  CHECK(to_string(Stage::downlink) == "downlink");
}

TEST_CASE("budget check boundaries") {
  PipelineTrace t;
  t.total = 0.010;
  auto r = check_budget(t, {0.010});
  CHECK(r.pass);
  CHECK(r.slack == 0.0);
  t.total = 0.012;
  r = check_budget(t, {0.010});
  CHECK_FALSE(r.pass);
  CHECK(r.slack == doctest::Approx(-0.002).epsilon(1e-12));
  CHECK_THROWS_AS(check_budget(t, {0.0}), ValidationError);
}

TEST_CASE("a sparse sensing mask scales the sense stage") {
  auto cfg = one_ms_config();
  cfg.device.sense_samples = 64;
  sensing::MaskGrid mask(sensing::SensorGrid{1, 8, 8});
  for (std::size_t i = 0; i < 16; ++i) mask.set(i * 4);
  const auto full = simulate_frame(cfg);
  const auto sparse = simulate_frame(cfg, {&mask, nullptr, nullptr});
  CHECK(sparse.duration(Stage::sense) == 0.25 * full.duration(Stage::sense));
}

TEST_CASE("image uplink at a fixed 1.28 Gbps takes 1.25 ms") {
  auto cfg = one_ms_config();
  cfg.uplink_payload = ImagePayload{2'000'000, 0.8, false};
  cfg.link_rate_bps = 1.28e9;
  CHECK(simulate_frame(cfg).duration(Stage::uplink) == 1.25e-3);
}

TEST_CASE("link rate falls back to channel capacity") {
  auto cfg = one_ms_config();
  cfg.link_rate_bps.reset();
  cfg.channel.bandwidth_hz = 1000.0;
  cfg.channel.snr_db = 0.0;
  CHECK(link_rate(cfg) == 1000.0);
  CHECK(simulate_frame(cfg).duration(Stage::uplink) == 1000.0);
}

TEST_CASE("semantic payload never slows a stage") {
  auto cfg = one_ms_config();
  cfg.uplink_payload = ImagePayload{2'000'000, 0.8, false};
  const scenario::PayloadSpec features = FeaturesPayload{85, 32};
  const auto trad = simulate_frame(cfg);
  const auto sem = simulate_frame(cfg, {nullptr, nullptr, &features});
  for (std::size_t i = 0; i < kStageCount; ++i)
    CHECK(sem.stages[i].duration <= trad.stages[i].duration);
  CHECK(sem.duration(Stage::uplink) < trad.duration(Stage::uplink));
}

TEST_CASE("simulate_frame is deterministic and rejects bad stages") {
  auto cfg = one_ms_config();
  cfg.channel.mode = channel::MonteCarloMode{10};
  cfg.seed = 3;
  cfg.channel.seed = 3;
  const auto a = simulate_frame(cfg), b = simulate_frame(cfg);
  CHECK(a.total == b.total);

  cfg = one_ms_config();
  cfg.device.compute_time = -1.0;
  CHECK_THROWS_AS(simulate_frame(cfg), ValidationError);
  cfg = one_ms_config();
  cfg.link_rate_bps = 0.0;
  CHECK_THROWS_AS(simulate_frame(cfg), ValidationError);
}

TEST_CASE("uplink window") {
  CHECK(uplink_window({0.010}, 0.00875) == doctest::Approx(1.25e-3).epsilon(1e-12));
  CHECK(uplink_window({0.010}, 0.0) == 0.010);
  CHECK_THROWS_AS(uplink_window({0.010}, 0.010), ValidationError);
  CHECK_THROWS_AS(uplink_window({0.010}, -1.0), ValidationError);
}

TEST_CASE("rate requirements table") {
  const auto rows = rate_requirements_table({
      {"image", ImagePayload{2'000'000, 0.8, false}, 1.25e-3},
      {"model", BlobPayload{110'000'000}, 3.667e-3},
      {"features", FeaturesPayload{85, 32}, 1.25e-3},
      {"slow", BlobPayload{1000}, 1.0},
  });
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].payload_bits == 1.6e6);
  CHECK(rows[0].required_rate_bps == 1.28e9);
  CHECK(rows[0].band == Band::within);
  CHECK(rows[0].feasible);
  CHECK(rows[1].required_rate_bps == doctest::Approx(3.0e10).epsilon(0.02));
  CHECK(rows[1].band == Band::above);
  CHECK_FALSE(rows[1].feasible);
  CHECK(rows[2].required_rate_bps == doctest::Approx(2.176e6).epsilon(1e-12));
  CHECK(rows[0].required_rate_bps / rows[2].required_rate_bps >= 580.0);
  CHECK(rows[3].band == Band::below);
  CHECK(rows[3].feasible);
}

TEST_CASE("rate requests resolve derived windows") {
  auto cfg = one_ms_config();
  cfg.rates.push_back({"direct", BlobPayload{10}, 0.002, std::nullopt});
  cfg.rates.push_back({"derived", BlobPayload{10}, std::nullopt, 0.00875});
  const auto req = rate_requests(cfg);
  CHECK(req[0].window_s == 0.002);
  CHECK(req[1].window_s == doctest::Approx(0.00125).epsilon(1e-12));
}

}  // TEST_SUITE
