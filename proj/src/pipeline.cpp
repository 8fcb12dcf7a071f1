#include "xrsim/pipeline.hpp"

#include <cmath>

#include "xrsim/channel.hpp"
#include "xrsim/error.hpp"

namespace xrsim::pipeline {

namespace {

constexpr const char* kModule = "pipeline";

StageTiming checked(Stage stage, double duration) {
  if (!std::isfinite(duration) || duration < 0.0)
    throw ValidationError(kModule, "simulate_frame", std::string(to_string(stage)),
                          "stage duration is " + std::to_string(duration) +
                              " (must be finite and >= 0)");
  return {stage, duration};
}

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::sense: return "sense";
    case Stage::encode: return "encode";
    case Stage::uplink: return "uplink";
    case Stage::compute: return "compute";
    case Stage::render: return "render";
    case Stage::downlink: return "downlink";
    case Stage::display: return "display";
  }
  return "unknown";
}

std::string_view to_string(Band b) {
  switch (b) {
    case Band::below: return "below";
    case Band::within: return "within";
    case Band::above: return "above";
  }
  return "unknown";
}

double PipelineTrace::duration(Stage s) const {
  for (const auto& st : stages)
    if (st.stage == s) return st.duration;
  return 0.0;
}

double link_rate(const scenario::ScenarioConfig& cfg) {
  if (cfg.link_rate_bps) return *cfg.link_rate_bps;
  return channel::shannon_capacity(cfg.channel.bandwidth_hz, cfg.channel.snr_db);
}

PipelineTrace simulate_frame(const scenario::ScenarioConfig& cfg,
                             const FrameInputs& inputs) {
  scenario::validate(cfg);
  const double rate = link_rate(cfg);
  const scenario::DeviceSpec& dev = cfg.device;

  const double sense_samples = inputs.mask
                                   ? static_cast<double>(inputs.mask->active_count())
                                   : static_cast<double>(dev.sense_samples);
  const double render_samples = inputs.ray_budget
                                    ? static_cast<double>(inputs.ray_budget->total())
                                    : static_cast<double>(dev.render_samples);
  const scenario::PayloadSpec& up =
      inputs.uplink_payload ? *inputs.uplink_payload : cfg.uplink_payload;

  PipelineTrace trace;
  trace.stages = {
      checked(Stage::sense, sense_samples / dev.sensor_throughput),
      checked(Stage::encode, dev.encode_time),
      checked(Stage::uplink, scenario::payload_bits(up) / rate),
      checked(Stage::compute, dev.compute_time),
      checked(Stage::render, render_samples / dev.render_throughput),
      checked(Stage::downlink, scenario::payload_bits(cfg.downlink_payload) / rate),
      checked(Stage::display, dev.display_time),
  };
  double total = 0.0;
  for (const auto& st : trace.stages) total += st.duration;
  trace.total = total;
  return trace;
}

BudgetReport check_budget(const PipelineTrace& trace,
                          const scenario::LatencyBudget& budget) {
  if (!(budget.motion_to_photon > 0.0))
    throw ValidationError(kModule, "check_budget", "motion_to_photon", "must be > 0");
  return {trace, budget.motion_to_photon, trace.total <= budget.motion_to_photon,
          budget.motion_to_photon - trace.total};
}

double uplink_window(const scenario::LatencyBudget& budget, double other_stage_total) {
  if (!(other_stage_total >= 0.0))
    throw ValidationError(kModule, "uplink_window", "other_stage_total", "must be >= 0");
  const double window = budget.motion_to_photon - other_stage_total;
  if (!(window > 0.0))
    throw ValidationError(kModule, "uplink_window", "other_stage_total",
                          "budget already exhausted (window " + std::to_string(window) +
                              " s)");
  return window;
}

std::vector<RateRow> rate_requirements_table(const std::vector<RateRequest>& requests) {
  std::vector<RateRow> rows;
  rows.reserve(requests.size());
  for (const auto& r : requests) {
    const double bits = scenario::payload_bits(r.payload);
    const double rate = channel::required_rate(bits, r.window_s);
    const Band band = rate < kNetworkMinRate    ? Band::below
                      : rate <= kNetworkPeakRate ? Band::within
                                                 : Band::above;
    rows.push_back({r.label, bits, r.window_s, rate, band, rate <= kNetworkPeakRate});
  }
  return rows;
}

std::vector<RateRequest> rate_requests(const scenario::ScenarioConfig& cfg) {
  std::vector<RateRequest> out;
  for (const auto& e : cfg.rates) {
    const double window =
        e.window_s ? *e.window_s : uplink_window(cfg.budget, e.other_stage_total.value_or(0.0));
    out.push_back({e.label, e.payload, window});
  }
  return out;
}

}  // namespace xrsim::pipeline
