#pragma once

// Serial per-frame latency model: sense, encode, uplink, compute, render,
// downlink, display. Stages do not overlap.

#include <string>
#include <string_view>
#include <vector>

#include "xrsim/rendering.hpp"
#include "xrsim/scenario.hpp"
#include "xrsim/sensing.hpp"

namespace xrsim::pipeline {

// Peak rates of deployed wireless networks, bits/s.
inline constexpr double kNetworkMinRate = 0.1e9;
inline constexpr double kNetworkPeakRate = 2.0e9;

enum class Stage { sense, encode, uplink, compute, render, downlink, display };

inline constexpr std::size_t kStageCount = 7;

std::string_view to_string(Stage s);

struct StageTiming {
  Stage stage;
  double duration;  // seconds
};

struct PipelineTrace {
  std::vector<StageTiming> stages;  // pipeline order
  double total = 0.0;

  double duration(Stage s) const;
};

struct BudgetReport {
  PipelineTrace trace;
  double budget;
  bool pass;
  double slack;  // budget - total, negative when over
};

// Optional per-frame overrides; null means "use the scenario's full-frame
// figures". The semantic pipeline passes its mask, ray budget and payload.
struct FrameInputs {
  const sensing::MaskGrid* mask = nullptr;
  const rendering::RayBudget* ray_budget = nullptr;
  const scenario::PayloadSpec* uplink_payload = nullptr;
};

// Fixed link_rate_bps when configured, else Shannon capacity of the channel.
double link_rate(const scenario::ScenarioConfig& cfg);

PipelineTrace simulate_frame(const scenario::ScenarioConfig& cfg,
                             const FrameInputs& inputs = {});

BudgetReport check_budget(const PipelineTrace& trace,
                          const scenario::LatencyBudget& budget);

// Time left for the uplink once every other stage is paid for.
double uplink_window(const scenario::LatencyBudget& budget, double other_stage_total);

struct RateRequest {
  std::string label;
  scenario::PayloadSpec payload;
  double window_s;
};

enum class Band { below, within, above };

std::string_view to_string(Band b);

struct RateRow {
  std::string label;
  double payload_bits;
  double window_s;
  double required_rate_bps;
  Band band;       // position against the 0.1-2.0 Gbps network range
  bool feasible;   // required rate <= network peak
};

std::vector<RateRow> rate_requirements_table(const std::vector<RateRequest>& requests);

// Resolves window_s / other_stage_total of every scenario rate entry.
std::vector<RateRequest> rate_requests(const scenario::ScenarioConfig& cfg);

}  // namespace xrsim::pipeline
