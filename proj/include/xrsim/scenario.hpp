#pragma once

// Experiment descriptions. A scenario is a JSON document; load_scenario
// parses and validates it, serialize_scenario writes it back with every
// default made explicit (load_scenario(serialize_scenario(c)) == c).
// Sizes are bits, times seconds, SNR dB. See docs/scenario.md.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xrsim/broadcast.hpp"
#include "xrsim/channel.hpp"
#include "xrsim/rendering.hpp"
#include "xrsim/semcodec.hpp"
#include "xrsim/sensing.hpp"

namespace xrsim::scenario {

inline constexpr double kDefaultMotionToPhoton = 0.010;
inline constexpr double kDefaultDisplayTime = 0.001;
inline constexpr double kDefaultEncodeTime = 0.0;
inline constexpr std::uint64_t kDefaultBitsPerFeature = 32;

struct DeviceSpec {
  double sensor_throughput = 0.0;  // samples/s
  double render_throughput = 0.0;  // samples/s
  double compute_time = 0.0;
  double display_time = kDefaultDisplayTime;
  double encode_time = kDefaultEncodeTime;
  // Per-frame sample counts of the unmasked sensor and the full renderer.
  std::uint64_t sense_samples = 0;
  std::uint64_t render_samples = 0;

  bool operator==(const DeviceSpec&) const = default;
};

struct ImagePayload {
  std::uint64_t pixel_count = 0;
  double bpp = 0.0;
  bool panoramic = false;
  bool operator==(const ImagePayload&) const = default;
};

struct FeaturesPayload {
  std::uint64_t count = 0;
  std::uint64_t bits_per_feature = kDefaultBitsPerFeature;
  bool operator==(const FeaturesPayload&) const = default;
};

struct LatentPayload {
  std::uint64_t dims = 0;
  std::uint64_t bits_per_dim = 0;
  bool operator==(const LatentPayload&) const = default;
};

struct BlobPayload {
  std::uint64_t bits = 0;
  bool operator==(const BlobPayload&) const = default;
};

using PayloadSpec = std::variant<ImagePayload, FeaturesPayload, LatentPayload, BlobPayload>;

struct LatencyBudget {
  double motion_to_photon = kDefaultMotionToPhoton;
  bool operator==(const LatencyBudget&) const = default;
};

// One row of the required-rate table. The window is either given directly
// or derived as motion_to_photon - other_stage_total.
struct RateEntry {
  std::string label;
  PayloadSpec payload;
  std::optional<double> window_s;
  std::optional<double> other_stage_total;
  bool operator==(const RateEntry&) const = default;
};

struct HyperbolicCurve {
  double b0 = 1e5;
  bool operator==(const HyperbolicCurve&) const = default;
};

struct TableCurve {
  std::vector<std::pair<double, double>> points;
  bool operator==(const TableCurve&) const = default;
};

using CurveSpec = std::variant<HyperbolicCurve, TableCurve>;

struct SweepSection {
  channel::SnrSweep range;
  std::vector<semcodec::Scheme> schemes{semcodec::Scheme::traditional,
                                        semcodec::Scheme::ssc,
                                        semcodec::Scheme::deepsc};
  std::uint32_t bits_per_dim = 32;
  semcodec::TraditionalMode traditional_mode = semcodec::TraditionalMode::adaptive;
  CurveSpec curve = HyperbolicCurve{};
  bool operator==(const SweepSection&) const = default;
};

struct UniformWeights {
  bool operator==(const UniformWeights&) const = default;
};
struct BlobWeights {
  double cy = 0.0;
  double cx = 0.0;
  double sigma = 1.0;
  bool operator==(const BlobWeights&) const = default;
};
struct CsvWeights {
  std::string path;  // relative paths resolve against the scenario file
  bool operator==(const CsvWeights&) const = default;
};
struct InlineWeights {
  std::vector<double> values;
  bool operator==(const InlineWeights&) const = default;
};

using WeightSource = std::variant<UniformWeights, BlobWeights, CsvWeights, InlineWeights>;

struct FeedbackSection {
  sensing::FeedbackState state;
  std::uint32_t dt = 1;
  bool operator==(const FeedbackSection&) const = default;
};

struct SensingSection {
  sensing::SensorGrid grid;
  WeightSource relevance = UniformWeights{};
  double coverage_target = 1.0;
  double per_sample_cost = 0.0;
  std::optional<FeedbackSection> feedback;
  bool operator==(const SensingSection&) const = default;
};

struct RenderSection {
  rendering::RenderConfig config;
  std::uint32_t n_min = 1;
  std::uint64_t total_budget = 0;
  WeightSource importance = UniformWeights{};
  double restoration_discount = 1.0;
  bool operator==(const RenderSection&) const = default;
};

struct BroadcastSection {
  broadcast::BroadcastGroup group;
  std::vector<double> user_snr_db;
  bool operator==(const BroadcastSection&) const = default;
};

struct ScenarioConfig {
  DeviceSpec device;
  PayloadSpec uplink_payload;
  PayloadSpec downlink_payload;
  channel::ChannelSpec channel;
  LatencyBudget budget;
  std::optional<std::uint64_t> seed;

  // Fixed link rate; when absent the link runs at the channel's capacity.
  std::optional<double> link_rate_bps;
  // Uplink payload of the semantic pipeline variant.
  std::optional<PayloadSpec> semantic_uplink_payload;

  std::vector<RateEntry> rates;
  std::optional<SweepSection> sweep;
  std::optional<SensingSection> sensing;
  std::optional<RenderSection> render;
  std::optional<BroadcastSection> broadcast;

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig load_scenario(std::string_view text);
std::string serialize_scenario(const ScenarioConfig& cfg);

// Throws ValidationError naming the violated invariant.
void validate(const ScenarioConfig& cfg);
void validate(const PayloadSpec& spec);

// image: pixels * bpp (* 3 if panoramic); features: count * bits;
// latent: dims * bits; blob: bits.
double payload_bits(const PayloadSpec& spec);

// Makes the seed override of the command line take effect everywhere.
void override_seed(ScenarioConfig& cfg, std::uint64_t seed);

semcodec::RateQualityCurve make_curve(const CurveSpec& spec);

}  // namespace xrsim::scenario
