#pragma once

// Payload and distortion models for three uplink pipelines carrying a
// human-mesh feature vector over an AWGN channel:
//   traditional  image bits through a capacity-achieving digital link
//   ssc          10-dim quantized latent through the same digital link
//   deepsc       analog features spread over channel symbols (MMSE combining)
// Distortions are normalized feature MSE in [0, 1]; 1 is the prior variance,
// i.e. the receiver falling back to the prior mean. The task metric is a
// proxy, not a pose error in millimetres.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xrsim/channel.hpp"
#include "xrsim/kernels.hpp"

namespace xrsim::semcodec {

inline constexpr std::size_t kCameraDims = 3;
inline constexpr std::size_t kShapeDims = 10;
inline constexpr std::size_t kPoseDims = 72;
inline constexpr std::size_t kFeatureDims = kCameraDims + kShapeDims + kPoseDims;
inline constexpr std::size_t kLatentDims = 10;
inline constexpr double kMaxDistortion = 1.0;
inline constexpr double kQuantizerRange = 4.0;
inline constexpr std::uint32_t kMaxBitsPerDim = 48;
inline constexpr std::uint64_t kProjectionSeed = 0x5eed'85'10ULL;

static_assert(kFeatureDims == 85);

enum class Scheme { traditional, ssc, deepsc };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

// Unit-variance semantic feature vector: camera (3), shape (10), pose (72).
struct FeaturePayload {
  std::array<double, kFeatureDims> values{};

  std::span<const double, kCameraDims> camera() const {
    return std::span<const double, kFeatureDims>(values).first<kCameraDims>();
  }
  std::span<const double, kShapeDims> shape() const {
    return std::span<const double, kFeatureDims>(values)
        .subspan<kCameraDims, kShapeDims>();
  }
  std::span<const double, kPoseDims> pose() const {
    return std::span<const double, kFeatureDims>(values).last<kPoseDims>();
  }

  static FeaturePayload from_parts(std::span<const double, kCameraDims> camera,
                                   std::span<const double, kShapeDims> shape,
                                   std::span<const double, kPoseDims> pose);

  bool operator==(const FeaturePayload&) const = default;
};

struct LatentCode {
  std::array<std::uint64_t, kLatentDims> levels{};
  std::array<double, kLatentDims> values{};  // dequantized
  std::uint32_t bits_per_dim = 0;

  double payload_bits() const {
    return static_cast<double>(kLatentDims) * bits_per_dim;
  }
};

// Fixed 10 x 85 matrix with orthonormal rows, generated from
// kProjectionSeed by Gram-Schmidt on Gaussian draws.
using Projection = std::array<std::array<double, kFeatureDims>, kLatentDims>;
const Projection& latent_projection();

// Uniform mid-rise quantizer over [-4, 4] with 2^bits levels; values outside
// the range saturate to the outermost level. bits = 0 collapses to 0.
std::uint64_t quantize_level(double x, std::uint32_t bits);
double dequantize_level(std::uint64_t level, std::uint32_t bits);

// E[(z - Q(z))^2] for z ~ N(0, 1): exact per-cell quadrature up to 14 bits,
// step^2/12 interior term plus exact clipping tails above that.
double quantizer_mse(std::uint32_t bits);

LatentCode ssc_encode(const FeaturePayload& f, std::uint32_t bits_per_dim);
FeaturePayload ssc_decode(const LatentCode& code);

struct SchemeResult {
  Scheme scheme;
  double snr_db;
  double feature_mse;
  double task_proxy;
  double payload_bits;
  bool outage;

  bool operator==(const SchemeResult&) const = default;
};

// Source model: features live in the row space of latent_projection() with
// unit-variance latent coordinates, so the projection residual is zero and
// the delivered distortion is the quantizer's.
SchemeResult ssc_distortion(const channel::ChannelSpec& spec, double latent_bits,
                            std::uint32_t bits_per_dim);

// Spread factor per feature: floor(n / 85), plus one for the n mod 85
// lowest-index features.
std::vector<std::uint64_t> spread_factors(std::uint64_t n_symbols);

// Per-feature analytic MSE 1 / (1 + m * gamma).
double deepsc_feature_mse(std::uint64_t spread, double snr_db);
// Mean of deepsc_feature_mse over all 85 features.
double deepsc_analytic_mse(std::uint64_t n_symbols, double snr_db);
// Mean squared feature error over spec.trials() independent transmissions.
double deepsc_monte_carlo_mse(const channel::ChannelSpec& spec,
                              kernels::Exec exec = kernels::Exec::parallel);
// Same trials evaluated at every SNR in snr_db (spec.snr_db is ignored).
// Entry i equals deepsc_monte_carlo_mse at snr_db[i] bit for bit.
std::vector<double> deepsc_monte_carlo_mse(const channel::ChannelSpec& spec,
                                           std::span<const double> snr_db,
                                           kernels::Exec exec = kernels::Exec::parallel);

struct DeepscOutcome {
  FeaturePayload estimate;  // one noisy reception of the given payload
  SchemeResult result;      // distortion, analytic or Monte-Carlo per spec.mode
};

DeepscOutcome deepsc_transmit(const FeaturePayload& f,
                              const channel::ChannelSpec& spec,
                              kernels::Exec exec = kernels::Exec::parallel);

// Monotone non-increasing bits -> distortion curve with curve(0) = 1.
// Construction validates the shape; a curve that fails is rejected.
class RateQualityCurve {
 public:
  using Fn = std::function<double(double)>;

  RateQualityCurve(std::string name, Fn fn, double probe_max_bits = 1e9);

  // 1 / (1 + bits / b0)
  static RateQualityCurve hyperbolic(double b0 = 1e5);
  // Piecewise linear through (bits, distortion) points, flat past the last.
  static RateQualityCurve tabulated(std::vector<std::pair<double, double>> points);

  double operator()(double bits) const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

enum class TraditionalMode { adaptive, fixed };

SchemeResult traditional_distortion(double image_bits,
                                    const channel::ChannelSpec& spec,
                                    const RateQualityCurve& curve,
                                    TraditionalMode mode = TraditionalMode::adaptive);

// sqrt(feature_mse); strictly increasing on [0, 1].
double task_proxy(double feature_mse);

struct SweepOptions {
  std::uint32_t bits_per_dim = 32;
  double image_bits = 1.6e6;
  double feature_bits = static_cast<double>(kFeatureDims) * 32.0;
  TraditionalMode traditional_mode = TraditionalMode::adaptive;
  RateQualityCurve curve = RateQualityCurve::hyperbolic();
};

struct SweepResult {
  std::vector<SchemeResult> rows;  // ordered by (scheme, snr_db)
};

SweepResult run_sweep(const std::vector<Scheme>& schemes,
                      const channel::SnrSweep& sweep,
                      const channel::ChannelSpec& spec,
                      const SweepOptions& options = {},
                      kernels::Exec exec = kernels::Exec::parallel);

inline constexpr std::string_view kSweepCsvHeader =
    "scheme,snr_db,feature_mse,task_proxy,payload_bits,outage";

}  // namespace xrsim::semcodec
