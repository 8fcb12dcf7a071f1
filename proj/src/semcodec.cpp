#include "xrsim/semcodec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xrsim/error.hpp"
#include "xrsim/rng.hpp"

namespace xrsim::semcodec {

namespace {

constexpr const char* kModule = "semcodec";

// Above this many bits the interior quantizer error is step^2 / 12 to
// better than 1e-7 relative; below it every cell is integrated.
constexpr std::uint32_t kExactQuadratureBits = 14;

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Upper tail P(Z > a).
double upper_tail(double a) { return 0.5 * std::erfc(a / std::numbers::sqrt2); }

// Integral over [a, inf) of (z - c)^2 phi(z) dz.
double tail_moment(double a, double c) {
  return (1.0 + c * c) * upper_tail(a) + (a - 2.0 * c) * std_normal_pdf(a);
}

// Widest panel of the cell quadrature; keeps coarse (1-3 bit) cells exact
// to ~1e-15.
constexpr double kMaxPanel = 0.25;

// Integral over one panel of (z - c)^2 phi(z) dz, 5-point Gauss-Legendre.
double panel_moment(double lo, double hi, double c) {
  static constexpr std::array<double, 5> kNodes{
      0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
      0.9061798459386640};
  static constexpr std::array<double, 5> kWeights{
      0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
      0.2369268850561891, 0.2369268850561891};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    const double z = mid + half * kNodes[i];
    acc += kWeights[i] * (z - c) * (z - c) * std_normal_pdf(z);
  }
  return acc * half;
}

double cell_moment(double lo, double hi, double c) {
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kMaxPanel)));
  const double width = (hi - lo) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p)
    acc += panel_moment(lo + p * width, lo + (p + 1) * width, c);
  return acc;
}

double compute_quantizer_mse(std::uint32_t bits) {
  if (bits == 0) return 1.0;
  const std::uint64_t levels = std::uint64_t{1} << bits;
  const double step = 2.0 * kQuantizerRange / static_cast<double>(levels);
  const double top_lo = kQuantizerRange - step;
  const double top_center = kQuantizerRange - 0.5 * step;
  // Outermost cells extend to infinity; symmetric, so count the top twice.
  const double tails = 2.0 * tail_moment(top_lo, top_center);
  if (levels == 2) return tails;

  double interior = 0.0;
  if (bits <= kExactQuadratureBits) {
    for (std::uint64_t i = 1; i + 1 < levels; ++i) {
      const double lo = -kQuantizerRange + static_cast<double>(i) * step;
      interior += cell_moment(lo, lo + step, lo + 0.5 * step);
    }
  } else {
    const double inside = 1.0 - 2.0 * upper_tail(top_lo);
    interior = step * step / 12.0 * inside;
  }
  return interior + tails;
}

Projection build_projection() {
  Projection rows{};
  NormalStream draws(kProjectionSeed, 0);
  for (std::size_t r = 0; r < kLatentDims; ++r) {
    for (auto& v : rows[r]) v = draws.next();
    for (std::size_t p = 0; p < r; ++p) {
      double dot = 0.0;
      for (std::size_t j = 0; j < kFeatureDims; ++j) dot += rows[r][j] * rows[p][j];
      for (std::size_t j = 0; j < kFeatureDims; ++j) rows[r][j] -= dot * rows[p][j];
    }
    double norm = 0.0;
    for (double v : rows[r]) norm += v * v;
    norm = std::sqrt(norm);
    for (auto& v : rows[r]) v /= norm;
  }
  return rows;
}

void check_bits(std::uint32_t bits, const char* op) {
  if (bits > kMaxBitsPerDim)
    throw ValidationError(kModule, op, "bits_per_dim",
                          "must be <= " + std::to_string(kMaxBitsPerDim));
}

SchemeResult make_result(Scheme scheme, double snr_db, double mse,
                         double payload_bits, bool outage) {
  return {scheme, snr_db, mse, task_proxy(mse), payload_bits, outage};
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::traditional: return "traditional";
    case Scheme::ssc: return "ssc";
    case Scheme::deepsc: return "deepsc";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "traditional") return Scheme::traditional;
  if (name == "ssc") return Scheme::ssc;
  if (name == "deepsc") return Scheme::deepsc;
  throw ValidationError(kModule, "scheme_from_string", "scheme",
                        "unknown scheme '" + std::string(name) +
                            "' (expected traditional, ssc or deepsc)");
}

FeaturePayload FeaturePayload::from_parts(
    std::span<const double, kCameraDims> camera,
    std::span<const double, kShapeDims> shape,
    std::span<const double, kPoseDims> pose) {
  FeaturePayload f;
  auto out = std::copy(camera.begin(), camera.end(), f.values.begin());
  out = std::copy(shape.begin(), shape.end(), out);
  std::copy(pose.begin(), pose.end(), out);
  return f;
}

const Projection& latent_projection() {
  static const Projection rows = build_projection();
  return rows;
}

std::uint64_t quantize_level(double x, std::uint32_t bits) {
  check_bits(bits, "quantize");
  if (bits == 0) return 0;
  const std::uint64_t levels = std::uint64_t{1} << bits;
  const double step = 2.0 * kQuantizerRange / static_cast<double>(levels);
  const double pos = std::floor((x + kQuantizerRange) / step);
  if (!(pos > 0.0)) return 0;
  if (pos >= static_cast<double>(levels - 1)) return levels - 1;
  return static_cast<std::uint64_t>(pos);
}

double dequantize_level(std::uint64_t level, std::uint32_t bits) {
  check_bits(bits, "dequantize");
  if (bits == 0) return 0.0;
  const double step =
      2.0 * kQuantizerRange / static_cast<double>(std::uint64_t{1} << bits);
  return -kQuantizerRange + (static_cast<double>(level) + 0.5) * step;
}

double quantizer_mse(std::uint32_t bits) {
  check_bits(bits, "quantizer_mse");
  static const auto table = [] {
    std::array<double, kMaxBitsPerDim + 1> t{};
    for (std::uint32_t b = 0; b <= kMaxBitsPerDim; ++b) t[b] = compute_quantizer_mse(b);
    // Past ~40 bits each extra bit changes the MSE by less than an ulp and
    // tail rounding can tick upward; the exact sequence is decreasing.
    for (std::uint32_t b = 2; b <= kMaxBitsPerDim; ++b) t[b] = std::min(t[b], t[b - 1]);
    return t;
  }();
  return table[bits];
}

LatentCode ssc_encode(const FeaturePayload& f, std::uint32_t bits_per_dim) {
  check_bits(bits_per_dim, "ssc_encode");
  const Projection& rows = latent_projection();
  LatentCode code;
  code.bits_per_dim = bits_per_dim;
  for (std::size_t r = 0; r < kLatentDims; ++r) {
    double z = 0.0;
    for (std::size_t j = 0; j < kFeatureDims; ++j) z += rows[r][j] * f.values[j];
    code.levels[r] = quantize_level(z, bits_per_dim);
    code.values[r] = dequantize_level(code.levels[r], bits_per_dim);
  }
  return code;
}

FeaturePayload ssc_decode(const LatentCode& code) {
  const Projection& rows = latent_projection();
  FeaturePayload f;
  for (std::size_t r = 0; r < kLatentDims; ++r)
    for (std::size_t j = 0; j < kFeatureDims; ++j)
      f.values[j] += rows[r][j] * code.values[r];
  return f;
}

SchemeResult ssc_distortion(const channel::ChannelSpec& spec, double latent_bits,
                            std::uint32_t bits_per_dim) {
  check_bits(bits_per_dim, "ssc_distortion");
  if (latent_bits != static_cast<double>(kLatentDims) * bits_per_dim)
    throw ValidationError(kModule, "ssc_distortion", "latent_bits",
                          "must equal 10 * bits_per_dim");
  if (!channel::digital_feasible(latent_bits, spec).feasible)
    return make_result(Scheme::ssc, spec.snr_db, kMaxDistortion, latent_bits, true);
  // A code coarser than the prior (1 bit/dim: MSE 1.81) is discarded in
  // favour of the prior mean.
  return make_result(Scheme::ssc, spec.snr_db,
                     std::min(quantizer_mse(bits_per_dim), kMaxDistortion), latent_bits,
                     false);
}

std::vector<std::uint64_t> spread_factors(std::uint64_t n_symbols) {
  if (n_symbols < kFeatureDims)
    throw ValidationError(kModule, "deepsc_transmit", "n_symbols",
                          "must be >= 85 (one symbol per feature), got " +
                              std::to_string(n_symbols));
  const std::uint64_t base = n_symbols / kFeatureDims;
  const std::uint64_t extra = n_symbols % kFeatureDims;
  std::vector<std::uint64_t> m(kFeatureDims, base);
  for (std::uint64_t j = 0; j < extra; ++j) ++m[j];
  return m;
}

double deepsc_feature_mse(std::uint64_t spread, double snr_db) {
  const double gamma = channel::snr_linear(snr_db);
  if (std::isinf(gamma)) return 0.0;
  return 1.0 / (1.0 + static_cast<double>(spread) * gamma);
}

double deepsc_analytic_mse(std::uint64_t n_symbols, double snr_db) {
  double acc = 0.0;
  for (std::uint64_t m : spread_factors(n_symbols)) acc += deepsc_feature_mse(m, snr_db);
  return acc / static_cast<double>(kFeatureDims);
}

std::vector<double> deepsc_monte_carlo_mse(const channel::ChannelSpec& spec,
                                           std::span<const double> snr_db,
                                           kernels::Exec exec) {
  channel::validate(spec);
  spread_factors(spec.n_symbols);
  const std::uint64_t trials = spec.monte_carlo() ? spec.trials() : 1;
  const kernels::DeepscMcInput in{kFeatureDims, spec.n_symbols, trials, spec.seed};
  std::vector<double> mse(snr_db.size());
  kernels::deepsc_mc_sse(in, snr_db, mse, exec);
  for (double& v : mse)
    v /= static_cast<double>(trials) * static_cast<double>(kFeatureDims);
  return mse;
}

double deepsc_monte_carlo_mse(const channel::ChannelSpec& spec, kernels::Exec exec) {
  const double snr[] = {spec.snr_db};
  return deepsc_monte_carlo_mse(spec, snr, exec).front();
}

DeepscOutcome deepsc_transmit(const FeaturePayload& f,
                              const channel::ChannelSpec& spec,
                              kernels::Exec exec) {
  channel::validate(spec);
  const std::vector<std::uint64_t> spread = spread_factors(spec.n_symbols);

  std::vector<double> symbols(spec.n_symbols);
  for (std::uint64_t k = 0; k < spec.n_symbols; ++k)
    symbols[k] = f.values[k % kFeatureDims];
  const std::vector<double> received =
      channel::awgn_corrupt(symbols, spec.snr_db, spec.seed);

  std::array<double, kFeatureDims> sums{};
  for (std::uint64_t k = 0; k < spec.n_symbols; ++k)
    sums[k % kFeatureDims] += received[k];

  const double gamma = channel::snr_linear(spec.snr_db);
  DeepscOutcome out;
  for (std::size_t j = 0; j < kFeatureDims; ++j) {
    const double m = static_cast<double>(spread[j]);
    out.estimate.values[j] =
        std::isinf(gamma) ? sums[j] / m : sums[j] * gamma / (1.0 + m * gamma);
  }

  const double mse = spec.monte_carlo() ? deepsc_monte_carlo_mse(spec, exec)
                                        : deepsc_analytic_mse(spec.n_symbols, spec.snr_db);
  out.result = make_result(Scheme::deepsc, spec.snr_db, mse,
                           static_cast<double>(kFeatureDims) * 32.0, false);
  return out;
}

RateQualityCurve::RateQualityCurve(std::string name, Fn fn, double probe_max_bits)
    : name_(std::move(name)), fn_(std::move(fn)) {
  auto reject = [&](const std::string& why) {
    throw ValidationError(kModule, "register_curve", name_, why);
  };
  if (!fn_) reject("empty curve");
  if (!(probe_max_bits > 1.0)) reject("probe range must exceed 1 bit");

  const double at_zero = fn_(0.0);
  if (std::fabs(at_zero - kMaxDistortion) > 1e-12)
    reject("curve(0) must equal the maximum distortion 1.0");

  constexpr int kProbes = 2048;
  double previous = at_zero;
  const double log_max = std::log10(probe_max_bits);
  for (int i = 0; i <= kProbes; ++i) {
    const double bits = std::pow(10.0, log_max * i / kProbes);
    const double d = fn_(bits);
    if (!std::isfinite(d) || d < 0.0 || d > kMaxDistortion)
      reject("distortion outside [0, 1] at " + std::to_string(bits) + " bits");
    if (d > previous)
      reject("not monotone non-increasing at " + std::to_string(bits) + " bits");
    previous = d;
  }
}

RateQualityCurve RateQualityCurve::hyperbolic(double b0) {
  if (!(b0 > 0.0))
    throw ValidationError(kModule, "register_curve", "b0", "must be > 0");
  return RateQualityCurve("hyperbolic",
                          [b0](double bits) { return 1.0 / (1.0 + bits / b0); });
}

RateQualityCurve RateQualityCurve::tabulated(
    std::vector<std::pair<double, double>> points) {
  if (points.empty() || points.front().first != 0.0)
    throw ValidationError(kModule, "register_curve", "points",
                          "table must start at 0 bits");
  for (std::size_t i = 1; i < points.size(); ++i)
  {
    if (!(points[i].first > points[i - 1].first))
      throw ValidationError(kModule, "register_curve", "points",
                            "bits must be strictly increasing");
    // Linear between points, so checking the vertices is exact.
    if (points[i].second > points[i - 1].second)
      throw ValidationError(kModule, "register_curve", "points",
                            "distortion must not increase");
  }
  const double last_bits = points.back().first;
  return RateQualityCurve(
      "table",
      [pts = std::move(points)](double bits) {
        if (bits >= pts.back().first) return pts.back().second;
        const auto hi = std::upper_bound(
            pts.begin(), pts.end(), bits,
            [](double b, const auto& p) { return b < p.first; });
        const auto lo = hi - 1;
        const double t = (bits - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
      },
      std::max(2.0, 2.0 * last_bits));
}

double RateQualityCurve::operator()(double bits) const {
  return fn_(std::max(0.0, bits));
}

SchemeResult traditional_distortion(double image_bits,
                                    const channel::ChannelSpec& spec,
                                    const RateQualityCurve& curve,
                                    TraditionalMode mode) {
  channel::validate(spec);
  if (!(image_bits > 0.0))
    throw ValidationError(kModule, "traditional_distortion", "image_payload",
                          "must be > 0");
  if (mode == TraditionalMode::fixed) {
    if (!channel::digital_feasible(image_bits, spec).feasible)
      return make_result(Scheme::traditional, spec.snr_db, kMaxDistortion,
                         image_bits, true);
    return make_result(Scheme::traditional, spec.snr_db, curve(image_bits),
                       image_bits, false);
  }
  const double delivered =
      std::min(image_bits, channel::deliverable_bits(spec.n_symbols, spec.snr_db));
  return make_result(Scheme::traditional, spec.snr_db, curve(delivered),
                     image_bits, false);
}

double task_proxy(double feature_mse) {
  if (!(feature_mse >= 0.0 && feature_mse <= kMaxDistortion))
    throw ValidationError(kModule, "task_proxy", "feature_mse",
                          "must lie in [0, 1], got " + std::to_string(feature_mse));
  return std::sqrt(feature_mse);
}

SweepResult run_sweep(const std::vector<Scheme>& schemes,
                      const channel::SnrSweep& sweep,
                      const channel::ChannelSpec& spec,
                      const SweepOptions& options, kernels::Exec exec) {
  if (schemes.empty())
    throw ValidationError(kModule, "run_sweep", "schemes", "must not be empty");
  channel::validate(spec);
  check_bits(options.bits_per_dim, "run_sweep");

  std::vector<Scheme> ordered = schemes;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  if (std::find(ordered.begin(), ordered.end(), Scheme::deepsc) != ordered.end())
    spread_factors(spec.n_symbols);

  const std::vector<double> points = channel::sweep_points(sweep);
  const double latent_bits = static_cast<double>(kLatentDims) * options.bits_per_dim;

  // Monte-Carlo deepsc rows share each trial's draws across the grid.
  std::vector<double> deepsc_mc;
  if (spec.monte_carlo() &&
      std::find(ordered.begin(), ordered.end(), Scheme::deepsc) != ordered.end())
    deepsc_mc = deepsc_monte_carlo_mse(spec, points, exec);

  SweepResult result;
  result.rows.resize(ordered.size() * points.size());

  auto evaluate = [&](std::size_t idx) {
    const Scheme scheme = ordered[idx / points.size()];
    channel::ChannelSpec at = spec;
    at.snr_db = points[idx % points.size()];
    switch (scheme) {
      case Scheme::traditional:
        return traditional_distortion(options.image_bits, at, options.curve,
                                      options.traditional_mode);
      case Scheme::ssc:
        return ssc_distortion(at, latent_bits, options.bits_per_dim);
      case Scheme::deepsc: {
        const double mse = at.monte_carlo()
                               ? deepsc_mc[idx % points.size()]
                               : deepsc_analytic_mse(at.n_symbols, at.snr_db);
        return make_result(Scheme::deepsc, at.snr_db, mse, options.feature_bits, false);
      }
    }
    throw ValidationError(kModule, "run_sweep", "scheme", "unhandled scheme");
  };

  const auto total = static_cast<std::int64_t>(result.rows.size());
  if (exec == kernels::Exec::serial) {
    for (std::int64_t i = 0; i < total; ++i)
      result.rows[static_cast<std::size_t>(i)] = evaluate(static_cast<std::size_t>(i));
  } else {
    // Exceptions cannot cross the parallel region; validation above covers
    // every input the loop body can reject.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < total; ++i)
      result.rows[static_cast<std::size_t>(i)] = evaluate(static_cast<std::size_t>(i));
  }
  return result;
}

}  // namespace xrsim::semcodec
