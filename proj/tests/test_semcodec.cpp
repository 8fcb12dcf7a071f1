#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "xrsim/error.hpp"
#include "xrsim/semcodec.hpp"

using namespace xrsim;
using namespace xrsim::semcodec;

namespace {

channel::ChannelSpec spec_at(double snr_db, std::uint64_t n = 2000) {
  channel::ChannelSpec s;
  s.snr_db = snr_db;
  s.n_symbols = n;
  return s;
}

// Reference mid-rise quantizer over [-4, 4], written from its definition.
double ref_quantize(double z, int bits) {
  const double levels = std::ldexp(1.0, bits);
  const double step = 8.0 / levels;
  const double cell = std::clamp(std::floor((z + 4.0) / step), 0.0, levels - 1.0);
  return -4.0 + (cell + 0.5) * step;
}

// Scalar analog link: m noisy copies of x ~ N(0, 1), MMSE combined.
double ref_spread_mse(int m, double snr_db, int trials, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  const double gamma = std::pow(10.0, snr_db / 10.0);
  const double sigma = std::sqrt(1.0 / gamma);
  double sse = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double x = normal(gen);
    double sum = 0.0;
    for (int k = 0; k < m; ++k) sum += x + sigma * normal(gen);
    const double err = sum * gamma / (1.0 + m * gamma) - x;
    sse += err * err;
  }
  return sse / trials;
}

}  // namespace

TEST_SUITE("semcodec") {

TEST_CASE("feature layout") {
  CHECK(kFeatureDims == 85);
  FeaturePayload f;
  for (std::size_t i = 0; i < kFeatureDims; ++i) f.values[i] = static_cast<double>(i);
  CHECK(f.camera()[2] == 2.0);
  CHECK(f.shape()[0] == 3.0);
  CHECK(f.pose()[0] == 13.0);
  CHECK(FeaturePayload::from_parts(f.camera(), f.shape(), f.pose()) == f);
}

TEST_CASE("scheme names") {
  for (Scheme s : {Scheme::traditional, Scheme::ssc, Scheme::deepsc})
    CHECK(scheme_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(scheme_from_string("jpeg"), ValidationError);
}

TEST_CASE("projection rows are orthonormal") {
  const Projection& p = latent_projection();
  for (std::size_t a = 0; a < kLatentDims; ++a)
    for (std::size_t b = 0; b < kLatentDims; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < kFeatureDims; ++j) dot += p[a][j] * p[b][j];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("quantizer matches its definition") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int bits : {1, 2, 5, 8, 16, 32}) {
    for (int i = 0; i < 2000; ++i) {
      const double z = normal(gen);
      CHECK(dequantize_level(quantize_level(z, bits), bits) == ref_quantize(z, bits));
    }
  }
  CHECK(quantize_level(1e9, 8) == 255);
  CHECK(quantize_level(-1e9, 8) == 0);
  CHECK(quantize_level(3.7, 0) == 0);
  CHECK(dequantize_level(0, 0) == 0.0);
  CHECK_THROWS_AS(quantize_level(0.0, kMaxBitsPerDim + 1), ValidationError);
}

// 30-digit quadrature references (mpmath), clipping tails included.
TEST_CASE("quantizer_mse against arbitrary-precision references") {
  CHECK(quantizer_mse(0) == 1.0);
  CHECK(quantizer_mse(1) == doctest::Approx(1.8084617567885385766).epsilon(1e-13));
  CHECK(quantizer_mse(2) == doctest::Approx(0.33630525745963218784).epsilon(1e-13));
  CHECK(quantizer_mse(3) == doctest::Approx(0.083362129110880006005).epsilon(1e-13));
  CHECK(quantizer_mse(4) == doctest::Approx(0.020849126032519442835).epsilon(1e-13));
  CHECK(quantizer_mse(8) == doctest::Approx(8.8017510006012340441e-5).epsilon(1e-12));
  CHECK(quantizer_mse(12) == doctest::Approx(6.5262590835714389038e-6).epsilon(1e-11));
  CHECK(quantizer_mse(32) == doctest::Approx(6.1804162336129595111e-6).epsilon(1e-9));
}

TEST_CASE("quantizer_mse is non-increasing in bits") {
  for (std::uint32_t b = 2; b <= kMaxBitsPerDim; ++b) CHECK(quantizer_mse(b) <= quantizer_mse(b - 1));
}

// 10^6 Gaussian samples through the reference quantizer. In-range error is
// about step^2 / 12 = (8/256)^2 / 12; the full MSE adds the clipping tails.
TEST_CASE("8-bit quantizer Monte-Carlo oracle") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> normal;
  constexpr int kSamples = 1'000'000;
  double all = 0.0, inside = 0.0;
  int n_inside = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double z = normal(gen);
    const double e = z - ref_quantize(z, 8);
    all += e * e;
    if (std::fabs(z) < 4.0 - 8.0 / 256.0) {
      inside += e * e;
      ++n_inside;
    }
  }
  const double step = 8.0 / 256.0;
  CHECK(inside / n_inside == doctest::Approx(step * step / 12.0).epsilon(0.01));
  CHECK(all / kSamples == doctest::Approx(quantizer_mse(8)).epsilon(0.01));
}

TEST_CASE("ssc encode and decode") {
  const FeaturePayload zero{};
  const LatentCode c0 = ssc_encode(zero, 0);
  CHECK(c0.payload_bits() == 0.0);
  for (std::size_t r = 0; r < kLatentDims; ++r) {
    CHECK(c0.levels[r] == 0);
    CHECK(c0.values[r] == 0.0);
  }
  // The projection of zero is zero; a mid-rise code then sits in the cell
  // just above it.
  const LatentCode c8 = ssc_encode(zero, 8);
  CHECK(c8.payload_bits() == 80.0);
  for (std::size_t r = 0; r < kLatentDims; ++r) {
    CHECK(c8.levels[r] == 128);
    CHECK(c8.values[r] == 8.0 / 256.0 / 2.0);
  }
  CHECK(ssc_encode(zero, 32).payload_bits() == 320.0);
}

// Source in the projection's row space with unit-variance latents: the
// normalized reconstruction error is the quantizer's.
TEST_CASE("ssc round trip on the source model") {
  const Projection& p = latent_projection();
  std::mt19937_64 gen(10);
  std::normal_distribution<double> normal;
  for (std::uint32_t bits : {3u, 4u, 6u}) {
    double err = 0.0, energy = 0.0;
    for (int t = 0; t < 100000; ++t) {
      FeaturePayload f;
      for (std::size_t r = 0; r < kLatentDims; ++r) {
        const double u = normal(gen);
        for (std::size_t j = 0; j < kFeatureDims; ++j) f.values[j] += u * p[r][j];
      }
      const FeaturePayload back = ssc_decode(ssc_encode(f, bits));
      for (std::size_t j = 0; j < kFeatureDims; ++j) {
        err += (back.values[j] - f.values[j]) * (back.values[j] - f.values[j]);
        energy += f.values[j] * f.values[j];
      }
    }
    CAPTURE(bits);
    CHECK(err / energy == doctest::Approx(quantizer_mse(bits)).epsilon(0.02));
  }
}

TEST_CASE("ssc_distortion") {
  const SchemeResult high = ssc_distortion(spec_at(30.0), 320.0, 32);
  CHECK_FALSE(high.outage);
  CHECK(high.feature_mse == quantizer_mse(32));
  CHECK(high.payload_bits == 320.0);

  const SchemeResult low = ssc_distortion(spec_at(-20.0), 320.0, 32);
  CHECK(low.outage);
  CHECK(low.feature_mse == 1.0);
  CHECK(low.task_proxy == 1.0);

  // A one-bit code is worse than the prior mean.
  CHECK(ssc_distortion(spec_at(30.0), 10.0, 1).feature_mse == 1.0);
  CHECK_THROWS_AS(ssc_distortion(spec_at(0.0), 300.0, 32), ValidationError);
}

TEST_CASE("ssc outage transition under a 0.01 dB sweep") {
  const double cliff = channel::cliff_snr(320.0, 2000);
  const auto rows = run_sweep({Scheme::ssc}, {-12.0, -7.0, 0.01}, spec_at(0.0)).rows;
  int steps = 0;
  double first_ok = NAN;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].outage != rows[i - 1].outage) {
      ++steps;
      first_ok = rows[i].snr_db;
      CHECK(rows[i - 1].outage);
    }
  CHECK(steps == 1);
  CHECK(first_ok >= cliff);
  CHECK(first_ok - 0.01 < cliff + 1e-9);
  CHECK(std::fabs(first_ok - (-9.31)) <= 0.01 + 1e-9);
}

TEST_CASE("spread_factors") {
  const auto m = spread_factors(2000);
  CHECK(m.size() == 85);
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    total += m[j];
    CHECK(m[j] == (j < 45 ? 24u : 23u));
  }
  CHECK(total == 2000);
  CHECK(spread_factors(85) == std::vector<std::uint64_t>(85, 1));
  CHECK_THROWS_AS(spread_factors(84), ValidationError);
}

TEST_CASE("deepsc analytic distortion") {
  CHECK(deepsc_feature_mse(23, 0.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(deepsc_feature_mse(23, -20.0) == doctest::Approx(1.0 / 1.23).epsilon(1e-14));
  CHECK(deepsc_feature_mse(23, channel::kNoiselessDb) == 0.0);
  // 45 features get 24 symbols, 40 get 23.
  CHECK(deepsc_analytic_mse(2000, 0.0) ==
        doctest::Approx((45.0 / 25.0 + 40.0 / 24.0) / 85.0).epsilon(1e-14));
}

TEST_CASE("deepsc analytic formula against a scalar link simulation") {
  CHECK(ref_spread_mse(23, 0.0, 100000, 1) ==
        doctest::Approx(deepsc_feature_mse(23, 0.0)).epsilon(0.01));
  CHECK(ref_spread_mse(23, -20.0, 100000, 2) ==
        doctest::Approx(deepsc_feature_mse(23, -20.0)).epsilon(0.01));
}

TEST_CASE("deepsc Monte-Carlo mode agrees with the analytic form") {
  channel::ChannelSpec s = spec_at(0.0);
  s.mode = channel::MonteCarloMode{100000};
  s.seed = 7;
  const double grid[] = {-20.0, 0.0, 30.0};
  const auto mc = deepsc_monte_carlo_mse(s, grid);
  for (std::size_t i = 0; i < 3; ++i) {
    CAPTURE(grid[i]);
    CHECK(mc[i] == doctest::Approx(deepsc_analytic_mse(2000, grid[i])).epsilon(0.01));
  }
  s.snr_db = 30.0;
  CHECK(deepsc_monte_carlo_mse(s, kernels::Exec::serial) == mc[2]);
  s.snr_db = channel::kNoiselessDb;
  s.mode = channel::MonteCarloMode{50};
  CHECK(deepsc_monte_carlo_mse(s) < 1e-28);
}

TEST_CASE("deepsc_transmit") {
  FeaturePayload f;
  for (std::size_t j = 0; j < kFeatureDims; ++j) f.values[j] = std::sin(1.0 + j);
  const auto clean = deepsc_transmit(f, spec_at(channel::kNoiselessDb));
  for (std::size_t j = 0; j < kFeatureDims; ++j)
    CHECK(clean.estimate.values[j] == doctest::Approx(f.values[j]).epsilon(1e-12));
  CHECK(clean.result.feature_mse == 0.0);
  CHECK(clean.result.payload_bits == 2720.0);

  channel::ChannelSpec s = spec_at(0.0);
  s.seed = 3;
  const auto a = deepsc_transmit(f, s), b = deepsc_transmit(f, s);
  CHECK(a.estimate == b.estimate);
  CHECK(a.result.feature_mse == deepsc_analytic_mse(2000, 0.0));
  CHECK_FALSE(a.result.outage);
  CHECK_THROWS_AS(deepsc_transmit(f, spec_at(0.0, 50)), ValidationError);
}

TEST_CASE("deepsc is strictly decreasing in SNR and in spread") {
  double prev = 2.0;
  for (double db = -30.0; db <= 40.0; db += 0.05) {
    const double v = deepsc_analytic_mse(2000, db);
    CHECK(v < prev);
    prev = v;
  }
  for (std::uint64_t m = 1; m < 200; ++m)
    CHECK(deepsc_feature_mse(m + 1, 3.0) < deepsc_feature_mse(m, 3.0));
}

TEST_CASE("rate-quality curves") {
  const auto h = RateQualityCurve::hyperbolic();
  CHECK(h(0.0) == 1.0);
  CHECK(h(1e5) == 0.5);
  CHECK(h(-5.0) == 1.0);
  const auto t = RateQualityCurve::tabulated({{0.0, 1.0}, {100.0, 0.5}, {300.0, 0.1}});
  CHECK(t(50.0) == 0.75);
  CHECK(t(200.0) == doctest::Approx(0.3));
  CHECK(t(1e6) == 0.1);
  CHECK_THROWS_AS(RateQualityCurve::tabulated({{1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(RateQualityCurve::tabulated({{0.0, 1.0}, {0.0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(RateQualityCurve::tabulated({{0.0, 1.0}, {10.0, 0.2}, {20.0, 0.4}}),
                  ValidationError);
  CHECK_THROWS_AS(RateQualityCurve("half", [](double) { return 0.5; }), ValidationError);
  CHECK_THROWS_AS(RateQualityCurve("rising", [](double b) { return b < 10 ? 1.0 : 0.5 + b * 1e-12; }),
                  ValidationError);
  CHECK_THROWS_AS(RateQualityCurve::hyperbolic(0.0), ValidationError);
}

TEST_CASE("traditional distortion") {
  const auto curve = RateQualityCurve::hyperbolic();
  const double neg_inf = -std::numeric_limits<double>::infinity();
  CHECK(traditional_distortion(1.6e6, spec_at(neg_inf), curve).feature_mse == 1.0);
  // Enough capacity for the whole image: curve floor at the image size.
  const auto sat = traditional_distortion(1000.0, spec_at(30.0), curve);
  CHECK(sat.feature_mse == curve(1000.0));
  const auto part = traditional_distortion(1.6e6, spec_at(30.0), curve);
  CHECK(part.feature_mse == curve(2000.0 * std::log2(1001.0)));
  CHECK_FALSE(part.outage);

  const auto fixed = traditional_distortion(1.6e6, spec_at(30.0), curve, TraditionalMode::fixed);
  CHECK(fixed.outage);
  CHECK(fixed.feature_mse == 1.0);
  CHECK_FALSE(traditional_distortion(1000.0, spec_at(30.0), curve, TraditionalMode::fixed).outage);
}

TEST_CASE("task_proxy") {
  CHECK(task_proxy(0.0) == 0.0);
  CHECK(task_proxy(1.0) == 1.0);
  CHECK(task_proxy(0.25) == 0.5);
  CHECK_THROWS_AS(task_proxy(1.5), ValidationError);
  CHECK_THROWS_AS(task_proxy(-0.1), ValidationError);
}

TEST_CASE("default sweep shape and invariants") {
  const auto result = run_sweep({Scheme::deepsc, Scheme::ssc, Scheme::traditional, Scheme::ssc},
                                {-20.0, 30.0, 1.0}, spec_at(0.0));
  REQUIRE(result.rows.size() == 153);
  for (std::size_t i = 0; i < 153; ++i) {
    const auto& r = result.rows[i];
    CHECK(static_cast<std::size_t>(r.scheme) == i / 51);
    CHECK(r.snr_db == -20.0 + static_cast<double>(i % 51));
    CHECK_UNARY(r.feature_mse >= 0.0);
    CHECK_UNARY(r.feature_mse <= 1.0);
    CHECK(r.task_proxy == std::sqrt(r.feature_mse));
  }
  CHECK_THROWS_AS(run_sweep({}, {-20.0, 30.0, 1.0}, spec_at(0.0)), ValidationError);
}

TEST_CASE("deepsc never loses to traditional on a 0.5 dB grid") {
  const auto rows =
      run_sweep({Scheme::traditional, Scheme::deepsc}, {-20.0, 30.0, 0.5}, spec_at(0.0)).rows;
  REQUIRE(rows.size() == 202);
  for (std::size_t i = 0; i < 101; ++i) {
    CAPTURE(rows[i].snr_db);
    CHECK(rows[101 + i].feature_mse < rows[i].feature_mse);
    CHECK(rows[101 + i].task_proxy < rows[i].task_proxy);
  }
}

TEST_CASE("semantic payload is far smaller than the image") {
  const double features = 85.0 * 32.0, image = 2e6 * 0.8;
  CHECK(features < image);
  CHECK(image / features >= 580.0);
}

TEST_CASE("sweep serial and parallel agree in Monte-Carlo mode") {
  channel::ChannelSpec s = spec_at(0.0);
  s.mode = channel::MonteCarloMode{3000};
  s.seed = 99;
  const channel::SnrSweep grid{-10.0, 10.0, 2.0};
  const auto a = run_sweep({Scheme::deepsc, Scheme::ssc}, grid, s, {}, kernels::Exec::serial);
  const auto b = run_sweep({Scheme::deepsc, Scheme::ssc}, grid, s, {}, kernels::Exec::parallel);
  CHECK(a.rows == b.rows);
}

}  // TEST_SUITE
