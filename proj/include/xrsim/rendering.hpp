#pragma once

// Semantic rendering budget: how many volumetric samples each ray gets.
// A NeRF-style renderer evaluates h * w * n_full samples per frame; the
// allocator redistributes a smaller budget by per-pixel importance.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xrsim/kernels.hpp"

namespace xrsim::rendering {

inline constexpr std::uint32_t kDefaultSamplesPerRay = 192;

struct RenderConfig {
  std::uint32_t h = 1;
  std::uint32_t w = 1;
  std::uint32_t n_full = kDefaultSamplesPerRay;

  std::size_t pixels() const { return std::size_t{h} * w; }

  bool operator==(const RenderConfig&) const = default;
};

void validate(const RenderConfig& cfg);

class ImportanceMap {
 public:
  // Row-major (y, x); non-negative, summing to 1 within 1e-9.
  ImportanceMap(std::uint32_t h, std::uint32_t w, std::vector<double> weights);

  static ImportanceMap uniform(std::uint32_t h, std::uint32_t w);
  static ImportanceMap blob(std::uint32_t h, std::uint32_t w, double cy, double cx,
                            double sigma);
  // Rows "y,x,weight" after a header line; unlisted pixels weigh 0.
  static ImportanceMap from_csv(std::uint32_t h, std::uint32_t w, std::string_view text);

  std::uint32_t h() const { return h_; }
  std::uint32_t w() const { return w_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::uint32_t h_;
  std::uint32_t w_;
  std::vector<double> weights_;
};

struct RayBudget {
  std::uint32_t h = 0;
  std::uint32_t w = 0;
  std::vector<std::uint32_t> per_pixel;  // row-major

  std::uint64_t total() const;
  // "y,x,samples" with header, one row per pixel.
  std::string to_csv() const;
};

std::uint64_t full_sample_count(const RenderConfig& cfg);

// Every pixel starts at n_min; the surplus total_budget - h*w*n_min is
// shared in proportion to importance (largest remainder, ties by (y, x)).
// Pixels whose share reaches n_full are capped and the rest re-shared among
// the uncapped ones. The result sums to total_budget exactly.
RayBudget allocate_budget(const ImportanceMap& imp, std::uint64_t total_budget,
                          std::uint32_t n_min, const RenderConfig& cfg,
                          kernels::Exec exec = kernels::Exec::parallel);

double speedup(const RayBudget& budget, const RenderConfig& cfg);

// Importance-weighted mean of 1 / samples; restoration_discount scales the
// result for a post-render restoration stage (1 = none).
double quality_proxy(const RayBudget& budget, const ImportanceMap& imp,
                     double restoration_discount = 1.0);

double render_time(std::uint64_t samples, double throughput);

}  // namespace xrsim::rendering
