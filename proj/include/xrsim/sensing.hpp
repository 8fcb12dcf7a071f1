#pragma once

// Semantic sensing: which sensor cells to switch on. Task accuracy is
// proxied by relevance coverage, the share of task-relevance mass that the
// active cells capture.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xrsim::sensing {

// Tolerance on coverage comparisons; matches the normalization tolerance of
// RelevanceMap so a target of 1.0 is reachable from rounded weights.
inline constexpr double kCoverageTolerance = 1e-9;

struct SensorGrid {
  std::uint32_t t = 1;
  std::uint32_t h = 1;
  std::uint32_t w = 1;

  std::size_t size() const { return std::size_t{t} * h * w; }
  std::size_t index(std::uint32_t frame, std::uint32_t y, std::uint32_t x) const {
    return (std::size_t{frame} * h + y) * w + x;
  }

  bool operator==(const SensorGrid&) const = default;
};

void validate(const SensorGrid& grid);

class RelevanceMap {
 public:
  // Weights in (t, y, x) row-major order; must be non-negative and sum to 1.
  RelevanceMap(SensorGrid grid, std::vector<double> weights);

  static RelevanceMap uniform(SensorGrid grid);
  // Isotropic Gaussian blob centred at (cy, cx) in every frame, normalized.
  static RelevanceMap blob(SensorGrid grid, double cy, double cx, double sigma);
  // Rows "t,y,x,weight" after a header line; unlisted cells weigh 0.
  static RelevanceMap from_csv(SensorGrid grid, std::string_view text);

  const SensorGrid& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  SensorGrid grid_;
  std::vector<double> weights_;
};

class MaskGrid {
 public:
  explicit MaskGrid(SensorGrid grid, bool value = false);

  const SensorGrid& grid() const { return grid_; }
  bool active(std::size_t i) const { return active_[i]; }
  bool active(std::uint32_t t, std::uint32_t y, std::uint32_t x) const {
    return active_[grid_.index(t, y, x)];
  }
  void set(std::size_t i, bool on = true) { active_[i] = on; }
  std::size_t size() const { return active_.size(); }
  std::size_t active_count() const;

  // {"t":..,"h":..,"w":..,"runs":[[start,length],...]} over linear indices.
  std::string to_rle_json() const;
  static MaskGrid from_rle_json(std::string_view text);

  bool operator==(const MaskGrid&) const = default;

 private:
  SensorGrid grid_;
  std::vector<bool> active_;
};

// Inclusive cell coordinates.
struct BoundingBox {
  std::uint32_t y0 = 0;
  std::uint32_t x0 = 0;
  std::uint32_t y1 = 0;
  std::uint32_t x1 = 0;

  bool operator==(const BoundingBox&) const = default;
};

struct FeedbackState {
  BoundingBox prev_box;
  double max_speed = 0.0;  // cells per frame

  bool operator==(const FeedbackState&) const = default;
};

// Fewest cells whose relevance reaches coverage_target: cells in descending
// weight, ties by (t, y, x), until the running sum meets the target.
MaskGrid prior_mask(const RelevanceMap& rel, double coverage_target);

// prev_box dilated by ceil(max_speed * dt) cells on every side, clamped,
// activated in frames [0, dt). Requires 1 <= dt <= grid.t.
MaskGrid feedback_mask(const FeedbackState& fb, const SensorGrid& grid,
                       std::uint32_t dt);

double coverage(const MaskGrid& mask, const RelevanceMap& rel);

struct SensingReport {
  double sparsity;
  std::size_t samples;
  double cost;
};

SensingReport sensing_report(const MaskGrid& mask, double per_sample_cost);

}  // namespace xrsim::sensing
