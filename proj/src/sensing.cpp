#include "xrsim/sensing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "xrsim/error.hpp"

namespace xrsim::sensing {

namespace {

constexpr const char* kModule = "sensing";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no, const char* field) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\r'))
    token.remove_suffix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(kModule, "load_relevance", field,
                     "cannot parse '" + std::string(token) + "'", line_no, 0);
  return value;
}

}  // namespace

void validate(const SensorGrid& grid) {
  if (grid.t < 1 || grid.h < 1 || grid.w < 1)
    throw ValidationError(kModule, "validate", "grid", "t, h, w must all be >= 1");
}

RelevanceMap::RelevanceMap(SensorGrid grid, std::vector<double> weights)
    : grid_(grid), weights_(std::move(weights)) {
  validate(grid_);
  if (weights_.size() != grid_.size())
    throw ValidationError(kModule, "relevance_map", "weights",
                          "expected " + std::to_string(grid_.size()) +
                              " weights, got " + std::to_string(weights_.size()));
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ValidationError(kModule, "relevance_map", "weights",
                            "weights must be finite and >= 0");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kCoverageTolerance)
    throw ValidationError(kModule, "relevance_map", "weights",
                          "weights must sum to 1, got " + std::to_string(sum));
}

RelevanceMap RelevanceMap::uniform(SensorGrid grid) {
  validate(grid);
  return RelevanceMap(grid, std::vector<double>(grid.size(),
                                                1.0 / static_cast<double>(grid.size())));
}

RelevanceMap RelevanceMap::blob(SensorGrid grid, double cy, double cx, double sigma) {
  validate(grid);
  if (!(sigma > 0.0))
    throw ValidationError(kModule, "relevance_map", "sigma", "must be > 0");
  std::vector<double> w(grid.size());
  double total = 0.0;
  for (std::uint32_t t = 0; t < grid.t; ++t)
    for (std::uint32_t y = 0; y < grid.h; ++y)
      for (std::uint32_t x = 0; x < grid.w; ++x) {
        const double dy = y - cy, dx = x - cx;
        const double v = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
        w[grid.index(t, y, x)] = v;
        total += v;
      }
  if (!(total > 0.0))
    throw ValidationError(kModule, "relevance_map", "sigma",
                          "blob has no mass on the grid");
  for (double& v : w) v /= total;
  return RelevanceMap(grid, std::move(w));
}

RelevanceMap RelevanceMap::from_csv(SensorGrid grid, std::string_view text) {
  validate(grid);
  std::vector<double> w(grid.size(), 0.0);
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "t,y,x,weight")
        throw ParseError(kModule, "load_relevance", "header",
                         "expected 't,y,x,weight', found '" + std::string(line) + "'",
                         line_no, 1);
      header_seen = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 4)
      throw ParseError(kModule, "load_relevance", "row", "expected 4 columns",
                       line_no, 1);
    const auto t = parse_number<std::uint32_t>(cols[0], line_no, "t");
    const auto y = parse_number<std::uint32_t>(cols[1], line_no, "y");
    const auto x = parse_number<std::uint32_t>(cols[2], line_no, "x");
    const auto weight = parse_number<double>(cols[3], line_no, "weight");
    if (t >= grid.t || y >= grid.h || x >= grid.w)
      throw ValidationError(kModule, "load_relevance", "row",
                            "cell outside grid on line " + std::to_string(line_no));
    w[grid.index(t, y, x)] = weight;
  }
  if (!header_seen)
    throw ParseError(kModule, "load_relevance", "header", "empty relevance file");
  return RelevanceMap(grid, std::move(w));
}

MaskGrid::MaskGrid(SensorGrid grid, bool value)
    : grid_(grid), active_(grid.size(), value) {
  validate(grid_);
}

std::size_t MaskGrid::active_count() const {
  return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
}

std::string MaskGrid::to_rle_json() const {
  nlohmann::json runs = nlohmann::json::array();
  std::size_t i = 0;
  while (i < active_.size()) {
    if (!active_[i]) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < active_.size() && active_[i]) ++i;
    runs.push_back({start, i - start});
  }
  nlohmann::ordered_json doc{{"t", grid_.t}, {"h", grid_.h}, {"w", grid_.w}, {"runs", runs}};
  return doc.dump() + "\n";
}

MaskGrid MaskGrid::from_rle_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(kModule, "load_mask", "document", e.what());
  }
  try {
    MaskGrid mask({doc.at("t").get<std::uint32_t>(), doc.at("h").get<std::uint32_t>(),
                   doc.at("w").get<std::uint32_t>()});
    for (const auto& run : doc.at("runs")) {
      const auto start = run.at(0).get<std::size_t>();
      const auto length = run.at(1).get<std::size_t>();
      if (start + length > mask.size())
        throw ValidationError(kModule, "load_mask", "runs", "run exceeds grid");
      for (std::size_t k = start; k < start + length; ++k) mask.set(k);
    }
    return mask;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(kModule, "load_mask", "document", e.what());
  }
}

MaskGrid prior_mask(const RelevanceMap& rel, double coverage_target) {
  if (!(coverage_target > 0.0 && coverage_target <= 1.0))
    throw ValidationError(kModule, "prior_mask", "coverage_target",
                          "must lie in (0, 1], got " + std::to_string(coverage_target));
  const auto& w = rel.weights();
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Linear index order is (t, y, x) lexicographic order.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });

  MaskGrid mask(rel.grid());
  double covered = 0.0;
  for (std::size_t idx : order) {
    if (covered >= coverage_target - kCoverageTolerance) break;
    mask.set(idx);
    covered += w[idx];
  }
  return mask;
}

MaskGrid feedback_mask(const FeedbackState& fb, const SensorGrid& grid,
                       std::uint32_t dt) {
  validate(grid);
  if (dt < 1 || dt > grid.t)
    throw ValidationError(kModule, "feedback_mask", "dt",
                          "must lie in [1, grid.t], got " + std::to_string(dt));
  if (!(fb.max_speed >= 0.0) || !std::isfinite(fb.max_speed))
    throw ValidationError(kModule, "feedback_mask", "max_speed",
                          "must be finite and >= 0");
  const BoundingBox& b = fb.prev_box;
  if (b.y0 > b.y1 || b.x0 > b.x1 || b.y1 >= grid.h || b.x1 >= grid.w)
    throw ValidationError(kModule, "feedback_mask", "prev_box",
                          "box must be ordered and inside the grid");

  const double reach = std::ceil(fb.max_speed * dt);
  const auto pad = static_cast<std::int64_t>(std::min(reach, 4.0e9));
  const auto clamp = [](std::int64_t v, std::int64_t hi) {
    return static_cast<std::uint32_t>(std::clamp<std::int64_t>(v, 0, hi));
  };
  const std::uint32_t y0 = clamp(std::int64_t{b.y0} - pad, grid.h - 1);
  const std::uint32_t y1 = clamp(std::int64_t{b.y1} + pad, grid.h - 1);
  const std::uint32_t x0 = clamp(std::int64_t{b.x0} - pad, grid.w - 1);
  const std::uint32_t x1 = clamp(std::int64_t{b.x1} + pad, grid.w - 1);

  MaskGrid mask(grid);
  for (std::uint32_t t = 0; t < dt; ++t)
    for (std::uint32_t y = y0; y <= y1; ++y)
      for (std::uint32_t x = x0; x <= x1; ++x) mask.set(grid.index(t, y, x));
  return mask;
}

double coverage(const MaskGrid& mask, const RelevanceMap& rel) {
  if (!(mask.grid() == rel.grid()))
    throw ValidationError(kModule, "coverage", "grid",
                          "mask and relevance map grids differ");
  double sum = 0.0;
  const auto& w = rel.weights();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (mask.active(i)) sum += w[i];
  return sum;
}

SensingReport sensing_report(const MaskGrid& mask, double per_sample_cost) {
  if (!(per_sample_cost >= 0.0) || !std::isfinite(per_sample_cost))
    throw ValidationError(kModule, "sensing_report", "per_sample_cost",
                          "must be finite and >= 0");
  const std::size_t active = mask.active_count();
  const std::size_t total = mask.size();
  return {static_cast<double>(total - active) / static_cast<double>(total), active,
          static_cast<double>(active) * per_sample_cost};
}

}  // namespace xrsim::sensing
