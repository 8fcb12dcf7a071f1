#include "xrsim/rendering.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "xrsim/error.hpp"

namespace xrsim::rendering {

namespace {

constexpr const char* kModule = "rendering";
constexpr double kNormTolerance = 1e-9;

template <typename T>
T parse_field(std::string_view token, std::size_t line_no, const char* field) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\r'))
    token.remove_suffix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(kModule, "load_importance", field,
                     "cannot parse '" + std::string(token) + "'", line_no, 0);
  return value;
}

}  // namespace

void validate(const RenderConfig& cfg) {
  if (cfg.h < 1 || cfg.w < 1 || cfg.n_full < 1)
    throw ValidationError(kModule, "validate", "render",
                          "h, w and n_full must all be >= 1");
}

ImportanceMap::ImportanceMap(std::uint32_t h, std::uint32_t w,
                             std::vector<double> weights)
    : h_(h), w_(w), weights_(std::move(weights)) {
  if (h_ < 1 || w_ < 1)
    throw ValidationError(kModule, "importance_map", "shape", "h and w must be >= 1");
  if (weights_.size() != std::size_t{h_} * w_)
    throw ValidationError(kModule, "importance_map", "weights",
                          "expected " + std::to_string(std::size_t{h_} * w_) +
                              " weights, got " + std::to_string(weights_.size()));
  double sum = 0.0;
  for (double v : weights_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError(kModule, "importance_map", "weights",
                            "weights must be finite and >= 0");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kNormTolerance)
    throw ValidationError(kModule, "importance_map", "weights",
                          "weights must sum to 1, got " + std::to_string(sum));
}

ImportanceMap ImportanceMap::uniform(std::uint32_t h, std::uint32_t w) {
  const std::size_t n = std::size_t{h} * w;
  return ImportanceMap(h, w, std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0));
}

ImportanceMap ImportanceMap::blob(std::uint32_t h, std::uint32_t w, double cy,
                                  double cx, double sigma) {
  if (!(sigma > 0.0))
    throw ValidationError(kModule, "importance_map", "sigma", "must be > 0");
  std::vector<double> v(std::size_t{h} * w);
  double total = 0.0;
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x) {
      const double dy = y - cy, dx = x - cx;
      const double g = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
      v[std::size_t{y} * w + x] = g;
      total += g;
    }
  if (!(total > 0.0))
    throw ValidationError(kModule, "importance_map", "sigma",
                          "blob has no mass on the image");
  for (double& g : v) g /= total;
  return ImportanceMap(h, w, std::move(v));
}

ImportanceMap ImportanceMap::from_csv(std::uint32_t h, std::uint32_t w,
                                      std::string_view text) {
  std::vector<double> v(std::size_t{h} * w, 0.0);
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
      if (line != "y,x,weight")
        throw ParseError(kModule, "load_importance", "header",
                         "expected 'y,x,weight', found '" + std::string(line) + "'",
                         line_no, 1);
      header_seen = true;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos)
      throw ParseError(kModule, "load_importance", "row", "expected 3 columns",
                       line_no, 1);
    const auto y = parse_field<std::uint32_t>(line.substr(0, c1), line_no, "y");
    const auto x = parse_field<std::uint32_t>(line.substr(c1 + 1, c2 - c1 - 1), line_no, "x");
    const auto weight = parse_field<double>(line.substr(c2 + 1), line_no, "weight");
    if (y >= h || x >= w)
      throw ValidationError(kModule, "load_importance", "row",
                            "pixel outside image on line " + std::to_string(line_no));
    v[std::size_t{y} * w + x] = weight;
  }
  if (!header_seen)
    throw ParseError(kModule, "load_importance", "header", "empty importance file");
  return ImportanceMap(h, w, std::move(v));
}

std::uint64_t RayBudget::total() const {
  return std::accumulate(per_pixel.begin(), per_pixel.end(), std::uint64_t{0});
}

std::string RayBudget::to_csv() const {
  std::string out = "y,x,samples\n";
  out.reserve(out.size() + per_pixel.size() * 12);
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x) {
      out += std::to_string(y);
      out += ',';
      out += std::to_string(x);
      out += ',';
      out += std::to_string(per_pixel[std::size_t{y} * w + x]);
      out += '\n';
    }
  return out;
}

std::uint64_t full_sample_count(const RenderConfig& cfg) {
  validate(cfg);
  return std::uint64_t{cfg.h} * cfg.w * cfg.n_full;
}

RayBudget allocate_budget(const ImportanceMap& imp, std::uint64_t total_budget,
                          std::uint32_t n_min, const RenderConfig& cfg,
                          kernels::Exec exec) {
  validate(cfg);
  if (imp.h() != cfg.h || imp.w() != cfg.w)
    throw ValidationError(kModule, "allocate_budget", "importance",
                          "importance map shape differs from render config");
  if (n_min < 1 || n_min > cfg.n_full)
    throw ValidationError(kModule, "allocate_budget", "n_min",
                          "must lie in [1, n_full]");
  const std::size_t pixels = cfg.pixels();
  const std::uint64_t floor_total = std::uint64_t{pixels} * n_min;
  const std::uint64_t ceiling_total = full_sample_count(cfg);
  if (total_budget < floor_total || total_budget > ceiling_total)
    throw ValidationError(kModule, "allocate_budget", "total_budget",
                          "must lie in [" + std::to_string(floor_total) + ", " +
                              std::to_string(ceiling_total) + "], got " +
                              std::to_string(total_budget));

  RayBudget out{cfg.h, cfg.w, std::vector<std::uint32_t>(pixels, n_min)};
  const std::uint64_t cap = cfg.n_full - n_min;
  std::uint64_t remaining = total_budget - floor_total;
  if (remaining == 0) return out;

  std::vector<bool> capped(pixels, false);
  std::vector<double> share(imp.weights());
  std::vector<std::uint64_t> quota(pixels);
  std::vector<double> frac(pixels);

  for (;;) {
    double weight = 0.0;
    std::size_t open = 0;
    for (std::size_t i = 0; i < pixels; ++i)
      if (!capped[i]) {
        weight += share[i];
        ++open;
      }
    if (weight <= 0.0) {
      // Only zero-importance pixels are left: share the rest evenly.
      for (std::size_t i = 0; i < pixels; ++i) share[i] = capped[i] ? 0.0 : 1.0;
      weight = static_cast<double>(open);
    }
    const double scale = static_cast<double>(remaining) / weight;

    bool newly_capped = false;
    for (std::size_t i = 0; i < pixels; ++i) {
      if (!capped[i] && scale * share[i] >= static_cast<double>(cap)) {
        capped[i] = true;
        share[i] = 0.0;
        out.per_pixel[i] = cfg.n_full;
        remaining -= cap;
        newly_capped = true;
      }
    }
    if (remaining == 0) return out;
    if (newly_capped) continue;

    kernels::proportional_quotas(share, scale, quota, frac, exec);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < pixels; ++i)
      if (!capped[i]) assigned += quota[i];

    std::vector<std::size_t> order;
    order.reserve(open);
    for (std::size_t i = 0; i < pixels; ++i)
      if (!capped[i]) order.push_back(i);

    // Rounded shares can floor one above the exact sum; take the excess
    // back from the smallest remainders.
    if (assigned > remaining) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (frac[a] != frac[b]) return frac[a] < frac[b];
        return a > b;
      });
      for (std::size_t k = 0; assigned > remaining; k = (k + 1) % order.size())
        if (quota[order[k]] > 0) {
          --quota[order[k]];
          --assigned;
        }
      for (std::size_t i = 0; i < pixels; ++i)
        if (!capped[i]) out.per_pixel[i] += static_cast<std::uint32_t>(quota[i]);
      return out;
    }
    std::uint64_t leftover = remaining - assigned;
    const auto by_remainder = [&](std::size_t a, std::size_t b) {
      if (frac[a] != frac[b]) return frac[a] > frac[b];
      return a < b;
    };
    const std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(leftover, order.size()));
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                     order.end(), by_remainder);
    for (std::size_t k = 0; k < take; ++k) ++quota[order[k]];
    leftover -= take;

    for (std::size_t i = 0; i < pixels; ++i)
      if (!capped[i]) out.per_pixel[i] += static_cast<std::uint32_t>(quota[i]);
    if (leftover == 0) return out;

    // Unreachable in exact arithmetic; guards against accumulated rounding.
    for (std::size_t i = 0; i < pixels && leftover > 0; ++i)
      while (out.per_pixel[i] < cfg.n_full && leftover > 0) {
        ++out.per_pixel[i];
        --leftover;
      }
    return out;
  }
}

double speedup(const RayBudget& budget, const RenderConfig& cfg) {
  const std::uint64_t used = budget.total();
  if (used == 0)
    throw ValidationError(kModule, "speedup", "budget", "allocation is empty");
  return static_cast<double>(full_sample_count(cfg)) / static_cast<double>(used);
}

double quality_proxy(const RayBudget& budget, const ImportanceMap& imp,
                     double restoration_discount) {
  if (budget.h != imp.h() || budget.w != imp.w())
    throw ValidationError(kModule, "quality_proxy", "importance",
                          "importance map shape differs from budget");
  if (!(restoration_discount > 0.0))
    throw ValidationError(kModule, "quality_proxy", "restoration_discount",
                          "must be > 0");
  double acc = 0.0;
  const auto& w = imp.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (budget.per_pixel[i] == 0)
      throw ValidationError(kModule, "quality_proxy", "budget",
                            "pixel with zero samples");
    acc += w[i] / budget.per_pixel[i];
  }
  return acc * restoration_discount;
}

double render_time(std::uint64_t samples, double throughput) {
  if (!(throughput > 0.0))
    throw ValidationError(kModule, "render_time", "throughput", "must be > 0");
  return static_cast<double>(samples) / throughput;
}

}  // namespace xrsim::rendering
