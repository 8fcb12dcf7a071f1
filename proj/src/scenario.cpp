#include "xrsim/scenario.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "xrsim/error.hpp"

namespace xrsim::scenario {

namespace {

using nlohmann::json;

constexpr const char* kModule = "scenario";
constexpr const char* kLoad = "load_scenario";

[[noreturn]] void fail_field(const std::string& path, const std::string& why) {
  throw ParseError(kModule, kLoad, path, why);
}

[[noreturn]] void invalid(const std::string& path, const std::string& why) {
  throw ValidationError(kModule, "validate", path, why);
}

// Cursor over one JSON object that records which keys were read, so that
// typos in a scenario surface as errors instead of silently using defaults.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail_field(path_.empty() ? "/" : path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "/" + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) fail_field(at(key), "required field is missing");
    used_.insert(key);
    return j_.at(key);
  }

  Node child(const std::string& key) { return Node(raw(key), at(key)); }

  std::optional<Node> optional_child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return child(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail_field(at(key), "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t count(const std::string& key) {
    const json& v = raw(key);
    return as_count(v, at(key));
  }

  std::uint64_t count_or(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail_field(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail_field(at(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) fail_field(at(key), "unknown field");
  }

  static std::uint64_t as_count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) fail_field(where, "expected a non-negative integer");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
    }
    fail_field(where, "expected a non-negative integer");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::uint32_t narrow32(std::uint64_t v, const std::string& where) {
  if (v > 0xFFFFFFFFull) fail_field(where, "value exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

PayloadSpec read_payload(Node n) {
  const std::string kind = n.string("kind");
  PayloadSpec out;
  if (kind == "image") {
    ImagePayload p;
    p.pixel_count = n.count("pixel_count");
    p.bpp = n.number("bpp");
    p.panoramic = n.boolean_or("panoramic", false);
    out = p;
  } else if (kind == "features") {
    FeaturesPayload p;
    p.count = n.count("count");
    p.bits_per_feature = n.count_or("bits_per_feature", kDefaultBitsPerFeature);
    out = p;
  } else if (kind == "latent") {
    out = LatentPayload{n.count("dims"), n.count("bits_per_dim")};
  } else if (kind == "blob") {
    out = BlobPayload{n.count("bits")};
  } else {
    fail_field(n.at("kind"), "unknown payload kind '" + kind +
                                 "' (expected image, features, latent or blob)");
  }
  n.finish();
  return out;
}

json write_payload(const PayloadSpec& spec) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ImagePayload>)
          return {{"kind", "image"}, {"pixel_count", p.pixel_count}, {"bpp", p.bpp},
                  {"panoramic", p.panoramic}};
        else if constexpr (std::is_same_v<T, FeaturesPayload>)
          return {{"kind", "features"}, {"count", p.count},
                  {"bits_per_feature", p.bits_per_feature}};
        else if constexpr (std::is_same_v<T, LatentPayload>)
          return {{"kind", "latent"}, {"dims", p.dims}, {"bits_per_dim", p.bits_per_dim}};
        else
          return {{"kind", "blob"}, {"bits", p.bits}};
      },
      spec);
}

WeightSource read_weights(Node n) {
  const std::string kind = n.string("kind");
  WeightSource out;
  if (kind == "uniform") {
    out = UniformWeights{};
  } else if (kind == "blob") {
    out = BlobWeights{n.number("cy"), n.number("cx"), n.number("sigma")};
  } else if (kind == "csv") {
    out = CsvWeights{n.string("path")};
  } else if (kind == "weights") {
    const json& values = n.raw("values");
    if (!values.is_array()) fail_field(n.at("values"), "expected an array of numbers");
    InlineWeights w;
    for (const auto& v : values) {
      if (!v.is_number()) fail_field(n.at("values"), "expected an array of numbers");
      w.values.push_back(v.get<double>());
    }
    out = std::move(w);
  } else {
    fail_field(n.at("kind"), "unknown weight source '" + kind +
                                 "' (expected uniform, blob, csv or weights)");
  }
  n.finish();
  return out;
}

json write_weights(const WeightSource& src) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformWeights>)
          return {{"kind", "uniform"}};
        else if constexpr (std::is_same_v<T, BlobWeights>)
          return {{"kind", "blob"}, {"cy", s.cy}, {"cx", s.cx}, {"sigma", s.sigma}};
        else if constexpr (std::is_same_v<T, CsvWeights>)
          return {{"kind", "csv"}, {"path", s.path}};
        else
          return {{"kind", "weights"}, {"values", s.values}};
      },
      src);
}

channel::ChannelSpec read_channel(Node n, std::optional<std::uint64_t> scenario_seed) {
  channel::ChannelSpec c;
  c.bandwidth_hz = n.number("bandwidth_hz");
  c.snr_db = n.number_or("snr_db", 0.0);
  if (n.has("n_symbols")) {
    c.n_symbols = n.count("n_symbols");
  } else {
    const double twice = 2.0 * c.bandwidth_hz;
    if (!(twice >= 1.0) || std::floor(twice) != twice || twice > 1.8e19)
      fail_field(n.at("n_symbols"),
                 "cannot default to 2 * bandwidth_hz; give n_symbols explicitly");
    c.n_symbols = static_cast<std::uint64_t>(twice);
  }
  if (n.has("mode")) {
    const json& mode = n.raw("mode");
    if (mode.is_string() && mode.get<std::string>() == "analytic") {
      c.mode = channel::AnalyticMode{};
    } else if (mode.is_object()) {
      Node m(mode, n.at("mode"));
      Node mc = m.child("monte_carlo");
      c.mode = channel::MonteCarloMode{mc.count("trials")};
      mc.finish();
      m.finish();
    } else {
      fail_field(n.at("mode"),
                 "expected \"analytic\" or {\"monte_carlo\": {\"trials\": N}}");
    }
  }
  if (n.has("seed")) {
    c.seed = n.count("seed");
  } else if (scenario_seed) {
    c.seed = *scenario_seed;
  } else if (c.monte_carlo()) {
    throw ValidationError(kModule, "validate", n.at("seed"),
                          "Monte-Carlo mode requires a seed (channel.seed or seed)");
  }
  n.finish();
  return c;
}

json write_channel(const channel::ChannelSpec& c) {
  json j{{"bandwidth_hz", c.bandwidth_hz}, {"snr_db", c.snr_db},
         {"n_symbols", c.n_symbols}, {"seed", c.seed}};
  if (c.monte_carlo())
    j["mode"] = {{"monte_carlo", {{"trials", c.trials()}}}};
  else
    j["mode"] = "analytic";
  return j;
}

SweepSection read_sweep(Node n) {
  SweepSection s;
  s.range.start_db = n.number_or("start_db", s.range.start_db);
  s.range.stop_db = n.number_or("stop_db", s.range.stop_db);
  s.range.step_db = n.number_or("step_db", s.range.step_db);
  if (n.has("schemes")) {
    const json& arr = n.raw("schemes");
    if (!arr.is_array()) fail_field(n.at("schemes"), "expected an array of scheme names");
    s.schemes.clear();
    for (const auto& v : arr) {
      if (!v.is_string()) fail_field(n.at("schemes"), "expected scheme names");
      try {
        s.schemes.push_back(semcodec::scheme_from_string(v.get<std::string>()));
      } catch (const ValidationError& e) {
        fail_field(n.at("schemes"), e.what());
      }
    }
  }
  s.bits_per_dim = narrow32(n.count_or("bits_per_dim", 32), n.at("bits_per_dim"));
  if (n.has("traditional_mode")) {
    const std::string mode = n.string("traditional_mode");
    if (mode == "adaptive")
      s.traditional_mode = semcodec::TraditionalMode::adaptive;
    else if (mode == "fixed")
      s.traditional_mode = semcodec::TraditionalMode::fixed;
    else
      fail_field(n.at("traditional_mode"), "expected adaptive or fixed");
  }
  if (auto c = n.optional_child("curve")) {
    const std::string kind = c->string("kind");
    if (kind == "hyperbolic") {
      s.curve = HyperbolicCurve{c->number_or("b0", 1e5)};
    } else if (kind == "table") {
      const json& pts = c->raw("points");
      TableCurve t;
      if (!pts.is_array()) fail_field(c->at("points"), "expected [[bits, distortion], ...]");
      for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          fail_field(c->at("points"), "expected [[bits, distortion], ...]");
        t.points.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      s.curve = std::move(t);
    } else {
      fail_field(c->at("kind"), "expected hyperbolic or table");
    }
    c->finish();
  }
  n.finish();
  return s;
}

json write_sweep(const SweepSection& s) {
  json schemes = json::array();
  for (auto sc : s.schemes) schemes.push_back(std::string(semcodec::to_string(sc)));
  json curve;
  if (const auto* h = std::get_if<HyperbolicCurve>(&s.curve)) {
    curve = {{"kind", "hyperbolic"}, {"b0", h->b0}};
  } else {
    json pts = json::array();
    for (const auto& [b, d] : std::get<TableCurve>(s.curve).points) pts.push_back({b, d});
    curve = {{"kind", "table"}, {"points", pts}};
  }
  return {{"start_db", s.range.start_db},
          {"stop_db", s.range.stop_db},
          {"step_db", s.range.step_db},
          {"schemes", schemes},
          {"bits_per_dim", s.bits_per_dim},
          {"traditional_mode",
           s.traditional_mode == semcodec::TraditionalMode::adaptive ? "adaptive" : "fixed"},
          {"curve", curve}};
}

sensing::SensorGrid read_grid(Node n) {
  sensing::SensorGrid g;
  g.t = narrow32(n.count_or("t", 1), n.at("t"));
  g.h = narrow32(n.count("h"), n.at("h"));
  g.w = narrow32(n.count("w"), n.at("w"));
  n.finish();
  return g;
}

SensingSection read_sensing(Node n) {
  SensingSection s;
  s.grid = read_grid(n.child("grid"));
  if (auto r = n.optional_child("relevance")) s.relevance = read_weights(std::move(*r));
  s.coverage_target = n.number_or("coverage_target", 1.0);
  s.per_sample_cost = n.number_or("per_sample_cost", 0.0);
  if (auto f = n.optional_child("feedback")) {
    FeedbackSection fb;
    Node box = f->child("box");
    fb.state.prev_box = {narrow32(box.count("y0"), box.at("y0")),
                         narrow32(box.count("x0"), box.at("x0")),
                         narrow32(box.count("y1"), box.at("y1")),
                         narrow32(box.count("x1"), box.at("x1"))};
    box.finish();
    fb.state.max_speed = f->number_or("max_speed", 0.0);
    fb.dt = narrow32(f->count_or("dt", 1), f->at("dt"));
    f->finish();
    s.feedback = fb;
  }
  n.finish();
  return s;
}

json write_sensing(const SensingSection& s) {
  json j{{"grid", {{"t", s.grid.t}, {"h", s.grid.h}, {"w", s.grid.w}}},
         {"relevance", write_weights(s.relevance)},
         {"coverage_target", s.coverage_target},
         {"per_sample_cost", s.per_sample_cost}};
  if (s.feedback) {
    const auto& b = s.feedback->state.prev_box;
    j["feedback"] = {{"box", {{"y0", b.y0}, {"x0", b.x0}, {"y1", b.y1}, {"x1", b.x1}}},
                     {"max_speed", s.feedback->state.max_speed},
                     {"dt", s.feedback->dt}};
  }
  return j;
}

RenderSection read_render(Node n) {
  RenderSection r;
  r.config.h = narrow32(n.count("h"), n.at("h"));
  r.config.w = narrow32(n.count("w"), n.at("w"));
  r.config.n_full = narrow32(n.count_or("n_full", rendering::kDefaultSamplesPerRay),
                             n.at("n_full"));
  r.n_min = narrow32(n.count_or("n_min", 1), n.at("n_min"));
  r.total_budget = n.count("total_budget");
  if (auto i = n.optional_child("importance")) r.importance = read_weights(std::move(*i));
  r.restoration_discount = n.number_or("restoration_discount", 1.0);
  n.finish();
  return r;
}

json write_render(const RenderSection& r) {
  return {{"h", r.config.h},
          {"w", r.config.w},
          {"n_full", r.config.n_full},
          {"n_min", r.n_min},
          {"total_budget", r.total_budget},
          {"importance", write_weights(r.importance)},
          {"restoration_discount", r.restoration_discount}};
}

BroadcastSection read_broadcast(Node n) {
  BroadcastSection b;
  b.group.users = n.count("users");
  b.group.shared_bits = n.count("shared_bits");
  const json& res = n.raw("residual_bits");
  if (res.is_array()) {
    for (const auto& v : res) b.group.residual_bits.push_back(Node::as_count(v, n.at("residual_bits")));
  } else {
    // A scalar applies the same residual to every user.
    b.group.residual_bits.assign(b.group.users, Node::as_count(res, n.at("residual_bits")));
  }
  if (n.has("user_snr_db")) {
    const json& snr = n.raw("user_snr_db");
    if (!snr.is_array()) fail_field(n.at("user_snr_db"), "expected an array of numbers");
    for (const auto& v : snr) {
      if (!v.is_number()) fail_field(n.at("user_snr_db"), "expected an array of numbers");
      b.user_snr_db.push_back(v.get<double>());
    }
  }
  n.finish();
  return b;
}

json write_broadcast(const BroadcastSection& b) {
  json j{{"users", b.group.users},
         {"shared_bits", b.group.shared_bits},
         {"residual_bits", b.group.residual_bits}};
  if (!b.user_snr_db.empty()) j["user_snr_db"] = b.user_snr_db;
  return j;
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v)) invalid(path, "must be finite and > 0");
}

void require_non_negative(double v, const std::string& path) {
  if (!(v >= 0.0) || !std::isfinite(v)) invalid(path, "must be finite and >= 0");
}

void validate_payload(const PayloadSpec& spec, const std::string& path) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ImagePayload>) {
          if (p.pixel_count == 0) invalid(path + "/pixel_count", "must be > 0");
          require_positive(p.bpp, path + "/bpp");
        } else if constexpr (std::is_same_v<T, FeaturesPayload>) {
          if (p.count == 0) invalid(path + "/count", "must be > 0");
          if (p.bits_per_feature == 0) invalid(path + "/bits_per_feature", "must be > 0");
        } else if constexpr (std::is_same_v<T, LatentPayload>) {
          if (p.dims == 0) invalid(path + "/dims", "must be > 0");
          if (p.bits_per_dim == 0) invalid(path + "/bits_per_dim", "must be > 0");
        } else {
          if (p.bits == 0) invalid(path + "/bits", "must be > 0");
        }
      },
      spec);
}

template <typename Fn>
void rethrow_at(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    invalid(path, e.what());
  }
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text,
                                                     std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

double payload_bits(const PayloadSpec& spec) {
  validate(spec);
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ImagePayload>)
          return static_cast<double>(p.pixel_count) * p.bpp * (p.panoramic ? 3.0 : 1.0);
        else if constexpr (std::is_same_v<T, FeaturesPayload>)
          return static_cast<double>(p.count) * static_cast<double>(p.bits_per_feature);
        else if constexpr (std::is_same_v<T, LatentPayload>)
          return static_cast<double>(p.dims) * static_cast<double>(p.bits_per_dim);
        else
          return static_cast<double>(p.bits);
      },
      spec);
}

void validate(const PayloadSpec& spec) { validate_payload(spec, "payload"); }

void validate(const ScenarioConfig& cfg) {
  require_positive(cfg.device.sensor_throughput, "/device/sensor_throughput");
  require_positive(cfg.device.render_throughput, "/device/render_throughput");
  require_non_negative(cfg.device.compute_time, "/device/compute_time");
  require_non_negative(cfg.device.display_time, "/device/display_time");
  require_non_negative(cfg.device.encode_time, "/device/encode_time");
  validate_payload(cfg.uplink_payload, "/uplink_payload");
  validate_payload(cfg.downlink_payload, "/downlink_payload");
  if (cfg.semantic_uplink_payload)
    validate_payload(*cfg.semantic_uplink_payload, "/semantic_uplink_payload");
  rethrow_at("/channel", [&] { channel::validate(cfg.channel); });
  require_positive(cfg.budget.motion_to_photon, "/budget/motion_to_photon");
  if (cfg.link_rate_bps) require_positive(*cfg.link_rate_bps, "/link_rate_bps");

  for (std::size_t i = 0; i < cfg.rates.size(); ++i) {
    const RateEntry& e = cfg.rates[i];
    const std::string path = "/rates/" + std::to_string(i);
    validate_payload(e.payload, path + "/payload");
    if (e.window_s.has_value() == e.other_stage_total.has_value())
      invalid(path, "give exactly one of window_s or other_stage_total");
    if (e.window_s) require_positive(*e.window_s, path + "/window_s");
    if (e.other_stage_total) {
      require_non_negative(*e.other_stage_total, path + "/other_stage_total");
      if (*e.other_stage_total >= cfg.budget.motion_to_photon)
        invalid(path + "/other_stage_total", "leaves no uplink window in the budget");
    }
  }
  if (cfg.sweep) {
    rethrow_at("/sweep", [&] { channel::validate(cfg.sweep->range); });
    if (cfg.sweep->schemes.empty()) invalid("/sweep/schemes", "must not be empty");
    if (cfg.sweep->bits_per_dim > semcodec::kMaxBitsPerDim)
      invalid("/sweep/bits_per_dim", "must be <= 48");
    rethrow_at("/sweep/curve", [&] { make_curve(cfg.sweep->curve); });
  }
  if (cfg.sensing) {
    const auto& s = *cfg.sensing;
    rethrow_at("/sensing/grid", [&] { sensing::validate(s.grid); });
    if (!(s.coverage_target > 0.0 && s.coverage_target <= 1.0))
      invalid("/sensing/coverage_target", "must lie in (0, 1]");
    require_non_negative(s.per_sample_cost, "/sensing/per_sample_cost");
    if (s.feedback && (s.feedback->dt < 1 || s.feedback->dt > s.grid.t))
      invalid("/sensing/feedback/dt", "must lie in [1, grid.t]");
  }
  if (cfg.render) {
    const auto& r = *cfg.render;
    rethrow_at("/render", [&] { rendering::validate(r.config); });
    if (r.n_min < 1 || r.n_min > r.config.n_full)
      invalid("/render/n_min", "must lie in [1, n_full]");
    const std::uint64_t lo = std::uint64_t{r.config.h} * r.config.w * r.n_min;
    const std::uint64_t hi = std::uint64_t{r.config.h} * r.config.w * r.config.n_full;
    if (r.total_budget < lo || r.total_budget > hi)
      invalid("/render/total_budget", "must lie in [h*w*n_min, h*w*n_full]");
    require_positive(r.restoration_discount, "/render/restoration_discount");
  }
  if (cfg.broadcast) {
    rethrow_at("/broadcast", [&] { broadcast::validate(cfg.broadcast->group); });
    if (!cfg.broadcast->user_snr_db.empty() &&
        cfg.broadcast->user_snr_db.size() != cfg.broadcast->group.users)
      invalid("/broadcast/user_snr_db", "expected one SNR per user");
  }
}

ScenarioConfig load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(kModule, kLoad, "document", e.what(), line, column);
  }

  Node root(doc, "");
  ScenarioConfig cfg;
  if (root.has("seed")) cfg.seed = root.count("seed");

  {
    Node d = root.child("device");
    cfg.device.sensor_throughput = d.number("sensor_throughput");
    cfg.device.render_throughput = d.number("render_throughput");
    cfg.device.compute_time = d.number("compute_time");
    cfg.device.display_time = d.number_or("display_time", kDefaultDisplayTime);
    cfg.device.encode_time = d.number_or("encode_time", kDefaultEncodeTime);
    cfg.device.sense_samples = d.count_or("sense_samples", 0);
    cfg.device.render_samples = d.count_or("render_samples", 0);
    d.finish();
  }
  cfg.uplink_payload = read_payload(root.child("uplink_payload"));
  cfg.downlink_payload = read_payload(root.child("downlink_payload"));
  if (auto s = root.optional_child("semantic_uplink_payload"))
    cfg.semantic_uplink_payload = read_payload(std::move(*s));
  cfg.channel = read_channel(root.child("channel"), cfg.seed);
  if (auto b = root.optional_child("budget")) {
    cfg.budget.motion_to_photon = b->number_or("motion_to_photon", kDefaultMotionToPhoton);
    b->finish();
  }
  if (root.has("link_rate_bps")) cfg.link_rate_bps = root.number("link_rate_bps");

  if (root.has("rates")) {
    const json& rates = root.raw("rates");
    if (!rates.is_array()) fail_field("/rates", "expected an array of rate entries");
    for (std::size_t i = 0; i < rates.size(); ++i) {
      Node e(rates[i], "/rates/" + std::to_string(i));
      RateEntry entry;
      entry.label = e.string("label");
      entry.payload = read_payload(e.child("payload"));
      if (e.has("window_s")) entry.window_s = e.number("window_s");
      if (e.has("other_stage_total")) entry.other_stage_total = e.number("other_stage_total");
      e.finish();
      cfg.rates.push_back(std::move(entry));
    }
  }
  if (auto s = root.optional_child("sweep")) cfg.sweep = read_sweep(std::move(*s));
  if (auto s = root.optional_child("sensing")) cfg.sensing = read_sensing(std::move(*s));
  if (auto r = root.optional_child("render")) cfg.render = read_render(std::move(*r));
  if (auto b = root.optional_child("broadcast")) cfg.broadcast = read_broadcast(std::move(*b));
  root.finish();

  validate(cfg);
  return cfg;
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  json j;
  if (cfg.seed) j["seed"] = *cfg.seed;
  j["device"] = {{"sensor_throughput", cfg.device.sensor_throughput},
                 {"render_throughput", cfg.device.render_throughput},
                 {"compute_time", cfg.device.compute_time},
                 {"display_time", cfg.device.display_time},
                 {"encode_time", cfg.device.encode_time},
                 {"sense_samples", cfg.device.sense_samples},
                 {"render_samples", cfg.device.render_samples}};
  j["uplink_payload"] = write_payload(cfg.uplink_payload);
  j["downlink_payload"] = write_payload(cfg.downlink_payload);
  if (cfg.semantic_uplink_payload)
    j["semantic_uplink_payload"] = write_payload(*cfg.semantic_uplink_payload);
  j["channel"] = write_channel(cfg.channel);
  j["budget"] = {{"motion_to_photon", cfg.budget.motion_to_photon}};
  if (cfg.link_rate_bps) j["link_rate_bps"] = *cfg.link_rate_bps;
  if (!cfg.rates.empty()) {
    json rates = json::array();
    for (const auto& e : cfg.rates) {
      json r{{"label", e.label}, {"payload", write_payload(e.payload)}};
      if (e.window_s) r["window_s"] = *e.window_s;
      if (e.other_stage_total) r["other_stage_total"] = *e.other_stage_total;
      rates.push_back(std::move(r));
    }
    j["rates"] = std::move(rates);
  }
  if (cfg.sweep) j["sweep"] = write_sweep(*cfg.sweep);
  if (cfg.sensing) j["sensing"] = write_sensing(*cfg.sensing);
  if (cfg.render) j["render"] = write_render(*cfg.render);
  if (cfg.broadcast) j["broadcast"] = write_broadcast(*cfg.broadcast);
  return j.dump(2) + "\n";
}

void override_seed(ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.channel.seed = seed;
}

semcodec::RateQualityCurve make_curve(const CurveSpec& spec) {
  if (const auto* h = std::get_if<HyperbolicCurve>(&spec))
    return semcodec::RateQualityCurve::hyperbolic(h->b0);
  return semcodec::RateQualityCurve::tabulated(std::get<TableCurve>(spec).points);
}

}  // namespace xrsim::scenario
