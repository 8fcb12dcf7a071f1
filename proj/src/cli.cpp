#include "xrsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xrsim/broadcast.hpp"
#include "xrsim/error.hpp"
#include "xrsim/pipeline.hpp"
#include "xrsim/rendering.hpp"
#include "xrsim/report.hpp"
#include "xrsim/scenario.hpp"
#include "xrsim/semcodec.hpp"
#include "xrsim/sensing.hpp"

namespace xrsim::cli {

namespace {

namespace fs = std::filesystem;
using report::Cell;
using report::Table;

constexpr const char* kModule = "cli";

struct Options {
  std::string scenario_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::string mask_out;
  std::string budget_out;
};

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(kModule, "run", what, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --seed replaces the scenario seed and any channel seed before validation,
// so a Monte-Carlo scenario without a seed becomes valid on the command line.
std::string apply_seed(const std::string& text, std::uint64_t seed) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;  // load_scenario reports the syntax error with its locus
  }
  if (!doc.is_object()) return text;
  doc["seed"] = seed;
  if (doc.contains("channel") && doc["channel"].is_object() && doc["channel"].contains("seed"))
    doc["channel"]["seed"] = seed;
  return doc.dump();
}

struct Loaded {
  scenario::ScenarioConfig cfg;
  fs::path base_dir;
};

Loaded load(const Options& opt) {
  const fs::path path(opt.scenario_path);
  std::string text = read_file(path, "--scenario");
  if (opt.seed) text = apply_seed(text, *opt.seed);
  Loaded l{scenario::load_scenario(text), path.parent_path()};
  if (opt.seed) scenario::override_seed(l.cfg, *opt.seed);
  return l;
}

std::string resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).string();
}

sensing::RelevanceMap make_relevance(const scenario::SensingSection& s,
                                     const fs::path& base) {
  return std::visit(
      [&](const auto& src) -> sensing::RelevanceMap {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, scenario::UniformWeights>)
          return sensing::RelevanceMap::uniform(s.grid);
        else if constexpr (std::is_same_v<T, scenario::BlobWeights>)
          return sensing::RelevanceMap::blob(s.grid, src.cy, src.cx, src.sigma);
        else if constexpr (std::is_same_v<T, scenario::CsvWeights>)
          return sensing::RelevanceMap::from_csv(
              s.grid, read_file(resolve(base, src.path), "sensing.relevance.path"));
        else
          return sensing::RelevanceMap(s.grid, src.values);
      },
      s.relevance);
}

rendering::ImportanceMap make_importance(const scenario::RenderSection& r,
                                         const fs::path& base) {
  const auto h = r.config.h, w = r.config.w;
  return std::visit(
      [&](const auto& src) -> rendering::ImportanceMap {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, scenario::UniformWeights>)
          return rendering::ImportanceMap::uniform(h, w);
        else if constexpr (std::is_same_v<T, scenario::BlobWeights>)
          return rendering::ImportanceMap::blob(h, w, src.cy, src.cx, src.sigma);
        else if constexpr (std::is_same_v<T, scenario::CsvWeights>)
          return rendering::ImportanceMap::from_csv(
              h, w, read_file(resolve(base, src.path), "render.importance.path"));
        else
          return rendering::ImportanceMap(h, w, src.values);
      },
      r.importance);
}

template <typename T>
const T& require(const std::optional<T>& section, const char* name, const char* command) {
  if (!section)
    throw ValidationError(kModule, command, name,
                          std::string("scenario has no '") + name + "' section");
  return *section;
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

// --- subcommands ------------------------------------------------------------

Table cmd_budget(const Loaded& l) {
  if (l.cfg.rates.empty())
    throw ValidationError(kModule, "budget", "rates", "scenario has no 'rates' entries");
  Table t{{"label", "payload_bits", "window_s", "required_rate_bps", "band", "feasible"}, {}};
  for (const auto& row : pipeline::rate_requirements_table(pipeline::rate_requests(l.cfg)))
    t.add_row({row.label, row.payload_bits, row.window_s, row.required_rate_bps,
               std::string(pipeline::to_string(row.band)), row.feasible});
  return t;
}

Table cmd_sweep(const Loaded& l) {
  const scenario::SweepSection section = l.cfg.sweep.value_or(scenario::SweepSection{});
  semcodec::SweepOptions options{
      section.bits_per_dim,
      scenario::payload_bits(l.cfg.uplink_payload),
      l.cfg.semantic_uplink_payload
          ? scenario::payload_bits(*l.cfg.semantic_uplink_payload)
          : static_cast<double>(semcodec::kFeatureDims) * 32.0,
      section.traditional_mode,
      scenario::make_curve(section.curve),
  };
  const auto result = semcodec::run_sweep(section.schemes, section.range, l.cfg.channel, options);
  Table t{{"scheme", "snr_db", "feature_mse", "task_proxy", "payload_bits", "outage"}, {}};
  for (const auto& r : result.rows)
    t.add_row({std::string(semcodec::to_string(r.scheme)), r.snr_db, r.feature_mse,
               r.task_proxy, r.payload_bits, r.outage});
  return t;
}

Table cmd_sense(const Loaded& l, const Options& opt) {
  const auto& s = require(l.cfg.sensing, "sensing", "sense");
  const auto rel = make_relevance(s, l.base_dir);
  Table t{{"policy", "t", "h", "w", "active", "total", "sparsity", "coverage",
           "coverage_target", "cost"},
          {}};
  auto emit = [&](const char* policy, const sensing::MaskGrid& mask, double target) {
    const auto rep = sensing::sensing_report(mask, s.per_sample_cost);
    t.add_row({std::string(policy), std::int64_t{s.grid.t}, std::int64_t{s.grid.h},
               std::int64_t{s.grid.w}, as_int(rep.samples), as_int(mask.size()),
               rep.sparsity, sensing::coverage(mask, rel), target, rep.cost});
  };
  emit("full", sensing::MaskGrid(s.grid, true), 1.0);
  const auto prior = sensing::prior_mask(rel, s.coverage_target);
  emit("prior", prior, s.coverage_target);
  if (s.feedback)
    emit("feedback", sensing::feedback_mask(s.feedback->state, s.grid, s.feedback->dt),
         s.coverage_target);
  if (!opt.mask_out.empty()) report::write_atomic(opt.mask_out, prior.to_rle_json());
  return t;
}

Table cmd_render(const Loaded& l, const Options& opt) {
  const auto& r = require(l.cfg.render, "render", "render");
  const auto imp = make_importance(r, l.base_dir);
  const std::uint64_t full = rendering::full_sample_count(r.config);
  Table t{{"policy", "h", "w", "n_full", "n_min", "samples", "speedup", "quality_proxy",
           "render_time_s"},
          {}};
  auto emit = [&](const char* policy, const rendering::RayBudget& b, std::uint32_t n_min) {
    t.add_row({std::string(policy), std::int64_t{r.config.h}, std::int64_t{r.config.w},
               std::int64_t{r.config.n_full}, std::int64_t{n_min}, as_int(b.total()),
               rendering::speedup(b, r.config),
               rendering::quality_proxy(b, imp, r.restoration_discount),
               rendering::render_time(b.total(), l.cfg.device.render_throughput)});
  };
  const auto full_budget = rendering::allocate_budget(imp, full, r.n_min, r.config);
  emit("full", full_budget, r.n_min);
  const auto semantic = rendering::allocate_budget(imp, r.total_budget, r.n_min, r.config);
  emit("semantic", semantic, r.n_min);
  if (!opt.budget_out.empty()) report::write_atomic(opt.budget_out, semantic.to_csv());
  return t;
}

Table cmd_simulate(const Loaded& l) {
  const auto& cfg = l.cfg;
  Table t{{"variant", "sense_s", "encode_s", "uplink_s", "compute_s", "render_s",
           "downlink_s", "display_s", "total_s", "budget_s", "pass", "slack_s"},
          {}};
  auto emit = [&](const char* variant, const pipeline::FrameInputs& in) {
    const auto trace = pipeline::simulate_frame(cfg, in);
    const auto rep = pipeline::check_budget(trace, cfg.budget);
    std::vector<Cell> row{std::string(variant)};
    for (const auto& st : trace.stages) row.emplace_back(st.duration);
    row.insert(row.end(), {Cell{trace.total}, Cell{rep.budget}, Cell{rep.pass}, Cell{rep.slack}});
    t.add_row(std::move(row));
  };
  emit("traditional", {});

  if (!cfg.sensing && !cfg.render && !cfg.semantic_uplink_payload) return t;
  std::optional<sensing::MaskGrid> mask;
  std::optional<rendering::RayBudget> budget;
  if (cfg.sensing)
    mask = sensing::prior_mask(make_relevance(*cfg.sensing, l.base_dir),
                               cfg.sensing->coverage_target);
  if (cfg.render)
    budget = rendering::allocate_budget(make_importance(*cfg.render, l.base_dir),
                                        cfg.render->total_budget, cfg.render->n_min,
                                        cfg.render->config);
  pipeline::FrameInputs in;
  in.mask = mask ? &*mask : nullptr;
  in.ray_budget = budget ? &*budget : nullptr;
  in.uplink_payload = cfg.semantic_uplink_payload ? &*cfg.semantic_uplink_payload : nullptr;
  emit("semantic", in);
  return t;
}

Table cmd_broadcast(const Loaded& l) {
  const auto& b = require(l.cfg.broadcast, "broadcast", "broadcast");
  const auto air = l.cfg.link_rate_bps
                       ? broadcast::airtime(b.group, *l.cfg.link_rate_bps)
                       : broadcast::airtime(b.group, l.cfg.channel, b.user_snr_db);
  std::uint64_t residual = 0;
  for (auto r : b.group.residual_bits) residual += r;
  Table t{{"users", "shared_bits", "residual_bits", "unicast_bits", "broadcast_bits",
           "savings_bits", "capacity_bps", "unicast_s", "broadcast_s"},
          {}};
  t.add_row({as_int(b.group.users), as_int(b.group.shared_bits), as_int(residual),
             as_int(broadcast::unicast_total(b.group)),
             as_int(broadcast::broadcast_total(b.group)),
             as_int(broadcast::savings(b.group)), air.capacity_bps, air.unicast_s,
             air.broadcast_s});
  return t;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic XR pipeline simulator", "xrsim"};
  app.require_subcommand(1, 1);
  Options opt;

  const std::map<std::string, std::string> commands{
      {"budget", "Required-rate table for the scenario's payloads"},
      {"sweep", "SNR sweep of feature distortion for each transmission scheme"},
      {"sense", "Sensing masks: sparsity, coverage and sampling cost"},
      {"render", "Per-ray sample allocation: speedup and quality proxy"},
      {"simulate", "Per-stage frame latency against the motion-to-photon budget"},
      {"broadcast", "Shared-stream broadcast versus per-user unicast"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", opt.scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out", opt.out_path, "Report file (default: stdout)");
    sub->add_option("--format", opt.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opt.seed, "Override the scenario seed");
    sub->add_flag("--quiet", opt.quiet, "Suppress the summary on stderr");
    if (name == "sense")
      sub->add_option("--mask-out", opt.mask_out, "Write the prior mask as RLE JSON");
    if (name == "render")
      sub->add_option("--budget-out", opt.budget_out, "Write per-pixel samples as CSV");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Loaded loaded = load(opt);
    Table table;
    if (command == "budget") table = cmd_budget(loaded);
    else if (command == "sweep") table = cmd_sweep(loaded);
    else if (command == "sense") table = cmd_sense(loaded, opt);
    else if (command == "render") table = cmd_render(loaded, opt);
    else if (command == "simulate") table = cmd_simulate(loaded);
    else table = cmd_broadcast(loaded);

    const std::string body = report::render(
        table, opt.format == "json" ? report::Format::json : report::Format::csv);
    if (opt.out_path.empty()) {
      out << body;
    } else {
      report::write_atomic(opt.out_path, body);
      if (!opt.quiet)
        err << command << ": wrote " << table.rows.size() << " rows to " << opt.out_path
            << "\n";
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace xrsim::cli
