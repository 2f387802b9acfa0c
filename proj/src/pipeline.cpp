#include "vorder/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <utility>

#include "vorder/color.hpp"
#include "vorder/error.hpp"
#include "vorder/export.hpp"
#include "vorder/fiedler.hpp"
#include "vorder/format.hpp"
#include "vorder/orderings.hpp"
#include "vorder/report.hpp"
#include "vorder/stats.hpp"
#include "vorder/tsne.hpp"
#include "vorder/umap.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vorder {

namespace {

const std::vector<std::string>& all_metrics() {
  static const std::vector<std::string> names = {"geo_fwd", "geo_inv", "topo_fwd", "topo_inv"};
  return names;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

const json& require_key(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + " must be a string");
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  return v.get<double>();
}

long long get_integer(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<long long>(d);
  }
  throw ConfigError(where + " must be an integer");
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(where + " must be a boolean");
  return v.get<bool>();
}

struct MethodRule {
  bool stochastic;
  std::vector<std::string> numeric_keys;
};

const std::map<std::string, MethodRule>& method_rules() {
  static const std::map<std::string, MethodRule> rules = {
      {"fiedler", {false, {}}},
      {"original", {false, {}}},
      {"random", {true, {}}},
      {"tsne",
       {true,
        {"perplexity", "iterations", "learning_rate", "early_exaggeration",
         "exaggeration_iterations"}}},
      {"umap",
       {true, {"n_neighbors", "min_dist", "epochs", "learning_rate", "negative_sample_rate"}}},
  };
  return rules;
}

void validate_method_numeric(const MethodSpec& spec) {
  const auto check_int = [&](const char* key, long long lo) {
    const auto it = spec.numeric.find(key);
    if (it == spec.numeric.end()) return;
    if (it->second != std::floor(it->second) || it->second < static_cast<double>(lo))
      throw ConfigError("method '" + spec.name + "': " + key + " must be an integer >= " +
                        format_int(lo));
  };
  const auto check_pos = [&](const char* key) {
    const auto it = spec.numeric.find(key);
    if (it != spec.numeric.end() && !(it->second > 0.0))
      throw ConfigError("method '" + spec.name + "': " + key + " must be positive");
  };
  if (spec.name == "tsne") {
    const auto it = spec.numeric.find("perplexity");
    if (it != spec.numeric.end() && !(it->second > 1.0))
      throw ConfigError("method 'tsne': perplexity must exceed 1");
    check_int("iterations", 1);
    check_int("exaggeration_iterations", 0);
    check_pos("learning_rate");
    check_pos("early_exaggeration");
  } else if (spec.name == "umap") {
    check_int("n_neighbors", 2);
    check_int("epochs", 1);
    check_int("negative_sample_rate", 1);
    check_pos("learning_rate");
    const auto it = spec.numeric.find("min_dist");
    if (it != spec.numeric.end() && it->second < 0.0)
      throw ConfigError("method 'umap': min_dist must be non-negative");
  }
}

double numeric_or(const MethodSpec& spec, const char* key, double fallback) {
  const auto it = spec.numeric.find(key);
  return it == spec.numeric.end() ? fallback : it->second;
}

}  // namespace

std::string method_label(const MethodSpec& spec) {
  if (spec.name == "fiedler" || spec.name == "original") return spec.name;
  if (spec.name == "random") return "random_seed" + format_int(spec.seed.value_or(0));
  if (spec.name == "tsne")
    return "tsne_perp" + format_double(numeric_or(spec, "perplexity", 30.0)) + "_seed" +
           format_int(spec.seed.value_or(0));
  if (spec.name == "umap")
    return "umap_k" +
           format_int(static_cast<long long>(numeric_or(spec, "n_neighbors", 15.0))) + "_seed" +
           format_int(spec.seed.value_or(0));
  throw ConfigError("unknown method '" + spec.name + "'");
}

PipelineConfig parse_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config_json(j, path.parent_path());
}

PipelineConfig parse_config_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j, {"city", "graph", "methods", "metrics", "output_dir", "report", "maps", "jobs"},
             "config");

  PipelineConfig cfg;

  const json& graph = require_key(j, "graph", "config");
  if (!graph.is_object()) throw ConfigError("'graph' must be an object");
  check_keys(graph, {"path", "format"}, "graph");
  cfg.graph_path = base_dir / fs::path(get_string(require_key(graph, "path", "graph"),
                                                  "graph.path"));
  if (graph.contains("format")) {
    try {
      cfg.graph_format = graph_format_from_name(get_string(graph["format"], "graph.format"));
    } catch (const ParseError& e) {
      throw ConfigError(e.what());
    }
  }

  const json& methods = require_key(j, "methods", "config");
  if (!methods.is_array() || methods.empty())
    throw ConfigError("'methods' must be a nonempty array");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const json& mj = methods[i];
    const std::string where = "methods[" + format_int(i) + "]";
    if (!mj.is_object()) throw ConfigError(where + " must be an object");

    MethodSpec spec;
    spec.name = get_string(require_key(mj, "name", where), where + ".name");
    const auto rule = method_rules().find(spec.name);
    if (rule == method_rules().end())
      throw ConfigError(where + ": unknown method '" + spec.name + "'");

    std::vector<std::string_view> allowed = {"name", "seed"};
    for (const auto& key : rule->second.numeric_keys) allowed.push_back(key);
    for (const auto& [key, value] : mj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ConfigError("unknown key '" + key + "' in " + where + " (method '" + spec.name +
                          "')");
    }

    if (mj.contains("seed")) {
      if (!rule->second.stochastic)
        throw ConfigError(where + ": method '" + spec.name + "' does not take a seed");
      const long long seed = get_integer(mj["seed"], where + ".seed");
      if (seed < 0) throw ConfigError(where + ".seed must be non-negative");
      spec.seed = static_cast<std::uint64_t>(seed);
    } else if (rule->second.stochastic) {
      throw ConfigError(where + ": stochastic method '" + spec.name + "' requires a seed");
    }

    for (const auto& key : rule->second.numeric_keys)
      if (mj.contains(key)) spec.numeric[key] = get_number(mj[key], where + "." + key);
    validate_method_numeric(spec);
    spec.label = method_label(spec);
    cfg.methods.push_back(std::move(spec));
  }
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    for (std::size_t k = i + 1; k < cfg.methods.size(); ++k)
      if (cfg.methods[i].label == cfg.methods[k].label)
        throw ConfigError("duplicate method configuration '" + cfg.methods[i].label + "'");

  cfg.metrics = all_metrics();
  if (j.contains("metrics")) {
    const json& mj = j["metrics"];
    if (!mj.is_object()) throw ConfigError("'metrics' must be an object");
    check_keys(mj, {"window_fraction", "window_m", "radius_m", "ball", "which"}, "metrics");
    if (mj.contains("window_fraction")) {
      cfg.window_fraction = get_number(mj["window_fraction"], "metrics.window_fraction");
      if (!(cfg.window_fraction > 0.0) || !(cfg.window_fraction <= 1.0))
        throw ConfigError("metrics.window_fraction must lie in (0, 1]");
    }
    if (mj.contains("window_m")) {
      const long long m = get_integer(mj["window_m"], "metrics.window_m");
      if (m < 2) throw ConfigError("metrics.window_m must be at least 2");
      cfg.window_m = static_cast<int>(m);
    }
    if (mj.contains("radius_m")) {
      cfg.radius_m = get_number(mj["radius_m"], "metrics.radius_m");
      if (!(cfg.radius_m > 0.0)) throw ConfigError("metrics.radius_m must be positive");
    }
    if (mj.contains("ball")) {
      const std::string ball = get_string(mj["ball"], "metrics.ball");
      if (ball == "graph") cfg.ball = BallMode::kGraph;
      else if (ball == "euclidean") cfg.ball = BallMode::kEuclidean;
      else throw ConfigError("metrics.ball must be 'graph' or 'euclidean'");
    }
    if (mj.contains("which")) {
      if (!mj["which"].is_array() || mj["which"].empty())
        throw ConfigError("metrics.which must be a nonempty array");
      std::vector<std::string> picked;
      for (const auto& name_json : mj["which"]) {
        const std::string name = get_string(name_json, "metrics.which entries");
        if (std::find(all_metrics().begin(), all_metrics().end(), name) == all_metrics().end())
          throw ConfigError("metrics.which: unknown metric '" + name + "'");
        if (std::find(picked.begin(), picked.end(), name) != picked.end())
          throw ConfigError("metrics.which: duplicate metric '" + name + "'");
        picked.push_back(name);
      }
      // keep canonical ordering regardless of listing order
      cfg.metrics.clear();
      for (const auto& name : all_metrics())
        if (std::find(picked.begin(), picked.end(), name) != picked.end())
          cfg.metrics.push_back(name);
    }
  }

  cfg.output_dir =
      base_dir / fs::path(get_string(require_key(j, "output_dir", "config"), "output_dir"));

  if (j.contains("report")) {
    const json& rj = j["report"];
    if (!rj.is_object()) throw ConfigError("'report' must be an object");
    check_keys(rj, {"normalize", "log_scale"}, "report");
    if (rj.contains("normalize")) {
      const std::string mode = get_string(rj["normalize"], "report.normalize");
      if (mode == "per-city-max") cfg.normalize_per_city_max = true;
      else if (mode == "none") cfg.normalize_per_city_max = false;
      else throw ConfigError("report.normalize must be 'per-city-max' or 'none'");
    }
    if (rj.contains("log_scale")) cfg.log_scale_report = get_bool(rj["log_scale"], "report.log_scale");
  }

  if (j.contains("maps")) {
    const json& mj = j["maps"];
    if (!mj.is_object()) throw ConfigError("'maps' must be an object");
    check_keys(mj, {"svg", "geojson"}, "maps");
    if (mj.contains("svg")) cfg.maps_svg = get_bool(mj["svg"], "maps.svg");
    if (mj.contains("geojson")) cfg.maps_geojson = get_bool(mj["geojson"], "maps.geojson");
  }

  if (j.contains("jobs")) {
    const long long jobs = get_integer(j["jobs"], "jobs");
    if (jobs < 0) throw ConfigError("jobs must be >= 0 (0 = auto)");
    cfg.jobs = static_cast<int>(jobs);
  }

  if (j.contains("city")) cfg.city = get_string(j["city"], "city");
  if (cfg.city.empty()) {
    cfg.city = cfg.graph_path.stem().string();
    if (cfg.city.empty() || cfg.city == "nodes") cfg.city = "city";
  }
  return cfg;
}

int resolve_window_m(const PipelineConfig& config, int n) {
  if (config.window_m) return *config.window_m;
  const long long m = std::llround(config.window_fraction * static_cast<double>(n));
  return static_cast<int>(std::max<long long>(2, m));
}

namespace {

json ordering_sidecar(const MethodSpec& spec, const Ordering& ordering,
                      const std::string& hash) {
  json sc;
  sc["label"] = spec.label;
  sc["method"] = ordering.method;
  sc["params"] = ordering.params;
  if (spec.seed) sc["seed"] = *spec.seed;
  else sc["seed"] = nullptr;
  sc["graph_hash"] = hash;
  return sc;
}

struct MethodRun {
  MethodSpec spec;
  Ordering ordering;
  std::optional<Embedding1D> embedding;
};

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ExportError("cannot create " + dir.string() + ": " + ec.message());
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace

OrderingArtifacts compute_method_ordering(const UCSGraph& g, const MethodSpec& spec) {
  OrderingArtifacts out;
  if (spec.name == "fiedler") {
    FiedlerOrderResult res = fiedler_order(g);
    out.ordering = std::move(res.ordering);
    out.embedding = std::move(res.embedding);
  } else if (spec.name == "original") {
    out.ordering = original_order(g);
  } else if (spec.name == "random") {
    out.ordering = random_order(g, spec.seed.value_or(0));
  } else if (spec.name == "tsne") {
    TsneParams params;
    params.perplexity = numeric_or(spec, "perplexity", params.perplexity);
    params.iterations = static_cast<int>(numeric_or(spec, "iterations", params.iterations));
    params.learning_rate = numeric_or(spec, "learning_rate", params.learning_rate);
    params.early_exaggeration = numeric_or(spec, "early_exaggeration", params.early_exaggeration);
    params.exaggeration_iterations = static_cast<int>(
        numeric_or(spec, "exaggeration_iterations", params.exaggeration_iterations));
    params.seed = spec.seed.value_or(0);
    TsneOrderResult res = tsne_order(g, params);
    out.ordering = std::move(res.ordering);
    out.embedding = std::move(res.embedding);
  } else if (spec.name == "umap") {
    UmapParams params;
    params.n_neighbors = static_cast<int>(numeric_or(spec, "n_neighbors", params.n_neighbors));
    params.min_dist = numeric_or(spec, "min_dist", params.min_dist);
    params.epochs = static_cast<int>(numeric_or(spec, "epochs", params.epochs));
    params.learning_rate = numeric_or(spec, "learning_rate", params.learning_rate);
    params.negative_sample_rate = static_cast<int>(
        numeric_or(spec, "negative_sample_rate", params.negative_sample_rate));
    params.seed = spec.seed.value_or(0);
    UmapOrderResult res = umap_order(g, params);
    out.ordering = std::move(res.ordering);
    out.embedding = std::move(res.embedding);
  } else {
    throw ConfigError("unknown method '" + spec.name + "'");
  }
  return out;
}

void run_pipeline(const PipelineConfig& config) {
  // --- ingest ---------------------------------------------------------------
  UCSGraph loaded = [&] {
    try {
      return load_graph(config.graph_path, config.graph_format);
    } catch (const ExportError&) {
      throw;
    } catch (const std::exception& e) {
      throw IngestError(std::string("ingest: ") + e.what());
    }
  }();

  make_dir(config.output_dir / "graph");
  save_csv_pair(loaded, config.output_dir / "graph");

  // downstream stages run off the cache, same as a restarted pipeline would
  const UCSGraph g = [&] {
    try {
      return load_graph(config.output_dir / "graph", GraphFormat::kCsvPair);
    } catch (const ExportError&) {
      throw;
    } catch (const std::exception& e) {
      throw IngestError(std::string("ingest: cache reload: ") + e.what());
    }
  }();
  const std::string hash = graph_hash_hex(g);

  // --- order ----------------------------------------------------------------
  make_dir(config.output_dir / "orderings");
  make_dir(config.output_dir / "embeddings");
  std::vector<MethodRun> runs;
  for (const MethodSpec& spec : config.methods) {
    try {
      OrderingArtifacts artifacts = compute_method_ordering(g, spec);
      runs.push_back({spec, std::move(artifacts.ordering), std::move(artifacts.embedding)});
    } catch (const std::exception& e) {
      throw OrderingError("ordering '" + spec.label + "': " + e.what());
    }
    const MethodRun& run = runs.back();
    write_ordering_csv(config.output_dir / "orderings" / (spec.label + ".csv"), g, run.ordering);
    write_json_file(config.output_dir / "orderings" / (spec.label + ".json"),
                    ordering_sidecar(spec, run.ordering, hash));
    if (run.embedding)
      write_embedding_csv(config.output_dir / "embeddings" / (spec.label + ".csv"), g,
                          *run.embedding);
  }

  // --- eval -----------------------------------------------------------------
  make_dir(config.output_dir / "metrics");
  const int window_m = resolve_window_m(config, g.n());
  std::vector<std::vector<MetricSeries>> all_series(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const MethodRun& run = runs[i];
    try {
      // stage isolation: ranks come back off the ordering artifact
      Ordering ordering =
          read_ordering_csv(config.output_dir / "orderings" / (run.spec.label + ".csv"), g);
      ordering.method = run.ordering.method;
      ordering.params = run.ordering.params;
      for (const std::string& name : config.metrics) {
        if (name == "geo_fwd")
          all_series[i].push_back(geometric_forward(g, ordering, window_m, config.jobs));
        else if (name == "geo_inv")
          all_series[i].push_back(
              geometric_inverse(g, ordering, config.radius_m, config.ball, config.jobs));
        else if (name == "topo_fwd")
          all_series[i].push_back(topological_forward(g, ordering, config.jobs));
        else
          all_series[i].push_back(topological_inverse(g, ordering, config.jobs));
      }
    } catch (const ExportError&) {
      throw;
    } catch (const std::exception& e) {
      throw MetricError("metrics '" + run.spec.label + "': " + e.what());
    }

    write_metrics_csv(config.output_dir / "metrics" / (run.spec.label + ".csv"), g,
                      all_series[i]);
    json sc;
    sc["metric_params"]["m"] = window_m;
    sc["metric_params"]["radius_m"] = config.radius_m;
    sc["metric_params"]["ball"] = config.ball == BallMode::kGraph ? "graph" : "euclidean";
    sc["metric_params"]["metrics"] = config.metrics;
    sc["ordering"]["label"] = run.spec.label;
    sc["ordering"]["method"] = run.ordering.method;
    sc["ordering"]["params"] = run.ordering.params;
    sc["graph_hash"] = hash;
    write_json_file(config.output_dir / "metrics" / (run.spec.label + ".json"), sc);
  }

  // --- report ---------------------------------------------------------------
  make_dir(config.output_dir / "report");
  try {
    std::vector<ReportEntry> entries;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (const MetricSeries& series : all_series[i]) {
        ReportEntry entry;
        entry.city = config.city;
        entry.method = runs[i].spec.label;
        entry.metric = series.metric;
        entry.values = series.values;
        entry.params = series.ordering_params;
        for (const auto& [k, v] : series.params) entry.params["metric_" + k] = v;
        entries.push_back(std::move(entry));
      }
    }
    if (config.normalize_per_city_max) normalize_per_city(entries);
    if (config.log_scale_report) apply_log_scale(entries);

    write_text_file(config.output_dir / "report" / "report.csv", render_report_csv(entries));
    write_json_file(config.output_dir / "report" / "report.json", render_report_json(entries));

    for (const std::string& metric : config.metrics) {
      std::vector<BoxplotGroup> groups;
      for (const ReportEntry& entry : entries)
        if (entry.metric == metric) groups.push_back({entry.method, summarize(entry.values)});
      BoxplotOptions opts;
      opts.with_outliers = false;
      export_boxplot_svg(groups,
                         config.output_dir / "report" / ("boxplot_" + metric + "_no_outliers.svg"),
                         opts);
      opts.with_outliers = true;
      export_boxplot_svg(
          groups, config.output_dir / "report" / ("boxplot_" + metric + "_with_outliers.svg"),
          opts);
    }
  } catch (const ExportError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExportError(std::string("report: ") + e.what());
  }

  // --- maps -----------------------------------------------------------------
  if (!config.maps_svg && !config.maps_geojson) return;
  make_dir(config.output_dir / "maps");
  try {
    const ColorScale order_scale = ColorScale::order();
    const ColorScale error_scale = ColorScale::error();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const MethodRun& run = runs[i];
      std::vector<double> rank_values(run.ordering.rank_of.begin(), run.ordering.rank_of.end());
      const fs::path base = config.output_dir / "maps";
      if (config.maps_svg)
        export_map(g, rank_values, run.ordering, order_scale,
                   base / (run.spec.label + "_order.svg"), MapFormat::kSvg);
      if (config.maps_geojson)
        export_map(g, rank_values, run.ordering, order_scale,
                   base / (run.spec.label + "_order.geojson"), MapFormat::kGeojson);
      for (const MetricSeries& series : all_series[i]) {
        if (config.maps_svg)
          export_map(g, series.values, run.ordering, error_scale,
                     base / (run.spec.label + "_" + series.metric + ".svg"), MapFormat::kSvg);
        if (config.maps_geojson)
          export_map(g, series.values, run.ordering, error_scale,
                     base / (run.spec.label + "_" + series.metric + ".geojson"),
                     MapFormat::kGeojson);
      }
    }
  } catch (const ExportError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExportError(std::string("maps: ") + e.what());
  }
}

int exit_code_for_error(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const IngestError*>(&e)) return 3;
  if (dynamic_cast<const OrderingError*>(&e)) return 4;
  if (dynamic_cast<const MetricError*>(&e)) return 5;
  if (dynamic_cast<const ExportError*>(&e)) return 6;
  if (dynamic_cast<const ParseError*>(&e)) return 3;
  return 1;
}

}  // namespace vorder
