#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vorder/color.hpp"
#include "vorder/error.hpp"
#include "vorder/export.hpp"
#include "vorder/io.hpp"
#include "vorder/metrics.hpp"
#include "vorder/pipeline.hpp"
#include "vorder/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

vorder::UCSGraph load(const std::string& path, const std::string& format) {
  try {
    return vorder::load_graph(path, vorder::graph_format_from_name(format));
  } catch (const std::exception& e) {
    throw vorder::IngestError(e.what());
  }
}

struct LabeledPath {
  std::string label;
  std::string path;
};

LabeledPath split_labeled(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size())
    throw vorder::ConfigError("expected label=path, got '" + arg + "'");
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

int run_app(int argc, char** argv) {
  CLI::App app{"vertex orderings of street graphs: compute, evaluate, visualize"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "execute a full pipeline from a JSON config");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "pipeline config (JSON)")->required();

  auto* ingest_cmd = app.add_subcommand("ingest", "load a street graph, write the csv-pair cache");
  std::string in_path, in_format = "csv-pair", ingest_out;
  ingest_cmd->add_option("--input", in_path, "graph input path")->required();
  ingest_cmd->add_option("--format", in_format, "csv-pair | osm-xml");
  ingest_cmd->add_option("--out", ingest_out, "cache directory")->required();

  auto* order_cmd = app.add_subcommand("order", "compute one vertex ordering");
  std::string o_graph, o_format = "csv-pair", o_method, o_out, o_embedding;
  std::optional<std::uint64_t> o_seed;
  std::optional<double> o_perplexity, o_lr, o_min_dist;
  std::optional<int> o_iterations, o_neighbors, o_epochs;
  order_cmd->add_option("--graph", o_graph, "graph path")->required();
  order_cmd->add_option("--format", o_format, "csv-pair | osm-xml");
  order_cmd->add_option("--method", o_method, "fiedler | tsne | umap | original | random")
      ->required();
  order_cmd->add_option("--seed", o_seed, "RNG seed (required for stochastic methods)");
  order_cmd->add_option("--perplexity", o_perplexity, "t-SNE perplexity");
  order_cmd->add_option("--iterations", o_iterations, "t-SNE iterations");
  order_cmd->add_option("--learning-rate", o_lr, "t-SNE/UMAP learning rate");
  order_cmd->add_option("--n-neighbors", o_neighbors, "UMAP neighbor count");
  order_cmd->add_option("--min-dist", o_min_dist, "UMAP min_dist");
  order_cmd->add_option("--epochs", o_epochs, "UMAP epochs");
  order_cmd->add_option("--out", o_out, "ordering CSV path")->required();
  order_cmd->add_option("--embedding-out", o_embedding, "also write the 1-D embedding CSV");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate metrics for an ordering");
  std::string e_graph, e_format = "csv-pair", e_ordering, e_ball = "graph", e_out;
  double e_window_frac = 0.01, e_radius = 500.0;
  std::optional<int> e_window_m;
  int e_jobs = 1;
  std::vector<std::string> e_metrics;
  eval_cmd->add_option("--graph", e_graph, "graph path")->required();
  eval_cmd->add_option("--format", e_format, "csv-pair | osm-xml");
  eval_cmd->add_option("--ordering", e_ordering, "ordering CSV")->required();
  eval_cmd->add_option("--window-frac", e_window_frac, "window fraction of n (default 0.01)");
  eval_cmd->add_option("--window-m", e_window_m, "explicit window cardinality");
  eval_cmd->add_option("--radius-m", e_radius, "ball radius in meters (default 500)");
  eval_cmd->add_option("--ball", e_ball, "graph | euclidean");
  eval_cmd->add_option("--jobs", e_jobs, "worker threads (0 = auto)");
  eval_cmd->add_option("--metrics", e_metrics,
                       "subset of geo_fwd geo_inv topo_fwd topo_inv (default all)");
  eval_cmd->add_option("--out", e_out, "metric CSV path")->required();

  auto* report_cmd =
      app.add_subcommand("report", "summarize metric CSVs into a comparison report");
  std::string r_graph, r_format = "csv-pair", r_city = "city", r_out, r_normalize = "none";
  bool r_log = false;
  std::vector<std::string> r_inputs;
  report_cmd->add_option("--graph", r_graph, "graph path")->required();
  report_cmd->add_option("--format", r_format, "csv-pair | osm-xml");
  report_cmd->add_option("--city", r_city, "city label");
  report_cmd->add_option("--metrics", r_inputs, "label=metrics.csv (repeatable)")->required();
  report_cmd->add_option("--normalize", r_normalize, "per-city-max | none");
  report_cmd->add_flag("--log", r_log, "log10 scale");
  report_cmd->add_option("--out-dir", r_out, "report output directory")->required();

  auto* map_cmd = app.add_subcommand("map", "render a color-coded vertex map");
  std::string m_graph, m_format = "csv-pair", m_ordering, m_metric_csv, m_column;
  std::string m_scale, m_out, m_map_format = "svg";
  map_cmd->add_option("--graph", m_graph, "graph path")->required();
  map_cmd->add_option("--format", m_format, "csv-pair | osm-xml");
  map_cmd->add_option("--ordering", m_ordering, "ordering CSV")->required();
  map_cmd->add_option("--metric-csv", m_metric_csv, "metric CSV to color by (default: ranks)");
  map_cmd->add_option("--column", m_column, "metric column name when --metric-csv is given");
  map_cmd->add_option("--scale", m_scale, "order | error (default by value source)");
  map_cmd->add_option("--map-format", m_map_format, "svg | geojson");
  map_cmd->add_option("--out", m_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run_cmd->parsed()) {
      vorder::run_pipeline(vorder::parse_config(config_path));
      std::printf("pipeline complete\n");
      return 0;
    }

    if (ingest_cmd->parsed()) {
      const vorder::UCSGraph g = load(in_path, in_format);
      vorder::save_csv_pair(g, ingest_out);
      std::printf("n=%d edges=%zu hash=%s\n", g.n(), g.edge_count(),
                  vorder::graph_hash_hex(g).c_str());
      return 0;
    }

    if (order_cmd->parsed()) {
      const vorder::UCSGraph g = load(o_graph, o_format);
      vorder::MethodSpec spec;
      spec.name = o_method;
      spec.seed = o_seed;
      if (o_perplexity) spec.numeric["perplexity"] = *o_perplexity;
      if (o_iterations) spec.numeric["iterations"] = *o_iterations;
      if (o_lr) spec.numeric["learning_rate"] = *o_lr;
      if (o_neighbors) spec.numeric["n_neighbors"] = *o_neighbors;
      if (o_min_dist) spec.numeric["min_dist"] = *o_min_dist;
      if (o_epochs) spec.numeric["epochs"] = *o_epochs;
      if ((o_method == "tsne" || o_method == "umap" || o_method == "random") && !o_seed)
        throw vorder::ConfigError("stochastic method '" + o_method + "' requires --seed");
      spec.label = vorder::method_label(spec);

      const vorder::OrderingArtifacts artifacts = [&] {
        try {
          return vorder::compute_method_ordering(g, spec);
        } catch (const vorder::ConfigError&) {
          throw;
        } catch (const vorder::OrderingError&) {
          throw;
        } catch (const std::exception& e) {
          // solver-specific failures (eigensolver, t-SNE, UMAP) are ordering-stage failures
          throw vorder::OrderingError(e.what());
        }
      }();
      vorder::write_ordering_csv(o_out, g, artifacts.ordering);
      json sc;
      sc["label"] = spec.label;
      sc["method"] = artifacts.ordering.method;
      sc["params"] = artifacts.ordering.params;
      if (spec.seed) sc["seed"] = *spec.seed;
      else sc["seed"] = nullptr;
      sc["graph_hash"] = vorder::graph_hash_hex(g);
      vorder::write_text_file(fs::path(o_out).replace_extension(".json"), sc.dump(2) + "\n");
      if (!o_embedding.empty()) {
        if (!artifacts.embedding)
          throw vorder::ConfigError("method '" + o_method + "' has no embedding to write");
        vorder::write_embedding_csv(o_embedding, g, *artifacts.embedding);
      }
      std::printf("ordering %s -> %s\n", spec.label.c_str(), o_out.c_str());
      return 0;
    }

    if (eval_cmd->parsed()) {
      const vorder::UCSGraph g = load(e_graph, e_format);
      const vorder::Ordering ordering = vorder::read_ordering_csv(e_ordering, g);
      vorder::BallMode ball = vorder::BallMode::kGraph;
      if (e_ball == "euclidean") ball = vorder::BallMode::kEuclidean;
      else if (e_ball != "graph")
        throw vorder::ConfigError("--ball must be graph or euclidean");
      const int m = e_window_m.value_or(
          static_cast<int>(std::max(2.0, std::round(e_window_frac * g.n()))));

      std::vector<std::string> which = e_metrics;
      if (which.empty()) which = {"geo_fwd", "geo_inv", "topo_fwd", "topo_inv"};
      std::vector<vorder::MetricSeries> series;
      try {
        for (const auto& name : which) {
          if (name == "geo_fwd")
            series.push_back(vorder::geometric_forward(g, ordering, m, e_jobs));
          else if (name == "geo_inv")
            series.push_back(vorder::geometric_inverse(g, ordering, e_radius, ball, e_jobs));
          else if (name == "topo_fwd")
            series.push_back(vorder::topological_forward(g, ordering, e_jobs));
          else if (name == "topo_inv")
            series.push_back(vorder::topological_inverse(g, ordering, e_jobs));
          else
            throw vorder::ConfigError("unknown metric '" + name + "'");
        }
      } catch (const vorder::Error&) {
        throw;
      } catch (const std::exception& e) {
        throw vorder::MetricError(e.what());
      }
      vorder::write_metrics_csv(e_out, g, series);
      json sc;
      sc["metric_params"]["m"] = m;
      sc["metric_params"]["radius_m"] = e_radius;
      sc["metric_params"]["ball"] = e_ball;
      sc["graph_hash"] = vorder::graph_hash_hex(g);
      sc["ordering"]["source"] = e_ordering;
      vorder::write_text_file(fs::path(e_out).replace_extension(".json"), sc.dump(2) + "\n");
      std::printf("metrics -> %s\n", e_out.c_str());
      return 0;
    }

    if (report_cmd->parsed()) {
      const vorder::UCSGraph g = load(r_graph, r_format);
      if (r_normalize != "per-city-max" && r_normalize != "none")
        throw vorder::ConfigError("--normalize must be per-city-max or none");
      std::vector<vorder::ReportEntry> entries;
      for (const auto& arg : r_inputs) {
        const LabeledPath lp = split_labeled(arg);
        for (const auto& series : vorder::read_metrics_csv(lp.path, g)) {
          vorder::ReportEntry entry;
          entry.city = r_city;
          entry.method = lp.label;
          entry.metric = series.metric;
          entry.values = series.values;
          entries.push_back(std::move(entry));
        }
      }
      if (r_normalize == "per-city-max") vorder::normalize_per_city(entries);
      if (r_log) vorder::apply_log_scale(entries);

      fs::create_directories(r_out);
      vorder::write_text_file(fs::path(r_out) / "report.csv", vorder::render_report_csv(entries));
      vorder::write_text_file(fs::path(r_out) / "report.json",
                              vorder::render_report_json(entries).dump(2) + "\n");
      std::printf("report -> %s\n", r_out.c_str());
      return 0;
    }

    if (map_cmd->parsed()) {
      const vorder::UCSGraph g = load(m_graph, m_format);
      const vorder::Ordering ordering = vorder::read_ordering_csv(m_ordering, g);
      std::vector<double> values;
      std::string default_scale = "order";
      if (!m_metric_csv.empty()) {
        if (m_column.empty())
          throw vorder::ConfigError("--column is required with --metric-csv");
        bool found = false;
        for (const auto& series : vorder::read_metrics_csv(m_metric_csv, g)) {
          if (series.metric == m_column) {
            values = series.values;
            found = true;
            break;
          }
        }
        if (!found)
          throw vorder::ConfigError("column '" + m_column + "' not present in " + m_metric_csv);
        default_scale = "error";
      } else {
        values.assign(ordering.rank_of.begin(), ordering.rank_of.end());
      }
      const vorder::ColorScale scale =
          vorder::ColorScale::from_name(m_scale.empty() ? default_scale : m_scale);
      vorder::MapFormat format = vorder::MapFormat::kSvg;
      if (m_map_format == "geojson") format = vorder::MapFormat::kGeojson;
      else if (m_map_format != "svg")
        throw vorder::ConfigError("--map-format must be svg or geojson");
      vorder::export_map(g, values, ordering, scale, m_out, format);
      std::printf("map -> %s\n", m_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return vorder::exit_code_for_error(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_app(argc, argv); }
