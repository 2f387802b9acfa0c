#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vorder/io.hpp"
#include "vorder/metrics.hpp"

namespace vorder {

struct MethodSpec {
  std::string name;  // fiedler | tsne | umap | original | random
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> numeric;  // method hyperparameters by name
  std::string label;                      // unique artifact stem, e.g. tsne_perp30_seed1
};

struct PipelineConfig {
  std::string city;
  std::filesystem::path graph_path;
  GraphFormat graph_format = GraphFormat::kCsvPair;
  std::vector<MethodSpec> methods;

  std::optional<int> window_m;      // explicit window cardinality wins
  double window_fraction = 0.01;    // else m = max(2, round(fraction * n))
  double radius_m = 500.0;
  BallMode ball = BallMode::kGraph;
  std::vector<std::string> metrics;  // canonical order, subset of the four

  std::filesystem::path output_dir;
  bool normalize_per_city_max = false;
  bool log_scale_report = false;
  bool maps_svg = true;
  bool maps_geojson = true;
  int jobs = 1;
};

// Strict JSON config: unknown keys are errors (named in the message), types
// checked, defaults applied (window fraction 0.01, radius 500 m, graph ball),
// and stochastic methods must carry seeds. Relative paths resolve against
// `base_dir` (parse_config uses the config file's directory).
PipelineConfig parse_config(const std::filesystem::path& path);
PipelineConfig parse_config_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

// Window cardinality for a given graph size under this config.
int resolve_window_m(const PipelineConfig& config, int n);

// Builds the unique artifact label for a method spec (name + salient
// hyperparameters + seed); throws on unrecognized method names.
std::string method_label(const MethodSpec& spec);

struct OrderingArtifacts {
  Ordering ordering;
  std::optional<Embedding1D> embedding;  // absent for original/random
};

// Runs one ordering method over the graph (spec.numeric supplies
// hyperparameters, defaults fill the rest).
OrderingArtifacts compute_method_ordering(const UCSGraph& g, const MethodSpec& spec);

// ingest -> order -> eval -> report -> maps, writing everything under
// config.output_dir. Files appear via `.partial` staging, so a crashed or
// failed stage never leaves a finished-looking artifact. Errors carry their
// stage via the exception type; see exit_code_for_error.
void run_pipeline(const PipelineConfig& config);

// 2 config, 3 ingest, 4 ordering, 5 metric, 6 export, 1 anything else.
int exit_code_for_error(const std::exception& e);

}  // namespace vorder
