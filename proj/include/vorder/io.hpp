#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vorder/graph.hpp"
#include "vorder/metrics.hpp"

namespace vorder {

enum class GraphFormat { kCsvPair, kOsmXml };

GraphFormat graph_format_from_name(std::string_view name);  // "csv-pair" | "osm-xml"
std::string graph_format_name(GraphFormat format);

// csv-pair: `path` is either a directory holding nodes.csv + edges.csv or the
// nodes.csv itself (edges.csv expected beside it). osm-xml: a single file.
UCSGraph load_graph(const std::filesystem::path& path, GraphFormat format);

// Writes nodes.csv + edges.csv into `dir` (created if needed) with full
// double precision, vertices in internal order so a reload preserves it.
void save_csv_pair(const UCSGraph& g, const std::filesystem::path& dir);

// FNV-1a 64 over ids, raw coordinates, and the edge list; stable content
// fingerprint embedded in downstream sidecars to catch stale pipelines.
std::uint64_t graph_hash(const UCSGraph& g);
std::string graph_hash_hex(const UCSGraph& g);

std::string read_text_file(const std::filesystem::path& path);

// Writes through a `.partial` sibling renamed into place on success, so an
// interrupted write never leaves a plausible-looking final artifact.
void write_text_file(const std::filesystem::path& path, std::string_view content);

// `vertex_id,rank` with 1-based ranks, rows in internal vertex order.
void write_ordering_csv(const std::filesystem::path& path, const UCSGraph& g,
                        const Ordering& ordering);

// Reads ranks back (validating a 1..n bijection over exactly the graph's
// ids). Method/params are not stored in the CSV and come back empty.
Ordering read_ordering_csv(const std::filesystem::path& path, const UCSGraph& g);

// `vertex_id,value`
void write_embedding_csv(const std::filesystem::path& path, const UCSGraph& g,
                         const Embedding1D& embedding);

// `vertex_id,<metric>...` with one column per series, canonical column order.
void write_metrics_csv(const std::filesystem::path& path, const UCSGraph& g,
                       const std::vector<MetricSeries>& series);

// Values-only inverse of write_metrics_csv (params/provenance live in the
// sidecar, not the CSV).
std::vector<MetricSeries> read_metrics_csv(const std::filesystem::path& path, const UCSGraph& g);

}  // namespace vorder
