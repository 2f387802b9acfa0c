#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "vorder/stats.hpp"

namespace vorder {

// One (city, method, metric) cell of a comparison report, carrying the raw
// per-vertex values plus whatever parameter provenance should survive into
// the JSON mirror.
struct ReportEntry {
  std::string city;
  std::string method;
  std::string metric;
  std::vector<double> values;
  std::map<std::string, std::string> params;
};

// Within each (city, metric) group: divide every value by the group maximum
// across methods, mapping the group onto [0,1]. A zero-max group passes
// through unchanged.
void normalize_per_city(std::vector<ReportEntry>& entries);

// log10 with the 1e-9 floor, in place.
void apply_log_scale(std::vector<ReportEntry>& entries);

// Long-format CSV `city,method,metric,stat,value`; one block of boxplot
// stats per entry, entries in input order. No entries -> header only.
std::string render_report_csv(const std::vector<ReportEntry>& entries);

// Same content plus params provenance and the outlier list.
nlohmann::json render_report_json(const std::vector<ReportEntry>& entries);

}  // namespace vorder
