#include "vorder/report.hpp"

#include <algorithm>
#include <utility>

#include "vorder/format.hpp"

namespace vorder {

void normalize_per_city(std::vector<ReportEntry>& entries) {
  std::map<std::pair<std::string, std::string>, double> group_max;
  for (const auto& e : entries) {
    double& m = group_max[{e.city, e.metric}];
    for (double v : e.values) m = std::max(m, v);
  }
  for (auto& e : entries) {
    const double m = group_max[{e.city, e.metric}];
    if (m <= 0.0) continue;
    for (double& v : e.values) v /= m;
  }
}

void apply_log_scale(std::vector<ReportEntry>& entries) {
  for (auto& e : entries) e.values = log_scale(e.values);
}

namespace {

std::vector<std::pair<std::string, double>> stat_rows(const BoxplotStats& s) {
  return {{"count", static_cast<double>(s.count)},
          {"mean", s.mean},
          {"min", s.min},
          {"q1", s.q1},
          {"median", s.median},
          {"q3", s.q3},
          {"max", s.max},
          {"lower_whisker", s.lower_whisker},
          {"upper_whisker", s.upper_whisker},
          {"outlier_count", static_cast<double>(s.outliers.size())}};
}

}  // namespace

std::string render_report_csv(const std::vector<ReportEntry>& entries) {
  std::string out = "city,method,metric,stat,value\n";
  for (const auto& e : entries) {
    const BoxplotStats s = summarize(e.values);
    for (const auto& [name, value] : stat_rows(s)) {
      out += e.city;
      out += ',';
      out += e.method;
      out += ',';
      out += e.metric;
      out += ',';
      out += name;
      out += ',';
      if (name == "count" || name == "outlier_count")
        out += format_int(static_cast<long long>(value));
      else
        out += format_double(value);
      out += '\n';
    }
  }
  return out;
}

nlohmann::json render_report_json(const std::vector<ReportEntry>& entries) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    const BoxplotStats s = summarize(e.values);
    nlohmann::json cell;
    cell["city"] = e.city;
    cell["method"] = e.method;
    cell["metric"] = e.metric;
    cell["params"] = e.params;
    cell["stats"]["count"] = s.count;
    cell["stats"]["mean"] = s.mean;
    cell["stats"]["min"] = s.min;
    cell["stats"]["q1"] = s.q1;
    cell["stats"]["median"] = s.median;
    cell["stats"]["q3"] = s.q3;
    cell["stats"]["max"] = s.max;
    cell["stats"]["lower_whisker"] = s.lower_whisker;
    cell["stats"]["upper_whisker"] = s.upper_whisker;
    cell["stats"]["outliers"] = s.outliers;
    list.push_back(std::move(cell));
  }
  nlohmann::json root;
  root["entries"] = std::move(list);
  return root;
}

}  // namespace vorder
