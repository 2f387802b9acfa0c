#include "vorder/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "vorder/error.hpp"
#include "vorder/format.hpp"

namespace fs = std::filesystem;

namespace vorder {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = nl == std::string_view::npos ? text.substr(start)
                                                         : text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

// throwing wrappers over the strict token parsers, naming the bad field
double parse_double(std::string_view s, std::string_view what) {
  const std::optional<double> v = vorder::parse_double(s);
  if (!v) throw ParseError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return *v;
}

long long parse_int(std::string_view s, std::string_view what) {
  const std::optional<long long> v = vorder::parse_int(s);
  if (!v) throw ParseError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return *v;
}

void require_header(std::string_view got, std::string_view want, const fs::path& path) {
  std::string_view g = trim(got);
  // tolerate a UTF-8 byte order mark
  if (g.starts_with("\xEF\xBB\xBF")) g.remove_prefix(3);
  if (g != want)
    throw ParseError(path.string() + ": expected header '" + std::string(want) + "', got '" +
                     std::string(g) + "'");
}

// --- csv-pair ---------------------------------------------------------------

struct CsvPairPaths {
  fs::path nodes;
  fs::path edges;
};

CsvPairPaths resolve_csv_pair(const fs::path& path) {
  if (fs::is_directory(path)) return {path / "nodes.csv", path / "edges.csv"};
  if (path.filename() == "nodes.csv") {
    fs::path edges = path;
    edges.replace_filename("edges.csv");
    return {path, edges};
  }
  throw ParseError(path.string() +
                   ": csv-pair input must be a directory containing nodes.csv and edges.csv, "
                   "or the nodes.csv itself");
}

UCSGraph load_csv_pair(const fs::path& path) {
  const CsvPairPaths files = resolve_csv_pair(path);
  const std::string nodes_text = read_text_file(files.nodes);
  const std::string edges_text = read_text_file(files.edges);

  GraphBuilder builder;
  {
    const auto lines = split_lines(nodes_text);
    if (lines.empty()) throw ParseError(files.nodes.string() + ": empty file");
    require_header(lines[0], "id,lat,lon", files.nodes);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_fields(lines[i]);
      if (f.size() != 3)
        throw ParseError(files.nodes.string() + ": line " + format_int(i + 1) +
                         ": expected 3 fields, got " + format_int(f.size()));
      const std::string id(trim(f[0]));
      if (id.empty())
        throw ParseError(files.nodes.string() + ": line " + format_int(i + 1) + ": empty id");
      try {
        builder.add_node(id, parse_double(trim(f[1]), "lat"), parse_double(trim(f[2]), "lon"));
      } catch (const ParseError& e) {
        throw ParseError(files.nodes.string() + ": line " + format_int(i + 1) + ": " + e.what());
      }
    }
  }
  {
    const auto lines = split_lines(edges_text);
    if (lines.empty()) throw ParseError(files.edges.string() + ": empty file");
    require_header(lines[0], "u,v,length_m", files.edges);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_fields(lines[i]);
      if (f.size() != 3)
        throw ParseError(files.edges.string() + ": line " + format_int(i + 1) +
                         ": expected 3 fields, got " + format_int(f.size()));
      try {
        std::optional<double> length;
        const std::string_view raw = trim(f[2]);
        if (!raw.empty()) length = parse_double(raw, "length_m");
        builder.add_edge(std::string(trim(f[0])), std::string(trim(f[1])), length);
      } catch (const ParseError& e) {
        throw ParseError(files.edges.string() + ": line " + format_int(i + 1) + ": " + e.what());
      }
    }
  }
  return builder.build();
}

// --- osm-xml ----------------------------------------------------------------

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '&') {
      out.push_back(raw[i++]);
      continue;
    }
    const std::size_t semi = raw.find(';', i);
    if (semi == std::string_view::npos) {
      out.push_back(raw[i++]);
      continue;
    }
    const std::string_view ent = raw.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (ent.starts_with("#")) {
      unsigned long code = 0;
      const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
      const std::string digits(ent.substr(hex ? 2 : 1));
      char* end = nullptr;
      code = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
      if (end && *end == '\0' && code > 0 && code < 128) out.push_back(static_cast<char>(code));
      else out.append(raw.substr(i, semi - i + 1));
    } else {
      out.append(raw.substr(i, semi - i + 1));
    }
    i = semi + 1;
  }
  return out;
}

struct XmlTag {
  std::string_view name;
  std::vector<std::pair<std::string_view, std::string_view>> attrs;
  bool closing = false;     // </name>
  bool self_closed = false; // <name ... />
};

// Minimal forgiving scanner over the element stream; enough for the OSM
// export dialect (no CDATA, no nested quotes of the other kind inside
// values of the same kind).
class XmlScanner {
 public:
  explicit XmlScanner(std::string_view text) : text_(text) {}

  std::optional<XmlTag> next() {
    while (true) {
      const std::size_t lt = text_.find('<', pos_);
      if (lt == std::string_view::npos) return std::nullopt;
      pos_ = lt + 1;
      if (pos_ >= text_.size()) return std::nullopt;
      const char c = text_[pos_];
      if (c == '?' || c == '!') {
        // declaration, doctype, or comment: skip wholesale
        if (text_.compare(pos_, 3, "!--") == 0) {
          const std::size_t end = text_.find("-->", pos_);
          pos_ = end == std::string_view::npos ? text_.size() : end + 3;
        } else {
          const std::size_t end = text_.find('>', pos_);
          pos_ = end == std::string_view::npos ? text_.size() : end + 1;
        }
        continue;
      }
      return parse_tag();
    }
  }

 private:
  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' ||
           c == '.';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  XmlTag parse_tag() {
    XmlTag tag;
    if (text_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    const std::size_t name_start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    tag.name = text_.substr(name_start, pos_ - name_start);
    while (pos_ < text_.size()) {
      skip_space();
      if (pos_ >= text_.size()) break;
      if (text_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (text_[pos_] == '/') {
        tag.self_closed = true;
        ++pos_;
        continue;
      }
      const std::size_t attr_start = pos_;
      while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
      const std::string_view attr_name = text_.substr(attr_start, pos_ - attr_start);
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '=') {
        if (attr_start == pos_) ++pos_;  // stray character; do not loop forever
        continue;
      }
      ++pos_;
      skip_space();
      if (pos_ >= text_.size()) break;
      const char quote = text_[pos_];
      if (quote != '"' && quote != '\'') continue;
      ++pos_;
      const std::size_t val_start = pos_;
      const std::size_t val_end = text_.find(quote, pos_);
      if (val_end == std::string_view::npos) {
        pos_ = text_.size();
        break;
      }
      tag.attrs.emplace_back(attr_name, text_.substr(val_start, val_end - val_start));
      pos_ = val_end + 1;
    }
    return tag;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<std::string_view> attr_value(const XmlTag& tag, std::string_view name) {
  for (const auto& [k, v] : tag.attrs)
    if (k == name) return v;
  return std::nullopt;
}

UCSGraph load_osm_xml(const fs::path& path) {
  const std::string text = read_text_file(path);
  GraphBuilder builder;

  XmlScanner scanner(text);
  bool in_way = false;
  std::vector<std::string> way_refs;
  bool way_is_highway = false;

  while (auto tag = scanner.next()) {
    if (tag->closing) {
      if (tag->name == "way" && in_way) {
        if (way_is_highway) {
          for (std::size_t i = 0; i + 1 < way_refs.size(); ++i) {
            // ways can reference nodes outside the extract; skip those edges
            if (!builder.has_node(way_refs[i]) || !builder.has_node(way_refs[i + 1])) continue;
            builder.add_edge(way_refs[i], way_refs[i + 1]);
          }
        }
        in_way = false;
      }
      continue;
    }
    if (tag->name == "node") {
      const auto id = attr_value(*tag, "id");
      const auto lat = attr_value(*tag, "lat");
      const auto lon = attr_value(*tag, "lon");
      if (!id || !lat || !lon)
        throw ParseError(path.string() + ": node element missing id/lat/lon");
      builder.add_node(decode_entities(*id), parse_double(*lat, "lat"), parse_double(*lon, "lon"));
      continue;
    }
    if (tag->name == "way") {
      in_way = !tag->self_closed;
      way_refs.clear();
      way_is_highway = false;
      continue;
    }
    if (in_way && tag->name == "nd") {
      if (const auto ref = attr_value(*tag, "ref")) way_refs.push_back(decode_entities(*ref));
      continue;
    }
    if (in_way && tag->name == "tag") {
      const auto k = attr_value(*tag, "k");
      if (k && decode_entities(*k) == "highway") way_is_highway = true;
      continue;
    }
  }
  if (in_way) throw ParseError(path.string() + ": unterminated way element");
  return builder.build();
}

}  // namespace

GraphFormat graph_format_from_name(std::string_view name) {
  if (name == "csv-pair") return GraphFormat::kCsvPair;
  if (name == "osm-xml") return GraphFormat::kOsmXml;
  throw ParseError("unknown graph format '" + std::string(name) +
                   "' (expected csv-pair or osm-xml)");
}

std::string graph_format_name(GraphFormat format) {
  return format == GraphFormat::kCsvPair ? "csv-pair" : "osm-xml";
}

UCSGraph load_graph(const fs::path& path, GraphFormat format) {
  return format == GraphFormat::kCsvPair ? load_csv_pair(path) : load_osm_xml(path);
}

void save_csv_pair(const UCSGraph& g, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ExportError("cannot create " + dir.string() + ": " + ec.message());

  std::string nodes = "id,lat,lon\n";
  for (int v = 0; v < g.n(); ++v) {
    const LatLon& ll = g.raw_coords()[static_cast<std::size_t>(v)];
    nodes += g.vertex_ids()[static_cast<std::size_t>(v)];
    nodes += ',';
    nodes += format_double(ll.lat);
    nodes += ',';
    nodes += format_double(ll.lon);
    nodes += '\n';
  }
  write_text_file(dir / "nodes.csv", nodes);

  std::string edges = "u,v,length_m\n";
  for (int v = 0; v < g.n(); ++v) {
    for (const Neighbor& nb : g.neighbors(v)) {
      if (nb.index <= v) continue;
      edges += g.vertex_ids()[static_cast<std::size_t>(v)];
      edges += ',';
      edges += g.vertex_ids()[static_cast<std::size_t>(nb.index)];
      edges += ',';
      edges += format_double(nb.length_m);
      edges += '\n';
    }
  }
  write_text_file(dir / "edges.csv", edges);
}

namespace {

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;

  void bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
  void text(std::string_view s) {
    bytes(s.data(), s.size());
    const char sep = '\0';
    bytes(&sep, 1);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    bytes(&bits, sizeof bits);
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
};

}  // namespace

std::uint64_t graph_hash(const UCSGraph& g) {
  Fnv1a fnv;
  fnv.u64(static_cast<std::uint64_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) {
    fnv.text(g.vertex_ids()[static_cast<std::size_t>(v)]);
    const LatLon& ll = g.raw_coords()[static_cast<std::size_t>(v)];
    fnv.f64(ll.lat);
    fnv.f64(ll.lon);
  }
  fnv.u64(static_cast<std::uint64_t>(g.edge_count()));
  for (int v = 0; v < g.n(); ++v) {
    for (const Neighbor& nb : g.neighbors(v)) {
      if (nb.index <= v) continue;
      fnv.u64(static_cast<std::uint64_t>(v));
      fnv.u64(static_cast<std::uint64_t>(nb.index));
      fnv.f64(nb.length_m);
    }
  }
  return fnv.h;
}

std::string graph_hash_hex(const UCSGraph& g) {
  const std::uint64_t h = graph_hash(g);
  char buf[17] = {};
  for (int i = 0; i < 16; ++i) {
    const unsigned nibble = static_cast<unsigned>((h >> (60 - 4 * i)) & 0xF);
    buf[i] = static_cast<char>(nibble < 10 ? '0' + nibble : 'a' + (nibble - 10));
  }
  return std::string(buf, 16);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ParseError("failed reading " + path.string());
  return std::move(buf).str();
}

void write_text_file(const fs::path& path, std::string_view content) {
  fs::path partial = path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw ExportError("cannot open " + partial.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ExportError("failed writing " + partial.string());
  }
  std::error_code ec;
  fs::rename(partial, path, ec);
  if (ec) throw ExportError("failed to finalize " + path.string() + ": " + ec.message());
}

void write_ordering_csv(const fs::path& path, const UCSGraph& g, const Ordering& ordering) {
  if (ordering.n() != g.n() || !ordering.is_bijection())
    throw ExportError("ordering is not a bijection over the graph's vertices");
  std::string out = "vertex_id,rank\n";
  for (int v = 0; v < g.n(); ++v) {
    out += g.vertex_ids()[static_cast<std::size_t>(v)];
    out += ',';
    out += format_int(ordering.rank_of[static_cast<std::size_t>(v)] + 1);
    out += '\n';
  }
  write_text_file(path, out);
}

Ordering read_ordering_csv(const fs::path& path, const UCSGraph& g) {
  const std::string text = read_text_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(path.string() + ": empty file");
  require_header(lines[0], "vertex_id,rank", path);
  if (static_cast<int>(lines.size()) - 1 != g.n())
    throw ParseError(path.string() + ": expected " + format_int(g.n()) + " rows, got " +
                     format_int(lines.size() - 1));

  Ordering ordering;
  ordering.rank_of.assign(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != 2)
      throw ParseError(path.string() + ": line " + format_int(i + 1) + ": expected 2 fields");
    const std::string id(trim(f[0]));
    const auto idx = g.index_of(id);
    if (!idx) throw ParseError(path.string() + ": unknown vertex id '" + id + "'");
    const long long rank = parse_int(trim(f[1]), "rank");
    if (rank < 1 || rank > g.n())
      throw ParseError(path.string() + ": rank " + format_int(rank) + " out of range 1.." +
                       format_int(g.n()));
    int& slot = ordering.rank_of[static_cast<std::size_t>(*idx)];
    if (slot != -1) throw ParseError(path.string() + ": duplicate vertex id '" + id + "'");
    slot = static_cast<int>(rank - 1);
  }
  if (!ordering.is_bijection())
    throw ParseError(path.string() + ": ranks do not form a bijection onto 1.." +
                     format_int(g.n()));
  return ordering;
}

void write_embedding_csv(const fs::path& path, const UCSGraph& g, const Embedding1D& embedding) {
  if (static_cast<int>(embedding.value.size()) != g.n())
    throw ExportError("embedding length does not match the graph");
  std::string out = "vertex_id,value\n";
  for (int v = 0; v < g.n(); ++v) {
    out += g.vertex_ids()[static_cast<std::size_t>(v)];
    out += ',';
    out += format_double(embedding.value[static_cast<std::size_t>(v)]);
    out += '\n';
  }
  write_text_file(path, out);
}

namespace {

const std::vector<std::string>& canonical_metric_order() {
  static const std::vector<std::string> order = {"geo_fwd", "geo_inv", "topo_fwd", "topo_inv"};
  return order;
}

}  // namespace

void write_metrics_csv(const fs::path& path, const UCSGraph& g,
                       const std::vector<MetricSeries>& series) {
  if (series.empty()) throw ExportError("no metric series to write");
  std::vector<const MetricSeries*> cols;
  for (const auto& name : canonical_metric_order())
    for (const auto& s : series)
      if (s.metric == name) cols.push_back(&s);
  if (cols.size() != series.size())
    throw ExportError("metric series carry unknown or duplicate metric names");
  for (const auto* s : cols)
    if (static_cast<int>(s->values.size()) != g.n())
      throw ExportError("metric series length does not match the graph");

  std::string out = "vertex_id";
  for (const auto* s : cols) {
    out += ',';
    out += s->metric;
  }
  out += '\n';
  for (int v = 0; v < g.n(); ++v) {
    out += g.vertex_ids()[static_cast<std::size_t>(v)];
    for (const auto* s : cols) {
      out += ',';
      out += format_double(s->values[static_cast<std::size_t>(v)]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<MetricSeries> read_metrics_csv(const fs::path& path, const UCSGraph& g) {
  const std::string text = read_text_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(path.string() + ": empty file");
  const auto header = split_fields(lines[0]);
  if (header.size() < 2 || trim(header[0]) != "vertex_id")
    throw ParseError(path.string() + ": expected header 'vertex_id,<metric>...'");

  std::vector<MetricSeries> series(header.size() - 1);
  const auto& known = canonical_metric_order();
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string name(trim(header[c]));
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ParseError(path.string() + ": unknown metric column '" + name + "'");
    series[c - 1].metric = name;
    series[c - 1].values.assign(static_cast<std::size_t>(g.n()), 0.0);
  }
  if (static_cast<int>(lines.size()) - 1 != g.n())
    throw ParseError(path.string() + ": expected " + format_int(g.n()) + " rows, got " +
                     format_int(lines.size() - 1));

  std::vector<bool> seen(static_cast<std::size_t>(g.n()), false);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != header.size())
      throw ParseError(path.string() + ": line " + format_int(i + 1) + ": field count mismatch");
    const std::string id(trim(f[0]));
    const auto idx = g.index_of(id);
    if (!idx) throw ParseError(path.string() + ": unknown vertex id '" + id + "'");
    if (seen[static_cast<std::size_t>(*idx)])
      throw ParseError(path.string() + ": duplicate vertex id '" + id + "'");
    seen[static_cast<std::size_t>(*idx)] = true;
    for (std::size_t c = 1; c < f.size(); ++c)
      series[c - 1].values[static_cast<std::size_t>(*idx)] =
          parse_double(trim(f[c]), series[c - 1].metric);
  }
  return series;
}

}  // namespace vorder
