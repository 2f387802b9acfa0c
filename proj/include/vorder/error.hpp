#pragma once

#include <stdexcept>
#include <string>

namespace vorder {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV or OSM XML).
struct ParseError : Error {
  using Error::Error;
};

// Eigensolver did not reach the requested residual within its budget.
struct EigensolverError : Error {
  using Error::Error;
};

// t-SNE internals failed (perplexity search, non-finite gradient).
struct TsneError : Error {
  using Error::Error;
};

// UMAP internals failed (non-finite force).
struct UmapError : Error {
  using Error::Error;
};

// Pipeline stage errors; each maps to a distinct process exit code.
struct ConfigError : Error {
  using Error::Error;
};
struct IngestError : Error {
  using Error::Error;
};
struct OrderingError : Error {
  using Error::Error;
};
struct MetricError : Error {
  using Error::Error;
};
struct ExportError : Error {
  using Error::Error;
};

}  // namespace vorder
