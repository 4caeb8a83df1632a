#pragma once
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mkdv/types.hpp"

namespace mkdv {

using Json = nlohmann::ordered_json;

// %.17g formatting so artifacts are byte-stable across runs.
std::string fmt_real(Real x);

struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> columns);
  void row(const std::vector<Real>& values);
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Real>> rows_;
};

void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const Json& j);

// Least-squares slope of log(y) vs log(x); requires positive data.
Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y);

// Deterministic parallel loop: results must be written to disjoint slots.
// Thread count from MKDV_THREADS (default: hardware).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mkdv
