#include "mkdv/io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mkdv {

std::string fmt_real(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns)
    : header_(std::move(columns)) {}

void CsvWriter::row(const std::vector<Real>& values) {
  if (values.size() != header_.size())
    throw std::invalid_argument("CsvWriter: column count mismatch");
  rows_.push_back(values);
}

std::string CsvWriter::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header_.size(); ++i)
    os << (i ? "," : "") << header_[i];
  os << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i)
      os << (i ? "," : "") << fmt_real(r[i]);
    os << "\n";
  }
  return os.str();
}

void CsvWriter::write(const std::string& path) const {
  write_text(path, str());
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << content;
}

void write_json(const std::string& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need >= 2 points");
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  const Real n = static_cast<Real>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0))
      throw std::invalid_argument("loglog_slope: nonpositive data");
    const Real lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t)>& body) {
  unsigned nthreads = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("MKDV_THREADS"))
    nthreads = static_cast<unsigned>(std::atoi(env));
  if (nthreads < 1) nthreads = 1;
  if (nthreads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace mkdv
