#ifndef FBSDE_REPORT_HPP
#define FBSDE_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fbsde/errors.hpp"
#include "fbsde/model.hpp"

namespace fbsde {

// One CSV row per (estimator, probe) pair. Wall time is deliberately not
// serialized (the runtime_ms column is fixed at zero) so that reruns with the
// same seed produce byte-identical files; timings go to the run summary.
struct ResultRow {
  std::string experiment;
  std::string model;
  std::string estimator_tag;
  double t = 0.0;
  double s = 0.0;
  Vector x0;
  Vector v;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_rejected = 0;
  uint64_t seed = 0;
};

inline std::string csv_header() {
  return "experiment,model,estimator_tag,t,s,x0,v,value,std_error,n_paths,"
         "n_rejected,seed,runtime_ms";
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_vector(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v(i));
  }
  return out;
}

}  // namespace detail

inline std::string to_csv(const ResultRow& row) {
  std::string out;
  out += row.experiment;
  out += ',';
  out += row.model;
  out += ',';
  out += row.estimator_tag;
  out += ',';
  out += detail::format_double(row.t);
  out += ',';
  out += detail::format_double(row.s);
  out += ',';
  out += detail::format_vector(row.x0);
  out += ',';
  out += detail::format_vector(row.v);
  out += ',';
  out += detail::format_double(row.value);
  out += ',';
  out += detail::format_double(row.std_error);
  out += ',';
  out += std::to_string(row.n_paths);
  out += ',';
  out += std::to_string(row.n_rejected);
  out += ',';
  out += std::to_string(row.seed);
  out += ",0";
  return out;
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header();
  out += '\n';
  for (const auto& row : rows) {
    out += to_csv(row);
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::string& path,
                      const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << to_csv(rows);
}

}  // namespace fbsde

#endif  // FBSDE_REPORT_HPP
