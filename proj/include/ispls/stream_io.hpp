#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ispls/csv.hpp"
#include "ispls/errors.hpp"
#include "ispls/harness.hpp"
#include "ispls/linalg.hpp"
#include "ispls/simulate.hpp"

namespace ispls {

// Stream format: t,x1..xp,y1..yq. Row order is time order.
inline void write_stream_csv(const std::string& path, const Matrix& X, const Matrix& Y) {
  if (X.rows() != Y.rows()) throw DimensionMismatch("X and Y row counts differ");
  csv::Writer w(path);
  std::vector<std::string> header{"t"};
  for (Eigen::Index i = 0; i < X.cols(); ++i) header.push_back("x" + std::to_string(i + 1));
  for (Eigen::Index k = 0; k < Y.cols(); ++k) header.push_back("y" + std::to_string(k + 1));
  w.header(header);
  for (Eigen::Index t = 0; t < X.rows(); ++t) {
    std::vector<std::string> row{csv::fmt(static_cast<int>(t) + 1)};
    for (Eigen::Index i = 0; i < X.cols(); ++i) row.push_back(csv::fmt(X(t, i)));
    for (Eigen::Index k = 0; k < Y.cols(); ++k) row.push_back(csv::fmt(Y(t, k)));
    w.raw_row(row);
  }
}

inline std::pair<Matrix, Matrix> read_stream_csv(const std::string& path) {
  csv::Table t = csv::read(path);
  if (t.header.empty() || t.header[0] != "t")
    throw ParseError(path + ": first column must be t");
  int p = 0, q = 0;
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    const std::string& h = t.header[c];
    if (!h.empty() && h[0] == 'x' && q == 0) ++p;
    else if (!h.empty() && h[0] == 'y') ++q;
    else throw ParseError(path + ": unexpected column '" + h + "'");
  }
  if (p == 0 || q == 0) throw ParseError(path + ": need x and y columns");
  Matrix X(t.rows.size(), p);
  Matrix Y(t.rows.size(), q);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (int c = 0; c < p; ++c)
      X(r, c) = csv::parse_double(t.rows[r][c + 1], r + 2, c + 2);
    for (int c = 0; c < q; ++c)
      Y(r, c) = csv::parse_double(t.rows[r][p + 1 + c], r + 2, p + 2 + c);
  }
  return {std::move(X), std::move(Y)};
}

// Truth sidecar, long format: t,role,index.
inline void write_truth_csv(const std::string& path, const RegimeSchedule& schedule, int T) {
  csv::Writer w(path);
  w.header({"t", "role", "index"});
  for (int t = 1; t <= T; ++t) {
    int r = regime_at(schedule, t);
    for (int i : schedule.large_truth[r]) w.row(t, "large", i + 1);
    for (int i : schedule.small_truth[r]) w.row(t, "small", i + 1);
  }
}

// Selection format: t,component,variable_index,weight (1-based indices).
inline void write_selection_row(csv::Writer& w, int t, int component, const Matrix& U) {
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    if (U(i, component) != 0.0)
      w.row(t, component + 1, static_cast<int>(i) + 1, U(i, component));
}

// Aggregate format: t,component,mean,std.
inline void write_aggregate_csv(const std::string& path, const AggregateCurve& curve) {
  csv::Writer w(path);
  w.header({"t", "component", "mean", "std"});
  for (Eigen::Index t = 0; t < curve.mean.rows(); ++t)
    for (Eigen::Index r = 0; r < curve.mean.cols(); ++r)
      w.row(static_cast<int>(t) + 1, static_cast<int>(r) + 1, curve.mean(t, r),
            curve.stddev(t, r));
}

}  // namespace ispls
