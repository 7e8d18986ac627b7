#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "robsurf/error.hpp"
#include "robsurf/failure.hpp"
#include "robsurf/linalg.hpp"
#include "robsurf/pca.hpp"

namespace robsurf {

// R*_p = v_hat . t
inline double r_star(std::span<const double> normalized_pc, std::span<const double> metrics) {
  if (normalized_pc.size() != metrics.size())
    throw InputError("r_star: principal component and metric vector differ in length");
  return dot(normalized_pc, metrics);
}

// Weighted-sum robustness with caller-supplied weights, R = s . t. Kept as
// the baseline that R* is compared against.
inline double r_value(std::span<const double> weights, std::span<const double> metrics) {
  if (weights.size() != metrics.size())
    throw InputError("r_value: weight and metric vectors differ in length");
  return dot(weights, metrics);
}

struct RobustnessSurface {
  FailureScenario scenario;
  std::vector<int> percentages;
  Matrix omega;           // |P| x m, each row sorted in decreasing order
  Matrix omega_unsorted;  // same values, column i = configuration i
  PcaModel pca;
  double r_star_init = 1.0;
  double scale_max = 0.0;      // max(0, max(omega)), upper bound of the color scale
  std::size_t negative_count = 0;
};

inline RobustnessSurface build_surface(std::span<const Matrix> levels,
                                       std::span<const double> intact,
                                       std::span<const int> percentages,
                                       const FailureScenario& scenario, double alpha) {
  if (levels.size() != percentages.size())
    throw InputError("build_surface: one metric matrix per percentage is required");
  if (levels.empty()) throw InputError("build_surface: no failure levels");
  const std::size_t m = levels.front().rows();
  for (const Matrix& a : levels)
    if (a.rows() != m || a.cols() != intact.size())
      throw InputError("build_surface: metric matrices must all be m x n");

  RobustnessSurface s;
  s.scenario = scenario;
  s.percentages.assign(percentages.begin(), percentages.end());
  s.pca = fit_pca(levels, intact, alpha);
  s.r_star_init = r_star(s.pca.normalized, intact);

  s.omega_unsorted = Matrix(levels.size(), m);
  for (std::size_t p = 0; p < levels.size(); ++p)
    for (std::size_t i = 0; i < m; ++i)
      s.omega_unsorted(p, i) = r_star(s.pca.normalized, levels[p].row(i));

  s.omega = s.omega_unsorted;
  for (std::size_t p = 0; p < s.omega.rows(); ++p) {
    auto row = s.omega.row(p);
    std::sort(row.begin(), row.end(), std::greater<>());
  }
  for (double x : s.omega.data()) {
    s.scale_max = std::max(s.scale_max, x);
    if (x < 0.0) ++s.negative_count;
  }
  return s;
}

inline RobustnessSurface build_surface(const ScenarioRun& run, double alpha) {
  return build_surface(run.matrices, run.intact.values, run.plan.percentages, run.scenario,
                       alpha);
}

struct SurfaceSummary {
  std::vector<double> mean_per_p;
  std::vector<double> variance_per_p;  // population
  double area_under_mean = 0.0;        // trapezoidal, percent units
};

inline SurfaceSummary summarize(const Matrix& omega, std::span<const int> percentages) {
  if (omega.rows() != percentages.size())
    throw InputError("summarize: row count differs from percentage count");
  SurfaceSummary out;
  for (std::size_t p = 0; p < omega.rows(); ++p) {
    // canonical summation order: results do not depend on column order
    std::vector<double> row(omega.row(p).begin(), omega.row(p).end());
    std::sort(row.begin(), row.end(), std::greater<>());
    double mean = 0.0;
    for (double x : row) mean += x;
    mean /= static_cast<double>(row.size());
    double residual = 0.0;  // one correction pass, exact for constant rows
    for (double x : row) residual += x - mean;
    mean += residual / static_cast<double>(row.size());
    double var = 0.0;
    for (double x : row) var += (x - mean) * (x - mean);
    var /= static_cast<double>(row.size());
    out.mean_per_p.push_back(mean);
    out.variance_per_p.push_back(var);
  }
  for (std::size_t p = 1; p < percentages.size(); ++p)
    out.area_under_mean += 0.5 * (out.mean_per_p[p] + out.mean_per_p[p - 1]) *
                           static_cast<double>(percentages[p] - percentages[p - 1]);
  return out;
}

inline SurfaceSummary summarize(const RobustnessSurface& s) {
  return summarize(s.omega, s.percentages);
}

}  // namespace robsurf
