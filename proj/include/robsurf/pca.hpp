#pragma once

// Principal component extraction for robustness surfaces: per-level sample
// covariance, averaging over levels, eigendecomposition, energy-based
// component count, and normalization of the leading eigenvector so that the
// intact metric vector scores exactly 1.

#include <cmath>
#include <cstddef>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "robsurf/error.hpp"
#include "robsurf/linalg.hpp"

namespace robsurf {

// Sample covariance of the columns of `a` (divides by m - 1). Constant
// columns produce exact zero rows and columns.
inline Matrix covariance(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < 2) throw DomainError("covariance needs at least 2 rows, got " + std::to_string(m));

  std::vector<double> mean(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    bool constant = true;
    for (std::size_t r = 0; r < m; ++r) {
      mean[j] += a(r, j);
      constant = constant && a(r, j) == a(0, j);
    }
    mean[j] = constant ? a(0, j) : mean[j] / static_cast<double>(m);
  }

  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += (a(r, i) - mean[i]) * (a(r, j) - mean[j]);
      c(i, j) = c(j, i) = s / static_cast<double>(m - 1);
    }
  }
  return c;
}

inline Matrix mean_covariance(std::span<const Matrix> covariances) {
  if (covariances.empty()) throw InputError("mean_covariance: no matrices");
  const std::size_t n = covariances.front().rows();
  Matrix out(n, n);
  for (const Matrix& c : covariances) {
    if (c.rows() != n || c.cols() != n)
      throw InputError("mean_covariance: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += c(i, j);
  }
  const double count = static_cast<double>(covariances.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) /= count;
  return out;
}

// g[j] = D[0] + ... + D[j].
inline std::vector<double> energy_quantum(std::span<const double> eigenvalues) {
  std::vector<double> g(eigenvalues.size());
  double running = 0.0;
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    running += eigenvalues[j];
    g[j] = running;
  }
  return g;
}

// Smallest l (1-based) with g[l] / g[n] >= alpha.
inline std::size_t select_l(std::span<const double> energy, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InputError("energy threshold alpha must lie in (0, 1]");
  if (energy.empty() || !(energy.back() > 0.0))
    throw DegenerateError("total eigenvalue energy is not positive; the metric data has "
                          "no variance (increase the number of configurations or levels)");
  const double total = energy.back();
  for (std::size_t l = 0; l < energy.size(); ++l)
    if (energy[l] / total >= alpha) return l + 1;
  return energy.size();
}

namespace detail {
inline std::string format_vector(std::span<const double> xs) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
  os << ']';
  return os.str();
}
}  // namespace detail

// Flips v so that t0 . v > 0.
inline std::vector<double> orient_principal(std::span<const double> v,
                                            std::span<const double> intact) {
  std::vector<double> out(v.begin(), v.end());
  if (dot(intact, v) < 0.0)
    for (double& x : out) x = -x;
  return out;
}

// v_hat_j = v_j / (t0 . v), after orienting v so the denominator is positive.
inline std::vector<double> normalize_pc(std::span<const double> v, std::span<const double> intact) {
  if (v.size() != intact.size())
    throw InputError("normalize_pc: principal component and metric vector differ in length");
  const auto oriented = orient_principal(v, intact);
  const double denominator = dot(intact, oriented);
  if (!(std::abs(denominator) > 1e-12))
    throw DegenerateError("cannot normalize principal component: t0 . v = 0 (t0 = " +
                          detail::format_vector(intact) +
                          ", v = " + detail::format_vector(v) + ")");
  std::vector<double> out(oriented.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = oriented[j] / denominator;
  return out;
}

struct PcaModel {
  Matrix mean_covariance;            // C-bar
  std::vector<double> eigenvalues;   // D, descending
  Matrix eigenvectors;               // V, columns aligned with D
  std::vector<double> energy;        // g
  double alpha = 0.9;
  std::size_t selected_l = 1;        // from the energy threshold
  std::size_t used_l = 1;            // the surface always uses one component
  std::vector<double> principal;     // v, oriented so t0 . v > 0
  std::vector<double> normalized;    // v_hat
  std::vector<double> intact;        // t0
  std::vector<std::string> warnings;
};

// Runs the full extraction on the per-level metric matrices A_p.
inline PcaModel fit_pca(std::span<const Matrix> levels, std::span<const double> intact,
                        double alpha) {
  if (levels.empty()) throw InputError("fit_pca: no metric matrices");
  const std::size_t n = intact.size();
  std::vector<Matrix> covariances;
  covariances.reserve(levels.size());
  for (const Matrix& a : levels) {
    if (a.cols() != n) throw InputError("fit_pca: metric matrix width differs from t0");
    covariances.push_back(covariance(a));
  }

  PcaModel model;
  model.alpha = alpha;
  model.intact.assign(intact.begin(), intact.end());
  model.mean_covariance = mean_covariance(covariances);

  auto eig = eigen_symmetric(model.mean_covariance);
  model.eigenvalues = std::move(eig.values);
  model.eigenvectors = std::move(eig.vectors);
  model.energy = energy_quantum(model.eigenvalues);
  model.selected_l = select_l(model.energy, alpha);
  model.used_l = 1;
  if (model.selected_l > 1) {
    std::ostringstream os;
    os.precision(6);
    os << "energy threshold alpha=" << alpha << " selects l=" << model.selected_l
       << " components (g[l]/g[n] ratios:";
    for (double gj : model.energy) os << ' ' << gj / model.energy.back();
    os << "); the surface uses only the first component";
    model.warnings.push_back(os.str());
  }

  const auto v = model.eigenvectors.column(0);
  model.principal = orient_principal(v, intact);
  model.normalized = normalize_pc(model.principal, intact);
  return model;
}

}  // namespace robsurf
