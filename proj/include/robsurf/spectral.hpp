#pragma once

// Algebraic connectivity (second-smallest Laplacian eigenvalue).
//
// Two routes compute the same quantity:
//  * dense: build L = Deg - Adj and take its spectrum from a tridiagonal QR;
//  * sparse: Lanczos on the pseudo-inverse L^+ restricted to the complement
//    of the all-ones vector. L^+ b is applied exactly by grounding the last
//    node and factoring the reduced Laplacian with a sparse LDL^T. The
//    largest eigenvalue of L^+ is 1/lambda2; the converged Ritz vector is
//    then refined with a Rayleigh quotient on L itself.
// Small graphs take the dense route; the sparse route keeps large degraded
// graphs cheap enough to evaluate thousands of times per run.

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "robsurf/error.hpp"
#include "robsurf/graph.hpp"
#include "robsurf/linalg.hpp"

namespace robsurf {

enum class SpectralRoute { automatic, dense, sparse };

inline constexpr std::size_t kDenseLaplacianLimit = 96;

inline Matrix laplacian_matrix(const Graph& g) {
  const std::size_t n = g.node_count();
  Matrix lap(n, n);
  for (std::size_t v = 0; v < n; ++v) lap(v, v) = static_cast<double>(g.degree(v));
  for (const Link& l : g.links()) {
    lap(l.first, l.second) = -1.0;
    lap(l.second, l.first) = -1.0;
  }
  return lap;
}

namespace detail {

inline double dense_lambda2(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v)
    lap(v, v) = static_cast<double>(g.degree(static_cast<NodeIndex>(v)));
  for (const Link& l : g.links()) {
    lap(l.first, l.second) = -1.0;
    lap(l.second, l.first) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NumericError("algebraic connectivity: dense eigensolver did not converge");
  return std::max(0.0, eig.eigenvalues()[1]);  // ascending order
}

inline Eigen::VectorXd apply_laplacian(const Graph& g, const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    double s = static_cast<double>(g.degree(v)) * x[v];
    for (NodeIndex w : g.neighbors(static_cast<NodeIndex>(v))) s -= x[w];
    y[v] = s;
  }
  return y;
}

inline void remove_mean(Eigen::VectorXd& x) { x.array() -= x.mean(); }

// Requires a connected graph with at least 3 nodes.
inline double sparse_lambda2(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const Eigen::Index m = n - 1;  // node n-1 is grounded

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m) + 2 * g.link_count());
  for (Eigen::Index v = 0; v < m; ++v)
    triplets.emplace_back(v, v, static_cast<double>(g.degree(static_cast<NodeIndex>(v))));
  for (const Link& l : g.links()) {
    if (static_cast<Eigen::Index>(l.second) == m) continue;
    triplets.emplace_back(l.first, l.second, -1.0);
    triplets.emplace_back(l.second, l.first, -1.0);
  }
  Eigen::SparseMatrix<double> grounded(m, m);
  grounded.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(grounded);
  if (solver.info() != Eigen::Success)
    throw NumericError("algebraic connectivity: grounded Laplacian factorization failed");

  auto apply_pinv = [&](const Eigen::VectorXd& b) {
    Eigen::VectorXd x(n);
    x.head(m) = solver.solve(b.head(m));
    x[m] = 0.0;
    remove_mean(x);
    return x;
  };

  // Deterministic start vector.
  std::mt19937_64 engine(0x5eed1a2bULL);
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i)
    q[i] = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
  remove_mean(q);
  q.normalize();

  const Eigen::Index max_steps = std::min<Eigen::Index>(n - 1, 600);
  constexpr double kResidualTolerance = 1e-11;

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.push_back(q);

  for (Eigen::Index step = 0; step < max_steps; ++step) {
    Eigen::VectorXd w = apply_pinv(basis.back());
    const double a = basis.back().dot(w);
    alpha.push_back(a);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= b.dot(w) * b;
      remove_mean(w);
    }
    const double b = w.norm();

    const auto k = static_cast<Eigen::Index>(alpha.size());
    const bool exhausted = k == max_steps;
    const bool breakdown = b <= 1e-14 * std::abs(alpha.front());
    if (k % 4 == 0 || exhausted || breakdown || k == 1) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
      Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), k - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double theta = tri.eigenvalues()[k - 1];
      const Eigen::VectorXd s = tri.eigenvectors().col(k - 1);
      const double residual = breakdown ? 0.0 : std::abs(b * s[k - 1]);
      const bool converged = residual <= kResidualTolerance * std::abs(theta);
      if (converged || exhausted || breakdown) {
        if (!converged && !breakdown && k < n - 1)
          throw NumericError("algebraic connectivity: Lanczos did not converge");
        Eigen::VectorXd ritz = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < k; ++i) ritz += s[i] * basis[static_cast<std::size_t>(i)];
        remove_mean(ritz);
        const Eigen::VectorXd lx = apply_laplacian(g, ritz);
        return std::max(0.0, ritz.dot(lx) / ritz.squaredNorm());
      }
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  throw NumericError("algebraic connectivity: Lanczos did not converge");
}

}  // namespace detail

// Second-smallest eigenvalue of L = Deg - Adj. Exactly 0 for a
// disconnected graph.
inline double laplacian_second_eigenvalue(const Graph& g,
                                          SpectralRoute route = SpectralRoute::automatic) {
  const std::size_t n = g.node_count();
  if (n < 2)
    throw DomainError("algebraic connectivity needs at least 2 nodes, got " +
                      std::to_string(n));
  if (connected_components(g).count() > 1) return 0.0;
  if (n == 2) return 2.0;
  if (route == SpectralRoute::automatic)
    route = n <= kDenseLaplacianLimit ? SpectralRoute::dense : SpectralRoute::sparse;
  return route == SpectralRoute::dense ? detail::dense_lambda2(g) : detail::sparse_lambda2(g);
}

}  // namespace robsurf
