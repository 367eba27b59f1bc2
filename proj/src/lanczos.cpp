#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "predassign/error.hpp"
#include "predassign/rng.hpp"
#include "predassign/spectral.hpp"

namespace predassign {

namespace {

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = standard_normal(rng);
  return v;
}

/// Two passes of classical Gram-Schmidt against the first `cols` basis vectors.
void orthogonalize(const Eigen::MatrixXd& basis, Eigen::Index cols, Eigen::VectorXd& w) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd h = basis.leftCols(cols).transpose() * w;
    w.noalias() -= basis.leftCols(cols) * h;
  }
}

/// Indices of the K Ritz values largest in magnitude, positive first on ties.
std::vector<Eigen::Index> leading_by_magnitude(const Eigen::VectorXd& values, std::size_t K) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    return values[a] > values[b];
  });
  idx.resize(K);
  return idx;
}

}  // namespace

Embedding topk_eig(const SymmetricOperator& op, std::size_t K, const EigOptions& opts) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  if (K == 0 || static_cast<Eigen::Index>(K) > n) {
    throw InvalidParams("requested " + std::to_string(K) + " eigenpairs of a " +
                        std::to_string(n) + "-dimensional operator");
  }
  if (!(opts.tol > 0.0)) throw InvalidParams("eigensolver tolerance must be positive");

  const auto Ki = static_cast<Eigen::Index>(K);
  const Eigen::Index cap = std::min<Eigen::Index>(n, std::max<Eigen::Index>(static_cast<Eigen::Index>(opts.max_iter), Ki));
  const Eigen::Index min_dim = std::min<Eigen::Index>(cap, std::max<Eigen::Index>(2 * Ki + 1, Ki + 20));
  constexpr Eigen::Index kCheckEvery = 5;

  Rng rng(opts.seed);
  Eigen::MatrixXd basis(n, std::min<Eigen::Index>(cap, min_dim + 2 * kCheckEvery));
  std::vector<double> alpha, beta;

  Eigen::VectorXd v = random_vector(rng, n);
  v.normalize();
  Eigen::VectorXd w(n);
  double norm_est = 0.0;
  std::vector<double> best_residuals;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  std::vector<Eigen::Index> chosen;
  Eigen::Index size = 0;

  for (;;) {
    if (size == basis.cols()) basis.conservativeResize(Eigen::NoChange, std::min(cap, 2 * size));
    basis.col(size) = v;
    op.apply(v, w);
    const double a = v.dot(w);
    w.noalias() -= a * v;
    if (size > 0 && beta.back() != 0.0) w.noalias() -= beta.back() * basis.col(size - 1);
    orthogonalize(basis, size + 1, w);
    const double b = w.norm();
    alpha.push_back(a);
    ++size;
    norm_est = std::max(norm_est, std::abs(a) + b + (beta.empty() ? 0.0 : beta.back()));

    const bool exhausted = size == n;
    const bool breakdown = !exhausted && b <= 1e-12 * std::max(norm_est, 1e-300);
    const bool due = size >= min_dim && ((size - min_dim) % kCheckEvery == 0 || size == cap);

    if (exhausted || (due && !breakdown)) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), size);
      Eigen::VectorXd sub(size - 1);
      for (Eigen::Index i = 0; i + 1 < size; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const Eigen::VectorXd& ritz = tri.eigenvalues();
      chosen = leading_by_magnitude(ritz, K);
      const double scale = std::max(ritz.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
      std::vector<double> residuals;
      bool converged = true;
      for (Eigen::Index i : chosen) {
        const double r = exhausted ? 0.0 : b * std::abs(tri.eigenvectors()(size - 1, i));
        residuals.push_back(r);
        if (r > opts.tol * scale) converged = false;
      }
      if (best_residuals.empty() ||
          *std::max_element(residuals.begin(), residuals.end()) <
              *std::max_element(best_residuals.begin(), best_residuals.end())) {
        best_residuals = residuals;
      }
      if (converged || exhausted) break;
      if (size == cap) {
        throw ConvergenceError("Lanczos did not converge within " + std::to_string(cap) +
                                   " iterations",
                               best_residuals);
      }
    }
    if (!breakdown && size == cap) {
      throw ConvergenceError("Lanczos did not converge within " + std::to_string(cap) + " iterations",
                             best_residuals);
    }

    if (breakdown) {
      // Invariant subspace: continue in its orthogonal complement.
      beta.push_back(0.0);
      if (size == cap) {
        throw ConvergenceError("Lanczos basis exhausted at " + std::to_string(cap) + " vectors",
                               best_residuals);
      }
      for (int attempt = 0;; ++attempt) {
        v = random_vector(rng, n);
        orthogonalize(basis, size, v);
        const double nv = v.norm();
        if (nv > 1e-8) {
          v /= nv;
          break;
        }
        if (attempt > 10) throw ConvergenceError("cannot extend Lanczos basis", best_residuals);
      }
    } else {
      beta.push_back(b);
      v = w / b;
    }
  }

  Embedding out;
  out.krylov_dim = static_cast<std::size_t>(size);
  out.values.resize(Ki);
  out.vectors.resize(n, Ki);
  const Eigen::VectorXd& ritz = tri.eigenvalues();
  for (Eigen::Index k = 0; k < Ki; ++k) {
    const Eigen::Index i = chosen[static_cast<std::size_t>(k)];
    out.values[k] = ritz[i];
    out.vectors.col(k).noalias() = basis.leftCols(size) * tri.eigenvectors().col(i);
  }
  out.norm_estimate = ritz.cwiseAbs().maxCoeff();
  Eigen::VectorXd bv;
  for (Eigen::Index k = 0; k < Ki; ++k) {
    op.apply(out.vectors.col(k), bv);
    out.residuals.push_back((bv - out.values[k] * out.vectors.col(k)).norm());
  }
  return out;
}

}  // namespace predassign
