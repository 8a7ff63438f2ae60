#include "cusp/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cusp {

Scalar gershgorin_lower_bound(const SparseMatrix& h) {
  VectorX diag = VectorX::Zero(h.rows());
  VectorX off = VectorX::Zero(h.rows());
  for (int col = 0; col < h.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(h, col); it; ++it) {
      if (it.row() == it.col()) {
        diag[it.row()] += it.value();
      } else {
        off[it.row()] += std::abs(it.value());
      }
    }
  }
  return (diag - off).minCoeff();
}

namespace {

VectorX residual_norms(const SparseMatrix& h, const VectorX& values, const MatrixX& vectors) {
  VectorX r(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const VectorX x = vectors.col(i);
    r[i] = (h * x - values[i] * x).norm() / x.norm();
  }
  return r;
}

[[noreturn]] void fail(const VectorX& residuals, Scalar tol) {
  Eigen::Index worst = 0;
  residuals.maxCoeff(&worst);
  std::ostringstream msg;
  msg.precision(6);
  msg << "eigensolver: residual " << residuals[worst] << " of pair " << worst
      << " exceeds tolerance " << tol;
  throw Error(ErrorCode::NonConvergence, msg.str());
}

// Orthonormalises the columns of x, then diagonalises h in their span.
void rayleigh_ritz(const SparseMatrix& h, MatrixX& x, VectorX& values) {
  Eigen::HouseholderQR<MatrixX> qr(x);
  x = qr.householderQ() * MatrixX::Identity(x.rows(), x.cols());
  const MatrixX hx = h * x;
  MatrixX g = x.transpose() * hx;
  g = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixX> es(g);
  values = es.eigenvalues();
  x = x * es.eigenvectors();
}

}  // namespace

EigenPairs smallest_eigenpairs(const SparseMatrix& h, int count,
                               const EigenSolverOptions& options) {
  const int n = static_cast<int>(h.rows());
  if (count < 1 || count > n) {
    std::ostringstream msg;
    msg << "eigensolver: requested " << count << " eigenvalues from " << n << " unknowns";
    throw Error(ErrorCode::Domain, msg.str());
  }
  EigenPairs out;

  if (n < options.dense_threshold) {
    const MatrixX dense = MatrixX(h);
    Eigen::SelfAdjointEigenSolver<MatrixX> es(dense);
    out.values = es.eigenvalues().head(count);
    out.vectors = es.eigenvectors().leftCols(count);
    out.residuals = residual_norms(h, out.values, out.vectors);
    out.dense = true;
    if (out.residuals.maxCoeff() > options.residual_tol) fail(out.residuals, options.residual_tol);
    return out;
  }

  const Scalar pole = options.lower_bound.value_or(gershgorin_lower_bound(h)) - 1.0;
  SparseMatrix shifted = h;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= pole;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence,
                "eigensolver: shifted matrix is not positive definite (bad lower bound?)");
  }

  const int guard = std::min(10, n - count);
  const int block = count + guard;
  const int max_krylov =
      std::min(n, options.max_krylov > 0 ? options.max_krylov : 3 * count + 60);

  // Lanczos on (H - pole)^{-1}, whose largest eigenvalues are wanted.
  MatrixX q(n, max_krylov + 1);
  VectorX start(n);
  for (int i = 0; i < n; ++i) start[i] = 1.0 + 0.5 * std::sin(1.7 * i + 0.3);
  q.col(0) = start.normalized();
  std::vector<Scalar> alpha, beta;
  int m = 0;
  for (int j = 0; j < max_krylov; ++j) {
    VectorX w = llt.solve(q.col(j));
    const Scalar a = q.col(j).dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      const VectorX coeffs = q.leftCols(j + 1).transpose() * w;
      w -= q.leftCols(j + 1) * coeffs;
    }
    const Scalar b = w.norm();
    m = j + 1;
    bool stop = b < 1e-14 * std::abs(alpha.front());
    if (!stop && m >= block && (m % 5 == 0 || m == max_krylov)) {
      MatrixX t = MatrixX::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<MatrixX> es(t);
      stop = true;
      for (int i = 0; i < count; ++i) {
        const Eigen::Index col = m - 1 - i;
        const Scalar theta = es.eigenvalues()[col];
        if (std::abs(b * es.eigenvectors()(m - 1, col)) > 1e-13 * std::abs(theta)) {
          stop = false;
          break;
        }
      }
    }
    if (stop) break;
    beta.push_back(b);
    q.col(j + 1) = w / b;
  }
  out.iterations = m;

  // Ritz vectors of the top `block` values seed the Rayleigh-Ritz polish.
  MatrixX t = MatrixX::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<MatrixX> es(t);
  const int keep = std::min(block, m);
  MatrixX x = q.leftCols(m) * es.eigenvectors().rightCols(keep);
  VectorX values;
  rayleigh_ritz(h, x, values);
  VectorX residuals = residual_norms(h, values.head(count), x.leftCols(count));

  for (int sweep = 0;
       sweep < options.max_polish_sweeps && residuals.maxCoeff() > options.residual_tol;
       ++sweep) {
    MatrixX y(n, x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) y.col(c) = llt.solve(x.col(c));
    x = std::move(y);
    rayleigh_ritz(h, x, values);
    residuals = residual_norms(h, values.head(count), x.leftCols(count));
  }
  if (keep < count) {
    throw Error(ErrorCode::NonConvergence, "eigensolver: Krylov space smaller than request");
  }
  out.values = values.head(count);
  out.vectors = x.leftCols(count);
  out.residuals = residuals;
  if (out.residuals.maxCoeff() > options.residual_tol) fail(out.residuals, options.residual_tol);
  return out;
}

}  // namespace cusp
