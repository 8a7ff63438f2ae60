#pragma once

#include <optional>

#include "cusp/lattice.hpp"

namespace cusp {

struct EigenSolverOptions {
  /// Known lower bound of the spectrum; the Gershgorin bound is used when
  /// empty. The shift-invert pole sits one unit below it.
  std::optional<Scalar> lower_bound;
  /// Problems below this many unknowns are solved densely.
  int dense_threshold = 1000;
  /// Required ||H x - lambda x|| / ||x|| for every returned pair.
  Scalar residual_tol = 1e-8;
  int max_krylov = 0;  // 0: chosen from the requested count
  int max_polish_sweeps = 40;
};

struct EigenPairs {
  VectorX values;     // ascending
  MatrixX vectors;    // unit columns
  VectorX residuals;  // ||H x - lambda x||
  bool dense = false;
  int iterations = 0;
};

/// Lowest `count` eigenpairs of a symmetric sparse matrix: dense
/// self-adjoint solve below the threshold, otherwise shift-invert Lanczos
/// with full reorthogonalisation followed by Rayleigh-Ritz polishing.
/// Throws NonConvergence (with the worst residual) if any pair misses the
/// residual tolerance.
EigenPairs smallest_eigenpairs(const SparseMatrix& h, int count,
                               const EigenSolverOptions& options = {});

/// Gershgorin lower bound of the spectrum.
Scalar gershgorin_lower_bound(const SparseMatrix& h);

}  // namespace cusp
