#pragma once

#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <vector>

#include "cusp/types.hpp"

namespace cusp {

using SparseMatrix = Eigen::SparseMatrix<Scalar>;

/// Uniform lattice: node multi-index i maps to origin + i * step.
template <int Dim>
struct Lattice {
  using Point = Matrix<Scalar, Dim, 1>;
  using Index = std::array<int, Dim>;

  Point origin = Point::Zero();
  Scalar step = 1.0;
  Index shape{};  // node count per axis

  Point point(const Index& i) const {
    Point p = origin;
    for (int a = 0; a < Dim; ++a) p[a] += step * i[a];
    return p;
  }
  std::size_t linear(const Index& i) const {
    std::size_t idx = 0;
    for (int a = Dim - 1; a >= 0; --a) idx = idx * static_cast<std::size_t>(shape[a]) + i[a];
    return idx;
  }
  std::size_t node_count() const {
    std::size_t n = 1;
    for (int a = 0; a < Dim; ++a) n *= static_cast<std::size_t>(shape[a]);
    return n;
  }
  bool contains(const Index& i) const {
    for (int a = 0; a < Dim; ++a) {
      if (i[a] < 0 || i[a] >= shape[a]) return false;
    }
    return true;
  }
};

/// Lattice covering [lo, hi] with nodes on both corners; step is adjusted
/// down so the box spans an integer number of cells.
template <int Dim>
Lattice<Dim> box_lattice(const Matrix<Scalar, Dim, 1>& lo, const Matrix<Scalar, Dim, 1>& hi,
                         Scalar step);

/// Interior nodes of a region on a lattice, with the fractional distance
/// (in units of the step) from every interior node to the boundary along each
/// axis direction. Direction 2a is +axis a, 2a+1 is -axis a. A fraction of 1
/// means the neighbour is interior.
template <int Dim>
struct MaskedGrid {
  using Point = typename Lattice<Dim>::Point;
  using Index = typename Lattice<Dim>::Index;
  static constexpr int kDirections = 2 * Dim;

  Lattice<Dim> lattice;
  std::vector<int> slot;              // lattice node -> unknown, -1 outside
  std::vector<Index> nodes;           // unknown -> lattice node
  std::vector<std::array<Scalar, 2 * Dim>> fraction;
  std::vector<std::array<int, 2 * Dim>> neighbour;  // unknown or -1

  int size() const { return static_cast<int>(nodes.size()); }
  Point point(int unknown) const { return lattice.point(nodes[static_cast<std::size_t>(unknown)]); }
  Scalar step() const { return lattice.step; }
};

using Inside2 = std::function<bool(const Matrix<Scalar, 2, 1>&)>;
using Inside3 = std::function<bool(const Matrix<Scalar, 3, 1>&)>;

/// Smallest boundary fraction used by the ghost-point closure; nodes closer
/// to the wall than this are treated as if the wall were this far away.
inline constexpr Scalar kMinBoundaryFraction = 1e-3;

/// Marks lattice nodes with inside(point) == true. When `locate_boundary` is
/// set, the wall position along each grid line leaving the region is found
/// by bisection on the predicate; otherwise the wall is taken at the first
/// exterior node (staircase mask).
template <int Dim>
MaskedGrid<Dim> build_masked_grid(
    const Lattice<Dim>& lattice,
    const std::function<bool(const Matrix<Scalar, Dim, 1>&)>& inside,
    bool locate_boundary = true);

/// Symmetric finite-difference form of
///   -sum_a d_a (c_a d_a u) + q u
/// with Dirichlet walls closed by linear ghost extrapolation. `coefficient`
/// (axis, point) is evaluated at half-nodes; pass nullptr for unit
/// coefficients. `potential` may be nullptr.
template <int Dim>
SparseMatrix assemble_operator(
    const MaskedGrid<Dim>& grid,
    const std::function<Scalar(int, const Matrix<Scalar, Dim, 1>&)>& coefficient,
    const std::function<Scalar(const Matrix<Scalar, Dim, 1>&)>& potential);

/// 5-point (2D) / 7-point (3D) Dirichlet Laplacian.
template <int Dim>
SparseMatrix assemble_laplacian(const MaskedGrid<Dim>& grid) {
  return assemble_operator<Dim>(grid, nullptr, nullptr);
}

/// Centered-difference discretisation of x d/dy - y d/dx on a 2D masked
/// grid; exactly skew-symmetric (exterior values are zero).
SparseMatrix assemble_rotation_generator(const MaskedGrid<2>& grid);

}  // namespace cusp
