#include "cusp/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace cusp {

template <int Dim>
Lattice<Dim> box_lattice(const Matrix<Scalar, Dim, 1>& lo, const Matrix<Scalar, Dim, 1>& hi,
                         Scalar step) {
  if (!(step > 0.0)) throw Error(ErrorCode::Domain, "box_lattice: step must be > 0");
  Lattice<Dim> lat;
  lat.origin = lo;
  // a common step for every axis: the smallest that tiles the longest side
  Scalar longest = 0.0;
  for (int a = 0; a < Dim; ++a) longest = std::max(longest, hi[a] - lo[a]);
  const Scalar cells = std::ceil(longest / step - 1e-9);
  lat.step = cells > 0 ? longest / cells : step;
  for (int a = 0; a < Dim; ++a) {
    const int n = static_cast<int>(std::ceil((hi[a] - lo[a]) / lat.step - 1e-9));
    lat.shape[a] = n + 1;
  }
  return lat;
}

namespace {

template <int Dim>
Scalar wall_fraction(const std::function<bool(const Matrix<Scalar, Dim, 1>&)>& inside,
                     const Matrix<Scalar, Dim, 1>& from, const Matrix<Scalar, Dim, 1>& to) {
  Scalar lo = 0.0, hi = 1.0;
  for (int it = 0; it < 52; ++it) {
    const Scalar mid = 0.5 * (lo + hi);
    if (inside(from + mid * (to - from))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

template <int Dim>
MaskedGrid<Dim> build_masked_grid(
    const Lattice<Dim>& lattice,
    const std::function<bool(const Matrix<Scalar, Dim, 1>&)>& inside,
    bool locate_boundary) {
  using Index = typename Lattice<Dim>::Index;
  MaskedGrid<Dim> grid;
  grid.lattice = lattice;
  const std::size_t total = lattice.node_count();
  grid.slot.assign(total, -1);

  Index i{};
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rest = lin;
    for (int a = 0; a < Dim; ++a) {
      i[a] = static_cast<int>(rest % static_cast<std::size_t>(lattice.shape[a]));
      rest /= static_cast<std::size_t>(lattice.shape[a]);
    }
    if (inside(lattice.point(i))) {
      grid.slot[lin] = static_cast<int>(grid.nodes.size());
      grid.nodes.push_back(i);
    }
  }

  grid.fraction.resize(grid.nodes.size());
  grid.neighbour.resize(grid.nodes.size());
  for (std::size_t u = 0; u < grid.nodes.size(); ++u) {
    const Index& node = grid.nodes[u];
    const auto p = lattice.point(node);
    for (int dir = 0; dir < 2 * Dim; ++dir) {
      Index nb = node;
      nb[dir / 2] += (dir % 2 == 0) ? 1 : -1;
      const int other = lattice.contains(nb) ? grid.slot[lattice.linear(nb)] : -1;
      grid.neighbour[u][static_cast<std::size_t>(dir)] = other;
      Scalar frac = 1.0;
      if (other < 0 && locate_boundary) {
        frac = wall_fraction<Dim>(inside, p, lattice.point(nb));
      }
      grid.fraction[u][static_cast<std::size_t>(dir)] = frac;
    }
  }
  return grid;
}

template <int Dim>
SparseMatrix assemble_operator(
    const MaskedGrid<Dim>& grid,
    const std::function<Scalar(int, const Matrix<Scalar, Dim, 1>&)>& coefficient,
    const std::function<Scalar(const Matrix<Scalar, Dim, 1>&)>& potential) {
  const int n = grid.size();
  const Scalar h = grid.step();
  const Scalar inv_h2 = 1.0 / (h * h);
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * (2 * Dim + 1));
  for (int u = 0; u < n; ++u) {
    const auto p = grid.point(u);
    Scalar diag = potential ? potential(p) : 0.0;
    for (int dir = 0; dir < 2 * Dim; ++dir) {
      const int axis = dir / 2;
      const Scalar sign = (dir % 2 == 0) ? 1.0 : -1.0;
      const int other = grid.neighbour[static_cast<std::size_t>(u)][static_cast<std::size_t>(dir)];
      const Scalar frac =
          other >= 0 ? 1.0
                     : std::max(grid.fraction[static_cast<std::size_t>(u)][static_cast<std::size_t>(dir)],
                                kMinBoundaryFraction);
      Matrix<Scalar, Dim, 1> half = p;
      half[axis] += sign * 0.5 * frac * h;
      const Scalar c = coefficient ? coefficient(axis, half) : 1.0;
      diag += c * inv_h2 / frac;
      if (other >= 0) triplets.emplace_back(u, other, -c * inv_h2);
    }
    triplets.emplace_back(u, u, diag);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix assemble_rotation_generator(const MaskedGrid<2>& grid) {
  const int n = grid.size();
  const Scalar inv_2h = 0.5 / grid.step();
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 4);
  for (int u = 0; u < n; ++u) {
    const auto p = grid.point(u);
    const auto& nb = grid.neighbour[static_cast<std::size_t>(u)];
    // directions: 0 = +x, 1 = -x, 2 = +y, 3 = -y
    if (nb[2] >= 0) triplets.emplace_back(u, nb[2], p.x() * inv_2h);
    if (nb[3] >= 0) triplets.emplace_back(u, nb[3], -p.x() * inv_2h);
    if (nb[0] >= 0) triplets.emplace_back(u, nb[0], -p.y() * inv_2h);
    if (nb[1] >= 0) triplets.emplace_back(u, nb[1], p.y() * inv_2h);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

template Lattice<2> box_lattice<2>(const Matrix<Scalar, 2, 1>&, const Matrix<Scalar, 2, 1>&, Scalar);
template Lattice<3> box_lattice<3>(const Matrix<Scalar, 3, 1>&, const Matrix<Scalar, 3, 1>&, Scalar);
template MaskedGrid<2> build_masked_grid<2>(const Lattice<2>&, const Inside2&, bool);
template MaskedGrid<3> build_masked_grid<3>(const Lattice<3>&, const Inside3&, bool);
template SparseMatrix assemble_operator<2>(
    const MaskedGrid<2>&, const std::function<Scalar(int, const Matrix<Scalar, 2, 1>&)>&,
    const std::function<Scalar(const Matrix<Scalar, 2, 1>&)>&);
template SparseMatrix assemble_operator<3>(
    const MaskedGrid<3>&, const std::function<Scalar(int, const Matrix<Scalar, 3, 1>&)>&,
    const std::function<Scalar(const Matrix<Scalar, 3, 1>&)>&);

}  // namespace cusp
