#ifndef MFS_FRONTAL_HPP
#define MFS_FRONTAL_HPP

// Dense frontal kernels: partial LU (Schur complement) of a front and the
// matching back-substitution. Templated on the scalar type; the solver
// pipeline instantiates them with double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfs/space.hpp"

namespace mfs {

class PivotBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense frontal matrix. The first `num_interior` rows/columns are the fully
/// assembled unknowns (A block), the remaining ones the interface (D block).
template <typename Scalar>
struct Front {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<Index> dofs;
  Eigen::Index num_interior = 0;
  Matrix matrix;
  Vector rhs;

  Eigen::Index size() const { return static_cast<Eigen::Index>(dofs.size()); }
  Eigen::Index num_interface() const { return size() - num_interior; }
};

/// Result of eliminating the interior unknowns of a front.
///
/// `upper` holds rows [0,q) of the partially factored front: L11 strictly
/// below the diagonal, U11 on and above it, U12 = L11^{-1} B to the right.
/// `lower` holds L21 = C U11^{-1}. Together they are the q^2 + 2qr factor
/// entries charged to memory; `schur` is transient.
template <typename Scalar>
struct FactoredFront {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<Index> dofs;
  Eigen::Index num_interior = 0;
  Matrix upper;
  Matrix lower;
  Matrix schur;        // D - C A^{-1} B
  Vector rhs_interior; // L11^{-1} f
  Vector rhs_update;   // g - C A^{-1} f
  std::uint64_t flops = 0;

  Eigen::Index q() const { return num_interior; }
  Eigen::Index r() const { return static_cast<Eigen::Index>(dofs.size()) - num_interior; }
  std::uint64_t factor_entries() const {
    const auto qq = static_cast<std::uint64_t>(q());
    const auto rr = static_cast<std::uint64_t>(r());
    return qq * qq + 2 * qq * rr;
  }
};

namespace flops {

// Operation counts of the kernels below, one per scalar +,-,*,/.
inline std::uint64_t unit_lower_solve(std::uint64_t n, std::uint64_t cols) {
  return n == 0 ? 0 : n * (n - 1) * cols;
}
inline std::uint64_t upper_solve(std::uint64_t n, std::uint64_t cols) {
  return n * n * cols;
}
inline std::uint64_t gemm(std::uint64_t m, std::uint64_t k, std::uint64_t n) {
  return 2 * m * k * n;
}
inline std::uint64_t gemv(std::uint64_t m, std::uint64_t n) { return 2 * m * n; }

}  // namespace flops

namespace detail {

inline constexpr Eigen::Index kPanelWidth = 48;

}  // namespace detail

/// Eliminates the interior block of `front` without pivoting.
///
/// Right-looking blocked LU over the first q columns of the whole front, so
/// the trailing r x r block ends up as the Schur complement. Throws
/// PivotBreakdown when a pivot falls below 1e-14 times the largest initial
/// diagonal magnitude.
template <typename Scalar>
FactoredFront<Scalar> schur_eliminate(Front<Scalar> front) {
  using Matrix = typename Front<Scalar>::Matrix;
  const Eigen::Index n = front.size();
  const Eigen::Index q = front.num_interior;
  const Eigen::Index r = n - q;
  if (front.matrix.rows() != n || front.matrix.cols() != n || front.rhs.size() != n ||
      q < 0 || q > n) {
    throw std::invalid_argument("schur_eliminate: inconsistent front dimensions");
  }

  FactoredFront<Scalar> out;
  out.dofs = std::move(front.dofs);
  out.num_interior = q;
  Matrix& m = front.matrix;
  auto& b = front.rhs;
  std::uint64_t count = 0;

  if (q > 0) {
    using std::abs;
    const Scalar max_diag = n > 0 ? m.diagonal().cwiseAbs().maxCoeff() : Scalar(0);
    const Scalar tiny = Scalar(1e-14) * max_diag;

    for (Eigen::Index k0 = 0; k0 < q; k0 += detail::kPanelWidth) {
      const Eigen::Index kb = std::min(detail::kPanelWidth, q - k0);
      const Eigen::Index panel_end = k0 + kb;
      const Eigen::Index rest = n - panel_end;

      // Unblocked LU of the panel columns, all rows below k0.
      for (Eigen::Index k = k0; k < panel_end; ++k) {
        const Scalar pivot = m(k, k);
        if (!(abs(pivot) >= tiny) || pivot == Scalar(0)) {
          throw PivotBreakdown("pivot breakdown at local index " + std::to_string(k) +
                               " of a front with q=" + std::to_string(q));
        }
        const Eigen::Index below = n - k - 1;
        m.col(k).tail(below) /= pivot;
        count += static_cast<std::uint64_t>(below);
        const Eigen::Index width = panel_end - k - 1;
        if (width > 0) {
          m.block(k + 1, k + 1, below, width).noalias() -=
              m.col(k).tail(below) * m.row(k).segment(k + 1, width);
          count += flops::gemm(static_cast<std::uint64_t>(below), 1,
                               static_cast<std::uint64_t>(width));
        }
      }

      if (rest > 0) {
        // U12 panel rows.
        m.block(k0, k0, kb, kb).template triangularView<Eigen::UnitLower>().solveInPlace(
            m.block(k0, panel_end, kb, rest));
        count += flops::unit_lower_solve(static_cast<std::uint64_t>(kb),
                                         static_cast<std::uint64_t>(rest));
        // Trailing update.
        m.bottomRightCorner(rest, rest).noalias() -=
            m.block(panel_end, k0, rest, kb) * m.block(k0, panel_end, kb, rest);
        count += flops::gemm(static_cast<std::uint64_t>(rest), static_cast<std::uint64_t>(kb),
                             static_cast<std::uint64_t>(rest));
      }
    }

    // Forward elimination of the right-hand side.
    m.topLeftCorner(q, q).template triangularView<Eigen::UnitLower>().solveInPlace(b.head(q));
    count += flops::unit_lower_solve(static_cast<std::uint64_t>(q), 1);
    if (r > 0) {
      b.tail(r).noalias() -= m.bottomLeftCorner(r, q) * b.head(q);
      count += flops::gemv(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(q));
    }
  }

  out.upper = m.topRows(q);
  out.lower = m.bottomLeftCorner(r, q);
  out.schur = m.bottomRightCorner(r, r);
  out.rhs_interior = b.head(q);
  out.rhs_update = b.tail(r);
  out.flops = count;
  return out;
}

/// Recovers the interior unknowns x = U11^{-1}(L11^{-1} f - U12 y) of a
/// factored front given its interface values `y`. Adds the operation count
/// to `counter`.
template <typename Scalar, typename Derived>
typename FactoredFront<Scalar>::Vector back_substitute_front(
    const FactoredFront<Scalar>& front, const Eigen::MatrixBase<Derived>& y,
    std::uint64_t& counter) {
  const Eigen::Index q = front.q();
  const Eigen::Index r = front.r();
  if (y.size() != r) throw std::invalid_argument("back_substitute_front: interface size mismatch");
  typename FactoredFront<Scalar>::Vector x = front.rhs_interior;
  if (q == 0) return x;
  if (r > 0) {
    x.noalias() -= front.upper.rightCols(r) * y;
    counter += flops::gemv(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(r));
  }
  front.upper.leftCols(q).template triangularView<Eigen::Upper>().solveInPlace(x);
  counter += flops::upper_solve(static_cast<std::uint64_t>(q), 1);
  return x;
}

}  // namespace mfs

#endif  // MFS_FRONTAL_HPP
