#ifndef MFS_ASSEMBLY_HPP
#define MFS_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <vector>

#include "mfs/frontal.hpp"
#include "mfs/space.hpp"

namespace mfs {

/// Gauss-Legendre rule with `n` points on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussRule gauss_legendre(int n);

/// Open knot vector on [0, 1] for one coordinate direction of `space`:
/// interior knots have multiplicity p (C0) or 1 (Cpm1).
std::vector<double> knot_vector(const SplineSpace& space);

/// Nonzero B-splines of degree p at x: functions first..first+p.
struct BasisValues1D {
  int first = 0;
  Eigen::VectorXd values;
  Eigen::VectorXd derivatives;
};

/// Cox-de Boor evaluation of the p+1 active functions and first
/// derivatives. Throws std::domain_error when x lies outside the knots.
BasisValues1D eval_basis_1d(int p, std::span<const double> knots, double x);

/// Tensor-product basis at a point of the unit cube.
struct BasisEval {
  std::vector<Index> dofs;
  Eigen::VectorXd values;
  Eigen::MatrixXd gradients;  // dofs.size() x dim
};
BasisEval eval_basis(const SplineSpace& space, std::span<const double> point);

/// K_e + M_e and the load block of one element, DOFs in lexicographic order.
struct ElementMatrix {
  std::vector<Index> dofs;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd load;
};

/// Separate stiffness and mass parts, used by checks on the element
/// operators themselves.
struct ElementOperators {
  std::vector<Index> dofs;
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd mass;
  Eigen::VectorXd load;
};

ElementOperators element_operators(const SplineSpace& space, const MultiIndex& elem);
ElementMatrix element_matrix(const SplineSpace& space, const MultiIndex& elem);

/// Level-0 frontal matrix of `cluster`: element contributions summed over
/// the cluster's elements (lexicographic order), interior DOFs first.
Front<double> build_front(const SplineSpace& space, const Cluster& cluster);

/// Globally assembled system for the reaction-diffusion model problem.
struct GlobalSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};
GlobalSystem assemble_global(const SplineSpace& space);

}  // namespace mfs

#endif  // MFS_ASSEMBLY_HPP
