#ifndef MFS_SOLVER_HPP
#define MFS_SOLVER_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfs/costmodel.hpp"
#include "mfs/frontal.hpp"
#include "mfs/space.hpp"
#include "mfs/tree.hpp"

namespace mfs {

class IndexMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factored fronts indexed like EliminationTree::levels.
using FactorLevels = std::vector<std::vector<FactoredFront<double>>>;

struct Solution {
  Eigen::VectorXd values;
  double residual_norm = 0.0;  // ||Ax - b|| / ||b|| on the assembled system
};

struct SolveOptions {
  /// Upper bound on worker threads for same-level fronts; results do not
  /// depend on it.
  int threads = 1;
  bool compute_residual = true;
};

struct SolveResult {
  Solution solution;
  CostRecord cost;
};

/// Assembles the parent front from its children's Schur complements and
/// reduced right-hand sides, scattered by global DOF in the given order.
/// Throws IndexMismatch when a child interface DOF is unknown to the parent.
Front<double> merge(const Cluster& parent, std::span<const FactoredFront<double>* const> children);

struct BackSubstitution {
  Eigen::VectorXd values;
  std::vector<std::vector<std::uint64_t>> flops;  // per front, same indexing as FactorLevels
};

/// Top-down recovery of every unknown from factored fronts. The root's
/// interface is empty, so its interior solve needs no input.
BackSubstitution back_substitute(const EliminationTree& tree, const FactorLevels& fronts,
                                 Index num_dofs);

/// Bottom-up factorization of the whole tree: level-0 fronts are built
/// from element matrices, higher levels merged from their children.
/// Schur blocks of consumed children are released.
FactorLevels factorize(const SplineSpace& space, const EliminationTree& tree,
                       const SolveOptions& options = {});

/// Full pipeline: tree, level-0 fronts, elimination, root solve and
/// back-substitution, with exact counters.
SolveResult solve(const SplineSpace& space, const SolveOptions& options = {});

}  // namespace mfs

#endif  // MFS_SOLVER_HPP
