#ifndef MFS_TREE_HPP
#define MFS_TREE_HPP

#include <cstddef>
#include <vector>

#include "mfs/space.hpp"

namespace mfs {

/// Position of a cluster in the tree: level and index within that level.
struct NodeRef {
  int level = 0;
  std::size_t index = 0;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

/// 2^d-ary cluster hierarchy. levels[i] holds the (2^d)^(s-i) clusters of
/// level i; children[i][c] lists the level-(i-1) children of levels[i][c]
/// in Z-order (empty for i = 0).
struct EliminationTree {
  int dim = 1;
  std::vector<std::vector<Cluster>> levels;
  std::vector<std::vector<std::vector<std::size_t>>> children;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  const Cluster& root() const { return levels.back().front(); }
  const Cluster& node(NodeRef ref) const { return levels[static_cast<std::size_t>(ref.level)][ref.index]; }
  std::size_t num_nodes() const;
};

EliminationTree build_tree(const SplineSpace& space);

/// Elimination order (children before parents, level by level) and its
/// reverse for back-substitution. Nodes within one level of `elimination`
/// are mutually independent.
struct Schedule {
  std::vector<NodeRef> elimination;
  std::vector<NodeRef> back_substitution;
};

Schedule schedule(const EliminationTree& tree);

}  // namespace mfs

#endif  // MFS_TREE_HPP
