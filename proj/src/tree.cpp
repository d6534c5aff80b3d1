#include "mfs/tree.hpp"

namespace mfs {

std::size_t EliminationTree::num_nodes() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.size();
  return n;
}

EliminationTree build_tree(const SplineSpace& space) {
  EliminationTree tree;
  tree.dim = space.dim;
  tree.levels = classify_all(space);
  tree.children.resize(tree.levels.size());

  const int offsets = 1 << space.dim;
  for (std::size_t i = 1; i < tree.levels.size(); ++i) {
    const int child_per_dim = space.clusters_per_dim(static_cast<int>(i) - 1);
    auto& kids = tree.children[i];
    kids.resize(tree.levels[i].size());
    for (std::size_t c = 0; c < tree.levels[i].size(); ++c) {
      const MultiIndex& parent = tree.levels[i][c].index;
      kids[c].reserve(static_cast<std::size_t>(offsets));
      for (int o = 0; o < offsets; ++o) {
        // Z-order: offset bits read most-significant-dimension first.
        std::size_t linear = 0;
        for (int k = 0; k < space.dim; ++k) {
          const int bit = (o >> (space.dim - 1 - k)) & 1;
          linear = linear * static_cast<std::size_t>(child_per_dim) +
                   static_cast<std::size_t>(2 * parent[k] + bit);
        }
        kids[c].push_back(linear);
      }
    }
  }
  return tree;
}

Schedule schedule(const EliminationTree& tree) {
  Schedule out;
  out.elimination.reserve(tree.num_nodes());
  for (std::size_t i = 0; i < tree.levels.size(); ++i) {
    for (std::size_t c = 0; c < tree.levels[i].size(); ++c) {
      out.elimination.push_back({static_cast<int>(i), c});
    }
  }
  out.back_substitution.assign(out.elimination.rbegin(), out.elimination.rend());
  return out;
}

}  // namespace mfs
