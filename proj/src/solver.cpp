#include "mfs/solver.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "mfs/assembly.hpp"

namespace mfs {

namespace {

// Runs fn(k) for k in [0, n) on up to `threads` workers. Each index owns its
// output slot, so the result does not depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) {
          try {
            fn(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

Eigen::Index find_dof(const std::vector<Index>& sorted, Index dof) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), dof);
  return (it != sorted.end() && *it == dof) ? static_cast<Eigen::Index>(it - sorted.begin()) : -1;
}

}  // namespace

Front<double> merge(const Cluster& parent, std::span<const FactoredFront<double>* const> children) {
  Front<double> front;
  front.dofs = parent.interior_dofs;
  front.dofs.insert(front.dofs.end(), parent.interface_dofs.begin(), parent.interface_dofs.end());
  front.num_interior = static_cast<Eigen::Index>(parent.interior_dofs.size());
  const Eigen::Index n = front.size();
  front.matrix = Eigen::MatrixXd::Zero(n, n);
  front.rhs = Eigen::VectorXd::Zero(n);

  for (const FactoredFront<double>* child : children) {
    const Eigen::Index q = child->q();
    const Eigen::Index r = child->r();
    if (child->schur.rows() != r) throw std::logic_error("merge: child Schur block already released");
    std::vector<Eigen::Index> map(static_cast<std::size_t>(r));
    for (Eigen::Index a = 0; a < r; ++a) {
      const Index dof = child->dofs[static_cast<std::size_t>(q + a)];
      Eigen::Index pos = find_dof(parent.interior_dofs, dof);
      if (pos < 0) {
        pos = find_dof(parent.interface_dofs, dof);
        if (pos < 0) {
          throw IndexMismatch("child interface dof " + std::to_string(dof) +
                              " is not part of the parent front");
        }
        pos += front.num_interior;
      }
      map[static_cast<std::size_t>(a)] = pos;
    }
    for (Eigen::Index b = 0; b < r; ++b) {
      const Eigen::Index pb = map[static_cast<std::size_t>(b)];
      for (Eigen::Index a = 0; a < r; ++a) {
        front.matrix(map[static_cast<std::size_t>(a)], pb) += child->schur(a, b);
      }
      front.rhs[pb] += child->rhs_update[b];
    }
  }
  return front;
}

FactorLevels factorize(const SplineSpace& space, const EliminationTree& tree,
                       const SolveOptions& options) {
  FactorLevels factored(tree.levels.size());
  for (std::size_t i = 0; i < tree.levels.size(); ++i) {
    const auto& clusters = tree.levels[i];
    auto& out = factored[i];
    out.resize(clusters.size());
    if (i == 0) {
      parallel_for(clusters.size(), options.threads, [&](std::size_t c) {
        out[c] = schur_eliminate(build_front(space, clusters[c]));
      });
    } else {
      const auto& below = factored[i - 1];
      parallel_for(clusters.size(), options.threads, [&](std::size_t c) {
        std::vector<const FactoredFront<double>*> kids;
        for (std::size_t k : tree.children[i][c]) kids.push_back(&below[k]);
        out[c] = schur_eliminate(merge(clusters[c], kids));
      });
      for (auto& child : factored[i - 1]) {
        child.schur.resize(0, 0);
      }
    }
  }
  return factored;
}

BackSubstitution back_substitute(const EliminationTree& tree, const FactorLevels& fronts,
                                 Index num_dofs) {
  BackSubstitution out;
  out.values = Eigen::VectorXd::Zero(num_dofs);
  out.flops.resize(fronts.size());
  for (std::size_t i = 0; i < fronts.size(); ++i) out.flops[i].assign(fronts[i].size(), 0);

  for (const NodeRef& ref : schedule(tree).back_substitution) {
    const auto level = static_cast<std::size_t>(ref.level);
    const FactoredFront<double>& f = fronts[level][ref.index];
    const Eigen::Index q = f.q();
    const Eigen::Index r = f.r();
    Eigen::VectorXd y(r);
    for (Eigen::Index a = 0; a < r; ++a) y[a] = out.values[f.dofs[static_cast<std::size_t>(q + a)]];
    const Eigen::VectorXd x = back_substitute_front(f, y, out.flops[level][ref.index]);
    for (Eigen::Index a = 0; a < q; ++a) out.values[f.dofs[static_cast<std::size_t>(a)]] = x[a];
  }
  return out;
}

SolveResult solve(const SplineSpace& space, const SolveOptions& options) {
  const EliminationTree tree = build_tree(space);
  const FactorLevels factored = factorize(space, tree, options);
  BackSubstitution back = back_substitute(tree, factored, space.num_dofs());

  std::vector<FrontCost> costs;
  costs.reserve(tree.num_nodes());
  for (std::size_t i = 0; i < factored.size(); ++i) {
    for (std::size_t c = 0; c < factored[i].size(); ++c) {
      const FactoredFront<double>& f = factored[i][c];
      FrontCost fc;
      fc.level = static_cast<int>(i);
      fc.index = c;
      fc.q = f.q();
      fc.r = f.r();
      fc.flops = f.flops + back.flops[i][c];
      fc.entries = f.factor_entries();
      fc.interior = tree.levels[i][c].is_interior(space);
      costs.push_back(fc);
    }
  }

  SolveResult result;
  result.cost = aggregate_costs(std::move(costs), space.levels);
  result.solution.values = std::move(back.values);
  if (options.compute_residual) {
    const GlobalSystem sys = assemble_global(space);
    const Eigen::VectorXd res = sys.matrix * result.solution.values - sys.rhs;
    result.solution.residual_norm = res.norm() / sys.rhs.norm();
  }
  return result;
}

}  // namespace mfs
