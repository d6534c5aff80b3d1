#include "mfs/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mfs {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the usual cosine guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::vector<double> knot_vector(const SplineSpace& space) {
  const int p = space.degree;
  const int elems = space.elems_per_dim;
  const int mult = space.continuity == Continuity::C0 ? p : 1;
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(2 * (p + 1) + (elems - 1) * mult));
  knots.insert(knots.end(), static_cast<std::size_t>(p + 1), 0.0);
  for (int e = 1; e < elems; ++e) {
    knots.insert(knots.end(), static_cast<std::size_t>(mult),
                 static_cast<double>(e) / elems);
  }
  knots.insert(knots.end(), static_cast<std::size_t>(p + 1), 1.0);
  return knots;
}

namespace {

int find_span(int p, std::span<const double> knots, double x) {
  const int n = static_cast<int>(knots.size()) - p - 2;
  if (n < 0) throw std::invalid_argument("knot vector too short for degree");
  if (!(x >= knots[static_cast<std::size_t>(p)] &&
        x <= knots[static_cast<std::size_t>(n + 1)])) {
    throw std::domain_error("evaluation point outside the knot range");
  }
  if (x >= knots[static_cast<std::size_t>(n + 1)]) {
    int span = n;
    while (span > p && knots[static_cast<std::size_t>(span)] ==
                           knots[static_cast<std::size_t>(span + 1)]) {
      --span;
    }
    return span;
  }
  int low = p;
  int high = n + 1;
  int mid = (low + high) / 2;
  while (x < knots[static_cast<std::size_t>(mid)] ||
         x >= knots[static_cast<std::size_t>(mid + 1)]) {
    if (x < knots[static_cast<std::size_t>(mid)]) {
      high = mid;
    } else {
      low = mid;
    }
    mid = (low + high) / 2;
  }
  return mid;
}

}  // namespace

BasisValues1D eval_basis_1d(int p, std::span<const double> knots, double x) {
  if (p < 0) throw std::invalid_argument("negative degree");
  const int span = find_span(p, knots, x);
  const auto u = [&](int k) { return knots[static_cast<std::size_t>(k)]; };

  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(static_cast<std::size_t>(p + 1));
  std::vector<double> right(static_cast<std::size_t>(p + 1));
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[static_cast<std::size_t>(j)] = x - u(span + 1 - j);
    right[static_cast<std::size_t>(j)] = u(span + j) - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    ndu(j, j) = saved;
  }

  BasisValues1D out;
  out.first = span - p;
  out.values = ndu.col(p);
  out.derivatives = Eigen::VectorXd::Zero(p + 1);
  if (p > 0) {
    for (int r = 0; r <= p; ++r) {
      double d = 0.0;
      if (r >= 1) d += ndu(r - 1, p - 1) / ndu(p, r - 1);
      if (r <= p - 1) d -= ndu(r, p - 1) / ndu(p, r);
      out.derivatives[r] = p * d;
    }
  }
  return out;
}

BasisEval eval_basis(const SplineSpace& space, std::span<const double> point) {
  if (static_cast<int>(point.size()) != space.dim) {
    throw std::invalid_argument("eval_basis: point dimension mismatch");
  }
  const std::vector<double> knots = knot_vector(space);
  std::array<BasisValues1D, 3> per_dim;
  for (int k = 0; k < space.dim; ++k) {
    per_dim[static_cast<std::size_t>(k)] =
        eval_basis_1d(space.degree, knots, point[static_cast<std::size_t>(k)]);
  }
  const int local = space.degree + 1;
  int count = 1;
  for (int k = 0; k < space.dim; ++k) count *= local;

  BasisEval out;
  out.dofs.resize(static_cast<std::size_t>(count));
  out.values.resize(count);
  out.gradients.resize(count, space.dim);
  for (int a = 0; a < count; ++a) {
    MultiIndex la{0, 0, 0};
    int rest = a;
    for (int k = space.dim - 1; k >= 0; --k) {
      la[k] = rest % local;
      rest /= local;
    }
    MultiIndex global{0, 0, 0};
    double value = 1.0;
    for (int k = 0; k < space.dim; ++k) {
      const auto& b = per_dim[static_cast<std::size_t>(k)];
      global[k] = b.first + la[k];
      value *= b.values[la[k]];
    }
    for (int g = 0; g < space.dim; ++g) {
      double grad = 1.0;
      for (int k = 0; k < space.dim; ++k) {
        const auto& b = per_dim[static_cast<std::size_t>(k)];
        grad *= (k == g) ? b.derivatives[la[k]] : b.values[la[k]];
      }
      out.gradients(a, g) = grad;
    }
    out.dofs[static_cast<std::size_t>(a)] = space.dof_index(global);
    out.values[a] = value;
  }
  return out;
}

namespace {

struct Operators1D {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd load;
};

Operators1D element_operators_1d(const SplineSpace& space, std::span<const double> knots,
                                 const GaussRule& rule, int e) {
  const int p = space.degree;
  const double h = 1.0 / space.elems_per_dim;
  const double x0 = e * h;
  Operators1D ops{Eigen::MatrixXd::Zero(p + 1, p + 1), Eigen::MatrixXd::Zero(p + 1, p + 1),
                  Eigen::VectorXd::Zero(p + 1)};
  for (Eigen::Index g = 0; g < rule.nodes.size(); ++g) {
    const double x = x0 + 0.5 * h * (rule.nodes[g] + 1.0);
    const double w = 0.5 * h * rule.weights[g];
    const BasisValues1D b = eval_basis_1d(p, knots, x);
    if (b.first != first_active_dof_1d(space, e)) {
      throw std::logic_error("element span does not match the active basis range");
    }
    for (int i = 0; i <= p; ++i) {
      for (int j = i; j <= p; ++j) {
        ops.mass(i, j) += w * b.values[i] * b.values[j];
        ops.stiffness(i, j) += w * b.derivatives[i] * b.derivatives[j];
      }
    }
    ops.load += w * b.values;
  }
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j < i; ++j) {
      ops.mass(i, j) = ops.mass(j, i);
      ops.stiffness(i, j) = ops.stiffness(j, i);
    }
  }
  return ops;
}

MultiIndex local_multi_index(int a, int dim, int local) {
  MultiIndex la{0, 0, 0};
  for (int k = dim - 1; k >= 0; --k) {
    la[k] = a % local;
    a /= local;
  }
  return la;
}

}  // namespace

ElementOperators element_operators(const SplineSpace& space, const MultiIndex& elem) {
  if (!space.valid_element(elem)) throw std::out_of_range("element multi-index out of range");
  const std::vector<double> knots = knot_vector(space);
  const GaussRule rule = gauss_legendre(space.degree + 1);
  std::array<Operators1D, 3> ops;
  for (int k = 0; k < space.dim; ++k) {
    ops[static_cast<std::size_t>(k)] = element_operators_1d(space, knots, rule, elem[k]);
  }

  const int local = space.degree + 1;
  int count = 1;
  for (int k = 0; k < space.dim; ++k) count *= local;

  ElementOperators out;
  out.dofs.resize(static_cast<std::size_t>(count));
  out.mass.resize(count, count);
  out.stiffness.resize(count, count);
  out.load.resize(count);
  std::vector<MultiIndex> locals(static_cast<std::size_t>(count));
  for (int a = 0; a < count; ++a) {
    const MultiIndex la = local_multi_index(a, space.dim, local);
    locals[static_cast<std::size_t>(a)] = la;
    MultiIndex global{0, 0, 0};
    double load = 1.0;
    for (int k = 0; k < space.dim; ++k) {
      global[k] = first_active_dof_1d(space, elem[k]) + la[k];
      load *= ops[static_cast<std::size_t>(k)].load[la[k]];
    }
    out.dofs[static_cast<std::size_t>(a)] = space.dof_index(global);
    out.load[a] = load;
  }
  for (int a = 0; a < count; ++a) {
    const MultiIndex& la = locals[static_cast<std::size_t>(a)];
    for (int b = 0; b < count; ++b) {
      const MultiIndex& lb = locals[static_cast<std::size_t>(b)];
      double mass = 1.0;
      double stiff = 0.0;
      for (int k = 0; k < space.dim; ++k) {
        const Operators1D& o = ops[static_cast<std::size_t>(k)];
        double term = o.stiffness(la[k], lb[k]);
        for (int j = 0; j < space.dim; ++j) {
          if (j != k) term *= ops[static_cast<std::size_t>(j)].mass(la[j], lb[j]);
        }
        stiff += term;
        mass *= o.mass(la[k], lb[k]);
      }
      out.mass(a, b) = mass;
      out.stiffness(a, b) = stiff;
    }
  }
  return out;
}

ElementMatrix element_matrix(const SplineSpace& space, const MultiIndex& elem) {
  ElementOperators ops = element_operators(space, elem);
  return {std::move(ops.dofs), ops.stiffness + ops.mass, std::move(ops.load)};
}

namespace {

// Calls fn(elem) for every element multi-index in `box`, lexicographically.
template <typename Fn>
void for_each_element(const Box& box, int dim, Fn&& fn) {
  MultiIndex e = box.lo;
  while (true) {
    fn(e);
    int k = dim - 1;
    while (k >= 0 && e[k] == box.hi[k]) {
      e[k] = box.lo[k];
      --k;
    }
    if (k < 0) return;
    ++e[k];
  }
}

}  // namespace

Front<double> build_front(const SplineSpace& space, const Cluster& cluster) {
  if (cluster.level != 0) throw std::invalid_argument("build_front expects a level-0 cluster");
  Front<double> front;
  front.dofs = cluster.interior_dofs;
  front.dofs.insert(front.dofs.end(), cluster.interface_dofs.begin(),
                    cluster.interface_dofs.end());
  front.num_interior = static_cast<Eigen::Index>(cluster.interior_dofs.size());
  const Eigen::Index n = front.size();
  front.matrix = Eigen::MatrixXd::Zero(n, n);
  front.rhs = Eigen::VectorXd::Zero(n);

  const auto locate = [&](Index dof) -> Eigen::Index {
    const auto& in = cluster.interior_dofs;
    if (auto it = std::lower_bound(in.begin(), in.end(), dof); it != in.end() && *it == dof) {
      return it - in.begin();
    }
    const auto& out = cluster.interface_dofs;
    if (auto it = std::lower_bound(out.begin(), out.end(), dof); it != out.end() && *it == dof) {
      return static_cast<Eigen::Index>(in.size()) + (it - out.begin());
    }
    throw std::logic_error("element dof not present in its cluster front");
  };

  for_each_element(cluster.box, space.dim, [&](const MultiIndex& elem) {
    const ElementMatrix em = element_matrix(space, elem);
    std::vector<Eigen::Index> map(em.dofs.size());
    for (std::size_t a = 0; a < em.dofs.size(); ++a) map[a] = locate(em.dofs[a]);
    for (std::size_t a = 0; a < map.size(); ++a) {
      for (std::size_t b = 0; b < map.size(); ++b) {
        front.matrix(map[a], map[b]) +=
            em.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
      front.rhs[map[a]] += em.load[static_cast<Eigen::Index>(a)];
    }
  });
  return front;
}

GlobalSystem assemble_global(const SplineSpace& space) {
  const Index n = space.num_dofs();
  const int dofs_1d = space.dofs_per_dim;

  // 1D coupling ranges: dof j couples with every dof whose support overlaps.
  std::vector<std::pair<int, int>> range(static_cast<std::size_t>(dofs_1d));
  {
    SplineSpace line = space;
    line.dim = 1;
    for (int j = 0; j < dofs_1d; ++j) {
      const Box bj = dof_support(line, {j, 0, 0}).elem_box;
      int lo = dofs_1d;
      int hi = -1;
      for (int k = 0; k < dofs_1d; ++k) {
        if (bj.intersects(dof_support(line, {k, 0, 0}).elem_box, 1)) {
          lo = std::min(lo, k);
          hi = std::max(hi, k);
        }
      }
      range[static_cast<std::size_t>(j)] = {lo, hi};
    }
  }

  GlobalSystem sys;
  sys.matrix.resize(n, n);
  Eigen::VectorXi per_col(n);
  for (Index c = 0; c < n; ++c) {
    const MultiIndex m = space.dof_multi_index(c);
    int nnz = 1;
    for (int k = 0; k < space.dim; ++k) {
      const auto [lo, hi] = range[static_cast<std::size_t>(m[k])];
      nnz *= hi - lo + 1;
    }
    per_col[c] = nnz;
  }
  sys.matrix.reserve(per_col);
  for (Index c = 0; c < n; ++c) {
    const MultiIndex m = space.dof_multi_index(c);
    Box rows;
    for (int k = 0; k < space.dim; ++k) {
      rows.lo[k] = range[static_cast<std::size_t>(m[k])].first;
      rows.hi[k] = range[static_cast<std::size_t>(m[k])].second;
    }
    for_each_element(rows, space.dim, [&](const MultiIndex& r) {
      sys.matrix.insert(space.dof_index(r), c) = 0.0;
    });
  }
  sys.matrix.makeCompressed();

  sys.rhs = Eigen::VectorXd::Zero(n);
  Box all;
  for (int k = 0; k < space.dim; ++k) all.hi[k] = space.elems_per_dim - 1;
  for_each_element(all, space.dim, [&](const MultiIndex& elem) {
    const ElementMatrix em = element_matrix(space, elem);
    for (std::size_t a = 0; a < em.dofs.size(); ++a) {
      for (std::size_t b = 0; b < em.dofs.size(); ++b) {
        sys.matrix.coeffRef(em.dofs[a], em.dofs[b]) +=
            em.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
      sys.rhs[em.dofs[a]] += em.load[static_cast<Eigen::Index>(a)];
    }
  });
  return sys;
}

}  // namespace mfs
