#include "mfs/space.hpp"

#include <algorithm>

namespace mfs {

std::string_view to_string(Continuity c) {
  return c == Continuity::C0 ? "c0" : "cpm1";
}

Continuity parse_continuity(std::string_view text) {
  if (text == "c0") return Continuity::C0;
  if (text == "cpm1") return Continuity::Cpm1;
  throw std::invalid_argument("unknown continuity '" + std::string(text) +
                              "' (expected c0 or cpm1)");
}

bool Box::contains(const Box& other, int dim) const {
  for (int k = 0; k < dim; ++k) {
    if (other.lo[k] < lo[k] || other.hi[k] > hi[k]) return false;
  }
  return true;
}

bool Box::intersects(const Box& other, int dim) const {
  for (int k = 0; k < dim; ++k) {
    if (other.hi[k] < lo[k] || other.lo[k] > hi[k]) return false;
  }
  return true;
}

namespace {

Index ipow(Index base, int exp) {
  Index out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

Index linearize(const MultiIndex& m, int dim, Index extent) {
  Index out = 0;
  for (int k = 0; k < dim; ++k) out = out * extent + m[k];
  return out;
}

MultiIndex delinearize(Index id, int dim, Index extent) {
  MultiIndex m{0, 0, 0};
  for (int k = dim - 1; k >= 0; --k) {
    m[k] = static_cast<int>(id % extent);
    id /= extent;
  }
  return m;
}

struct Support1D {
  int lo;
  int hi;
};

Support1D support_1d(const SplineSpace& space, int j) {
  const int p = space.degree;
  const int last = space.elems_per_dim - 1;
  if (space.continuity == Continuity::C0) {
    if (j % p == 0) {
      const int vertex = j / p;
      return {std::max(vertex - 1, 0), std::min(vertex, last)};
    }
    return {j / p, j / p};
  }
  return {std::max(j - p, 0), std::min(j, last)};
}

int level_1d(const Support1D& sup, int width) {
  int level = 0;
  Index block = width;
  while (sup.lo / block != sup.hi / block) {
    ++level;
    block *= 2;
  }
  return level;
}

}  // namespace

Index SplineSpace::num_dofs() const { return ipow(dofs_per_dim, dim); }
Index SplineSpace::num_elements() const { return ipow(elems_per_dim, dim); }

int SplineSpace::cluster_width() const {
  return continuity == Continuity::C0 ? 1 : degree + 1;
}

int SplineSpace::clusters_per_dim(int level) const {
  return 1 << (levels - level);
}

Index SplineSpace::num_clusters(int level) const {
  return ipow(clusters_per_dim(level), dim);
}

Index SplineSpace::dof_index(const MultiIndex& m) const {
  return linearize(m, dim, dofs_per_dim);
}

MultiIndex SplineSpace::dof_multi_index(Index dof) const {
  return delinearize(dof, dim, dofs_per_dim);
}

Index SplineSpace::element_index(const MultiIndex& m) const {
  return linearize(m, dim, elems_per_dim);
}

MultiIndex SplineSpace::element_multi_index(Index elem) const {
  return delinearize(elem, dim, elems_per_dim);
}

bool SplineSpace::valid_dof(const MultiIndex& m) const {
  for (int k = 0; k < dim; ++k) {
    if (m[k] < 0 || m[k] >= dofs_per_dim) return false;
  }
  return true;
}

bool SplineSpace::valid_element(const MultiIndex& m) const {
  for (int k = 0; k < dim; ++k) {
    if (m[k] < 0 || m[k] >= elems_per_dim) return false;
  }
  return true;
}

SplineSpace build_space(int d, int p, Continuity continuity, int s) {
  if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (p < 1) throw std::invalid_argument("degree must be >= 1");
  if (s < 1) throw std::invalid_argument("number of levels must be >= 1");
  if (s > 24) throw std::invalid_argument("number of levels too large");

  SplineSpace space;
  space.dim = d;
  space.degree = p;
  space.levels = s;
  space.continuity = continuity;
  if (continuity == Continuity::Cpm1 && p == 1) {
    space.continuity = Continuity::C0;
    space.normalized_to_c0 = true;
  }
  if (space.continuity == Continuity::C0) {
    space.elems_per_dim = 1 << s;
    space.dofs_per_dim = p * space.elems_per_dim + 1;
  } else {
    space.elems_per_dim = (p + 1) << s;
    space.dofs_per_dim = space.elems_per_dim + p;
  }
  return space;
}

DofSupport dof_support(const SplineSpace& space, const MultiIndex& dof) {
  if (!space.valid_dof(dof)) throw std::out_of_range("dof multi-index out of range");
  DofSupport out;
  out.dof = dof;
  for (int k = 0; k < space.dim; ++k) {
    const Support1D sup = support_1d(space, dof[k]);
    out.elem_box.lo[k] = sup.lo;
    out.elem_box.hi[k] = sup.hi;
  }
  return out;
}

int first_active_dof_1d(const SplineSpace& space, int e) {
  return space.continuity == Continuity::C0 ? e * space.degree : e;
}

bool Cluster::is_interior(const SplineSpace& space) const {
  for (int k = 0; k < space.dim; ++k) {
    if (box.lo[k] == 0 || box.hi[k] == space.elems_per_dim - 1) return false;
  }
  return true;
}

int elimination_level(const SplineSpace& space, const MultiIndex& dof) {
  const DofSupport sup = dof_support(space, dof);
  int level = 0;
  for (int k = 0; k < space.dim; ++k) {
    level = std::max(level, level_1d({sup.elem_box.lo[k], sup.elem_box.hi[k]},
                                     space.cluster_width()));
  }
  return level;
}

namespace {

std::vector<Cluster> empty_clusters(const SplineSpace& space, int level) {
  const int per_dim = space.clusters_per_dim(level);
  const int block = space.cluster_width() << level;
  std::vector<Cluster> clusters(static_cast<std::size_t>(space.num_clusters(level)));
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    Cluster& cl = clusters[c];
    cl.level = level;
    cl.index = delinearize(static_cast<Index>(c), space.dim, per_dim);
    for (int k = 0; k < space.dim; ++k) {
      cl.box.lo[k] = cl.index[k] * block;
      cl.box.hi[k] = cl.box.lo[k] + block - 1;
    }
  }
  return clusters;
}

// Scatters one dof into the interior list of its owning cluster at its own
// elimination level and into the interface list of every lower-level cluster
// its support touches. Dofs arrive in increasing order, keeping lists sorted.
void scatter_dof(const SplineSpace& space, Index dof, const Box& sup, int dof_level,
                 int level, std::vector<Cluster>& clusters) {
  if (dof_level < level) return;
  const int per_dim = space.clusters_per_dim(level);
  const int block = space.cluster_width() << level;
  MultiIndex first{0, 0, 0};
  MultiIndex last{0, 0, 0};
  for (int k = 0; k < space.dim; ++k) {
    first[k] = sup.lo[k] / block;
    last[k] = sup.hi[k] / block;
  }
  if (dof_level == level) {
    clusters[static_cast<std::size_t>(linearize(first, space.dim, per_dim))]
        .interior_dofs.push_back(dof);
    return;
  }
  MultiIndex c = first;
  while (true) {
    clusters[static_cast<std::size_t>(linearize(c, space.dim, per_dim))]
        .interface_dofs.push_back(dof);
    int k = space.dim - 1;
    while (k >= 0 && c[k] == last[k]) {
      c[k] = first[k];
      --k;
    }
    if (k < 0) break;
    ++c[k];
  }
}

}  // namespace

std::vector<Cluster> classify_level(const SplineSpace& space, int level) {
  if (level < 0 || level > space.levels) throw std::out_of_range("level out of range");
  std::vector<Cluster> clusters = empty_clusters(space, level);
  for (Index dof = 0; dof < space.num_dofs(); ++dof) {
    const MultiIndex m = space.dof_multi_index(dof);
    const DofSupport sup = dof_support(space, m);
    scatter_dof(space, dof, sup.elem_box, elimination_level(space, m), level, clusters);
  }
  return clusters;
}

std::vector<std::vector<Cluster>> classify_all(const SplineSpace& space) {
  std::vector<std::vector<Cluster>> levels;
  levels.reserve(static_cast<std::size_t>(space.levels) + 1);
  for (int i = 0; i <= space.levels; ++i) levels.push_back(empty_clusters(space, i));
  for (Index dof = 0; dof < space.num_dofs(); ++dof) {
    const MultiIndex m = space.dof_multi_index(dof);
    const DofSupport sup = dof_support(space, m);
    const int dof_level = elimination_level(space, m);
    for (int i = 0; i <= dof_level; ++i) {
      scatter_dof(space, dof, sup.elem_box, dof_level, i, levels[static_cast<std::size_t>(i)]);
    }
  }
  return levels;
}

}  // namespace mfs
