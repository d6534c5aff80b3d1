#ifndef MFS_SPACE_HPP
#define MFS_SPACE_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfs {

/// Global degree-of-freedom / element identifier (lexicographic linear index).
using Index = std::int64_t;

/// Per-dimension integer coordinates; only the first `dim` entries are used.
using MultiIndex = std::array<int, 3>;

enum class Continuity { C0, Cpm1 };

std::string_view to_string(Continuity c);
Continuity parse_continuity(std::string_view text);

/// Inclusive box of element multi-indices.
struct Box {
  MultiIndex lo{0, 0, 0};
  MultiIndex hi{0, 0, 0};

  bool contains(const Box& other, int dim) const;
  bool intersects(const Box& other, int dim) const;
  friend bool operator==(const Box&, const Box&) = default;
};

/// Uniform tensor-product B-spline space on the unit d-cube.
///
/// C0 spaces use interior knots of multiplicity p (one element per level-0
/// cluster); Cpm1 spaces use simple interior knots and group p+1 elements
/// per dimension into each level-0 cluster. Either way there are 2^s
/// level-0 clusters per dimension.
struct SplineSpace {
  int dim = 1;
  int degree = 1;
  Continuity continuity = Continuity::C0;
  int levels = 1;
  int elems_per_dim = 0;
  int dofs_per_dim = 0;
  /// Set when Cpm1 was requested with p = 1 and the space was built as C0.
  bool normalized_to_c0 = false;

  Index num_dofs() const;
  Index num_elements() const;
  /// Elements per dimension in one level-0 cluster.
  int cluster_width() const;
  /// Clusters per dimension at the given level.
  int clusters_per_dim(int level) const;
  Index num_clusters(int level) const;

  Index dof_index(const MultiIndex& m) const;
  MultiIndex dof_multi_index(Index dof) const;
  Index element_index(const MultiIndex& m) const;
  MultiIndex element_multi_index(Index elem) const;
  bool valid_dof(const MultiIndex& m) const;
  bool valid_element(const MultiIndex& m) const;
};

SplineSpace build_space(int d, int p, Continuity continuity, int s);

struct DofSupport {
  MultiIndex dof{0, 0, 0};
  Box elem_box;
};

/// Element box on which the basis function `dof` is nonzero.
DofSupport dof_support(const SplineSpace& space, const MultiIndex& dof);

/// First (lowest) 1D basis index active on element `e`; p+1 consecutive
/// functions are active on every element.
int first_active_dof_1d(const SplineSpace& space, int e);

struct Cluster {
  int level = 0;
  MultiIndex index{0, 0, 0};  // cluster coordinates at this level
  Box box;
  std::vector<Index> interior_dofs;   // q(i), sorted
  std::vector<Index> interface_dofs;  // r(i), sorted

  Index q() const { return static_cast<Index>(interior_dofs.size()); }
  Index r() const { return static_cast<Index>(interface_dofs.size()); }
  /// True when the cluster box does not touch the domain boundary.
  bool is_interior(const SplineSpace& space) const;
};

/// Level at which `dof` becomes fully assembled, i.e. the smallest level
/// whose cluster contains its whole support.
int elimination_level(const SplineSpace& space, const MultiIndex& dof);

/// All clusters at `level`, ordered lexicographically by box corner.
std::vector<Cluster> classify_level(const SplineSpace& space, int level);

/// classify_level for every level 0..s in one pass.
std::vector<std::vector<Cluster>> classify_all(const SplineSpace& space);

}  // namespace mfs

#endif  // MFS_SPACE_HPP
