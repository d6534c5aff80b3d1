#ifndef MFS_COSTMODEL_HPP
#define MFS_COSTMODEL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfs/space.hpp"

namespace mfs {

/// Measured cost of one front.
struct FrontCost {
  int level = 0;
  std::size_t index = 0;
  std::int64_t q = 0;
  std::int64_t r = 0;
  std::uint64_t flops = 0;    // elimination + back-substitution
  std::uint64_t entries = 0;  // q^2 + 2qr
  bool interior = false;      // cluster box away from the domain boundary
};

struct LevelCost {
  int level = 0;
  std::int64_t n_clusters = 0;
  std::uint64_t flops = 0;
  std::uint64_t entries = 0;
  std::int64_t q_rep = 0;
  std::int64_t r_rep = 0;
  bool rep_from_interior = false;
};

/// Exact counters of one solve, per level (0..s, root last) and in total.
struct CostRecord {
  std::vector<LevelCost> per_level;
  std::vector<FrontCost> fronts;
  std::uint64_t total_flops = 0;
  std::uint64_t total_factor_entries = 0;
  std::uint64_t total_factor_bytes = 0;
};

/// Aggregates per-front costs into a CostRecord. Representative q, r of a
/// level come from its interior clusters (median), or from all clusters
/// when none is interior.
CostRecord aggregate_costs(std::vector<FrontCost> fronts, int levels,
                           std::size_t bytes_per_entry = sizeof(double));

struct SchurCost {
  double flops = 0.0;
  double entries = 0.0;
};

/// Leading-order Schur complement cost: (2/3)q^3 + 2q^2 r + 2qr^2 FLOPs and
/// q^2 + 2qr factor entries.
SchurCost schur_cost_model(double q, double r);

struct QrPrediction {
  double q = 0.0;
  double r = 0.0;
};

/// Interior/interface unknown counts per level with unit constants.
QrPrediction predict_qr(int d, int p, Continuity continuity, int level);

struct Prediction {
  int d = 1;
  int p = 1;
  Continuity continuity = Continuity::C0;
  int s = 1;
  double n_dofs = 0.0;
  std::vector<double> q_pred;      // levels 0..s-1
  std::vector<double> r_pred;
  std::vector<double> n_clusters;  // (2^d)^(s-i)
  std::vector<double> flops_level; // per-cluster S(i)
  std::vector<double> mem_level;
  double root_q = 0.0;
  double root_flops = 0.0;
  double root_mem = 0.0;
  /// sum_i N_c(i) S(i) plus the root solve.
  double level_sum_flops = 0.0;
  double level_sum_mem = 0.0;
  /// Closed-form dominant terms evaluated at N and p.
  double total_flops_pred = 0.0;
  double total_mem_pred = 0.0;
  std::string dominant_term;
  std::string dominant_memory_term;
};

Prediction predict_total(int d, int p, Continuity continuity, int s);

class DegenerateFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScalingFit {
  std::vector<std::pair<double, double>> samples;
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points_used = 0;
};

/// Log-log least squares over the largest ceil(n/2) samples (at least two).
/// Requires >= 3 samples with strictly increasing abscissa and positive
/// values that are not all equal.
ScalingFit fit_scaling(std::vector<std::pair<double, double>> samples);

struct LevelComparison {
  int level = 0;
  double flops_ratio = 0.0;  // measured / predicted, totals over the level
  double mem_ratio = 0.0;
  double q_ratio = 0.0;      // representative q / q_pred (0 when q_pred absent)
  double r_ratio = 0.0;
};

struct Comparison {
  std::vector<LevelComparison> per_level;  // levels 0..s-1, then the root
  double total_flops_ratio = 0.0;
  double total_mem_ratio = 0.0;
  /// Measured totals against the same level sum evaluated with the
  /// measured q, r of every front.
  double exact_qr_flops_ratio = 0.0;
  double exact_qr_mem_ratio = 0.0;
};

Comparison compare(const CostRecord& measured, const Prediction& predicted);

/// True when a sequence of ratios (ordered by s) moves strictly in one
/// direction and its extremes differ by more than `spread`; a constant
/// mismatch is tolerated, a trend means a wrong exponent.
bool ratio_drifts(const std::vector<double>& ratios_by_s, double spread = 2.0);

}  // namespace mfs

#endif  // MFS_COSTMODEL_HPP
