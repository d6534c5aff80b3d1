#ifndef MFS_REPORT_HPP
#define MFS_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "mfs/costmodel.hpp"
#include "mfs/solver.hpp"
#include "mfs/tree.hpp"

namespace mfs {

/// Counter as a JSON integer, or as a decimal string above 2^53.
nlohmann::json counter_json(std::uint64_t value);

nlohmann::json solve_report(const SplineSpace& space, const SolveResult& result,
                            const Prediction& prediction);
nlohmann::json prediction_report(const Prediction& prediction);
nlohmann::json tree_report(const SplineSpace& space, const EliminationTree& tree);

/// One row of a sweep table.
struct SweepRow {
  SplineSpace space;
  std::uint64_t flops_measured = 0;
  std::uint64_t factor_bytes_measured = 0;
  double flops_predicted = 0.0;
  double bytes_predicted = 0.0;
  double residual_norm = 0.0;
};

SweepRow sweep_row(const SplineSpace& space, const SolveResult& result,
                   const Prediction& prediction);

struct SweepSummary {
  ScalingFit flops;
  ScalingFit bytes;
};

/// Fits FLOPs and factor bytes against N. Throws DegenerateFit for fewer
/// than three rows.
SweepSummary summarize_sweep(const std::vector<SweepRow>& rows);

inline constexpr const char* kCsvHeader =
    "d,p,continuity,s,N,flops_measured,factor_bytes_measured,flops_predicted,"
    "bytes_predicted,residual_norm";

std::string csv_row(const SweepRow& row);
std::string sweep_csv(const std::vector<SweepRow>& rows, const SweepSummary& summary);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows, const SweepSummary& summary);

}  // namespace mfs

#endif  // MFS_REPORT_HPP
