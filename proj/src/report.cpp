#include "mfs/report.hpp"

#include <cstdio>
#include <sstream>

namespace mfs {

namespace {

// Round-trippable shortest-ish float formatting for CSV.
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json config_json(const SplineSpace& space) {
  return {{"d", space.dim},
          {"p", space.degree},
          {"continuity", std::string(to_string(space.continuity))},
          {"s", space.levels},
          {"N", space.num_dofs()}};
}

nlohmann::json fit_json(const ScalingFit& fit) {
  return {{"exponent", fit.exponent}, {"r2", fit.r2}, {"points_used", fit.points_used}};
}

}  // namespace

nlohmann::json counter_json(std::uint64_t value) {
  constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;
  if (value > kExactLimit) return std::to_string(value);
  return value;
}

nlohmann::json solve_report(const SplineSpace& space, const SolveResult& result,
                            const Prediction& prediction) {
  nlohmann::json out = config_json(space);
  out["flops_measured"] = counter_json(result.cost.total_flops);
  out["factor_bytes_measured"] = counter_json(result.cost.total_factor_bytes);
  out["flops_predicted"] = prediction.level_sum_flops;
  out["bytes_predicted"] = prediction.level_sum_mem * sizeof(double);
  out["residual_norm"] = result.solution.residual_norm;
  nlohmann::json levels = nlohmann::json::array();
  for (const LevelCost& lc : result.cost.per_level) {
    levels.push_back({{"i", lc.level},
                      {"n_clusters", lc.n_clusters},
                      {"q_rep", lc.q_rep},
                      {"r_rep", lc.r_rep},
                      {"flops", counter_json(lc.flops)},
                      {"entries", counter_json(lc.entries)}});
  }
  out["per_level"] = std::move(levels);
  return out;
}

nlohmann::json prediction_report(const Prediction& pr) {
  nlohmann::json out = {{"d", pr.d},
                        {"p", pr.p},
                        {"continuity", std::string(to_string(pr.continuity))},
                        {"s", pr.s},
                        {"N", pr.n_dofs},
                        {"flops_predicted", pr.level_sum_flops},
                        {"bytes_predicted", pr.level_sum_mem * sizeof(double)},
                        {"closed_form_flops", pr.total_flops_pred},
                        {"closed_form_memory", pr.total_mem_pred},
                        {"dominant_term", pr.dominant_term},
                        {"dominant_memory_term", pr.dominant_memory_term}};
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t i = 0; i < pr.q_pred.size(); ++i) {
    levels.push_back({{"i", i},
                      {"n_clusters", pr.n_clusters[i]},
                      {"q_pred", pr.q_pred[i]},
                      {"r_pred", pr.r_pred[i]},
                      {"flops", pr.flops_level[i]},
                      {"entries", pr.mem_level[i]}});
  }
  levels.push_back({{"i", pr.s},
                    {"n_clusters", 1},
                    {"q_pred", pr.root_q},
                    {"r_pred", 0},
                    {"flops", pr.root_flops},
                    {"entries", pr.root_mem}});
  out["per_level"] = std::move(levels);
  return out;
}

nlohmann::json tree_report(const SplineSpace& space, const EliminationTree& tree) {
  nlohmann::json out = config_json(space);
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.levels.size(); ++i) {
    nlohmann::json clusters = nlohmann::json::array();
    for (std::size_t c = 0; c < tree.levels[i].size(); ++c) {
      const Cluster& cl = tree.levels[i][c];
      std::vector<int> lo(cl.box.lo.begin(), cl.box.lo.begin() + space.dim);
      std::vector<int> hi(cl.box.hi.begin(), cl.box.hi.begin() + space.dim);
      nlohmann::json node = {{"index", c},
                             {"box_lo", lo},
                             {"box_hi", hi},
                             {"q", cl.q()},
                             {"r", cl.r()},
                             {"interior", cl.is_interior(space)}};
      if (i > 0) node["children"] = tree.children[i][c];
      clusters.push_back(std::move(node));
    }
    levels.push_back({{"i", i}, {"clusters", std::move(clusters)}});
  }
  out["levels"] = std::move(levels);
  return out;
}

SweepRow sweep_row(const SplineSpace& space, const SolveResult& result,
                   const Prediction& prediction) {
  return {space,
          result.cost.total_flops,
          result.cost.total_factor_bytes,
          prediction.level_sum_flops,
          prediction.level_sum_mem * sizeof(double),
          result.solution.residual_norm};
}

SweepSummary summarize_sweep(const std::vector<SweepRow>& rows) {
  std::vector<std::pair<double, double>> flops;
  std::vector<std::pair<double, double>> bytes;
  for (const SweepRow& row : rows) {
    const auto n = static_cast<double>(row.space.num_dofs());
    flops.emplace_back(n, static_cast<double>(row.flops_measured));
    bytes.emplace_back(n, static_cast<double>(row.factor_bytes_measured));
  }
  return {fit_scaling(std::move(flops)), fit_scaling(std::move(bytes))};
}

std::string csv_row(const SweepRow& row) {
  std::ostringstream os;
  os << row.space.dim << ',' << row.space.degree << ',' << to_string(row.space.continuity) << ','
     << row.space.levels << ',' << row.space.num_dofs() << ',' << row.flops_measured << ','
     << row.factor_bytes_measured << ',' << fmt_double(row.flops_predicted) << ','
     << fmt_double(row.bytes_predicted) << ',' << fmt_double(row.residual_norm);
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const SweepSummary& summary) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const SweepRow& row : rows) os << csv_row(row) << '\n';
  os << "# flops_exponent=" << fmt_double(summary.flops.exponent)
     << " flops_r2=" << fmt_double(summary.flops.r2) << '\n';
  os << "# bytes_exponent=" << fmt_double(summary.bytes.exponent)
     << " bytes_r2=" << fmt_double(summary.bytes.r2) << '\n';
  return os.str();
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows, const SweepSummary& summary) {
  nlohmann::json table = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    nlohmann::json r = config_json(row.space);
    r["flops_measured"] = counter_json(row.flops_measured);
    r["factor_bytes_measured"] = counter_json(row.factor_bytes_measured);
    r["flops_predicted"] = row.flops_predicted;
    r["bytes_predicted"] = row.bytes_predicted;
    r["residual_norm"] = row.residual_norm;
    table.push_back(std::move(r));
  }
  return {{"rows", std::move(table)},
          {"summary", {{"flops", fit_json(summary.flops)}, {"bytes", fit_json(summary.bytes)}}}};
}

}  // namespace mfs
