// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mfs/assembly.hpp"
#include "mfs/costmodel.hpp"
#include "mfs/solver.hpp"
#include "oracles.hpp"

using namespace mfs;

namespace {

// Pinned tolerances.
constexpr double kOracleTol = 1e-9;
constexpr Index kMaxDofs = 20000;
constexpr int kRandomConfigs = 50;
constexpr unsigned kSeed = 20240611;
constexpr double kRatioLo = 0.25;
constexpr double kRatioHi = 4.0;
constexpr double kUnityTol = 1e-12;
constexpr double kRowSumTol = 1e-12;
constexpr int kUnitySamples = 1000;

struct Config {
  int d;
  int p;
  Continuity c;
  int s;
};

std::string label(const Config& k) {
  std::ostringstream os;
  os << "d=" << k.d << " p=" << k.p << " " << to_string(k.c) << " s=" << k.s;
  return os.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
  std::printf("%s criterion %d: %s | %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, o, secs);
}

Index dofs_for(const Config& k) { return build_space(k.d, k.p, k.c, k.s).num_dofs(); }

std::vector<Config> oracle_grid() {
  std::vector<Config> grid;
  for (int d = 1; d <= 3; ++d)
    for (int p = 1; p <= 4; ++p)
      for (const Continuity c : {Continuity::C0, Continuity::Cpm1})
        for (int s = 1; dofs_for({d, p, c, s}) <= kMaxDofs; ++s) grid.push_back({d, p, c, s});
  return grid;
}

// Cost records from the oracle sweep, reused by the conservation and
// counter criteria.
std::map<std::tuple<int, int, int, int>, CostRecord> g_costs;

std::tuple<int, int, int, int> key(const Config& k) {
  return {k.d, k.p, static_cast<int>(k.c), k.s};
}

Outcome oracle_correctness() {
  Outcome o;
  double worst = 0.0;
  std::string worst_cfg;
  int cases = 0;
  for (const Config& k : oracle_grid()) {
    const SplineSpace space = build_space(k.d, k.p, k.c, k.s);
    const SolveResult res = solve(space, {.compute_residual = false});
    const Eigen::VectorXd ref = oracle::reference_solve(assemble_global(space));
    const double err = (res.solution.values - ref).norm() / ref.norm();
    g_costs.emplace(key(k), res.cost);
    ++cases;
    if (!(err <= worst)) {
      worst = err;
      worst_cfg = label(k);
    }
    if (!(err <= kOracleTol)) {
      o.pass = false;
      std::ostringstream os;
      os << label(k) << " err=" << err << "; ";
      o.detail += os.str();
    }
  }
  std::ostringstream os;
  os << cases << " configurations, worst relative error " << worst << " at " << worst_cfg;
  o.detail = o.detail.empty() ? os.str() : o.detail + os.str();
  return o;
}

Outcome dof_conservation() {
  Outcome o;
  int cases = 0;
  for (const Config& k : oracle_grid()) {
    const SplineSpace space = build_space(k.d, k.p, k.c, k.s);
    Index from_tree = 0;
    for (const auto& level : classify_all(space))
      for (const Cluster& cl : level) from_tree += cl.q();
    Index from_solver = 0;
    const auto it = g_costs.find(key(k));
    if (it != g_costs.end()) {
      for (const FrontCost& f : it->second.fronts) from_solver += f.q;
    } else {
      from_solver = from_tree;
    }
    ++cases;
    if (from_tree != space.num_dofs() || from_solver != space.num_dofs()) {
      o.pass = false;
      o.detail += label(k) + " sum=" + std::to_string(from_tree) + "/" +
                  std::to_string(from_solver) + " N=" + std::to_string(space.num_dofs()) + "; ";
    }
  }
  o.detail += std::to_string(cases) + " configurations";
  return o;
}

Outcome level0_counts() {
  Outcome o;
  int clusters = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int p = 2; p <= 4; ++p) {
      for (const Continuity c : {Continuity::C0, Continuity::Cpm1}) {
        // s = 2 leaves interior clusters in every dimension.
        const SplineSpace space = build_space(d, p, c, 2);
        const Index expected =
            c == Continuity::C0 ? static_cast<Index>(std::pow(p - 1, d)) : Index{1};
        int interior = 0;
        for (const Cluster& cl : classify_level(space, 0)) {
          if (!cl.is_interior(space)) continue;
          ++interior;
          if (cl.q() != expected) {
            o.pass = false;
            o.detail += label({d, p, c, 2}) + " q=" + std::to_string(cl.q()) +
                        " expected " + std::to_string(expected) + "; ";
            break;
          }
        }
        if (interior == 0) {
          o.pass = false;
          o.detail += label({d, p, c, 2}) + " has no interior cluster; ";
        }
        clusters += interior;
      }
    }
  }
  o.detail += std::to_string(clusters) + " interior level-0 clusters checked";
  return o;
}

Outcome counter_exactness() {
  Outcome o;
  const std::vector<Config> grid = oracle_grid();
  std::mt19937 rng(kSeed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::uint64_t fronts = 0;
  for (int n = 0; n < kRandomConfigs; ++n) {
    const Config& k = grid[pick(rng)];
    CostRecord cost;
    if (const auto it = g_costs.find(key(k)); it != g_costs.end()) {
      cost = it->second;
    } else {
      cost = solve(build_space(k.d, k.p, k.c, k.s), {.compute_residual = false}).cost;
    }
    std::uint64_t total = 0;
    for (const FrontCost& f : cost.fronts) {
      const std::uint64_t exact = oracle::exact_front_flops(static_cast<std::uint64_t>(f.q),
                                                            static_cast<std::uint64_t>(f.r));
      total += exact;
      ++fronts;
      if (exact != f.flops) {
        o.pass = false;
        o.detail += label(k) + " front (" + std::to_string(f.level) + "," +
                    std::to_string(f.index) + ") counted " + std::to_string(f.flops) +
                    " exact " + std::to_string(exact) + "; ";
        break;
      }
    }
    if (total != cost.total_flops) {
      o.pass = false;
      o.detail += label(k) + " total mismatch; ";
    }
  }
  o.detail += std::to_string(kRandomConfigs) + " configurations, " + std::to_string(fronts) +
              " fronts";
  return o;
}

struct SweepData {
  Config base;
  std::vector<std::pair<double, double>> flops;  // (N, flops)
  std::vector<std::pair<double, double>> bytes;  // (N, bytes)
  std::vector<CostRecord> costs;
  std::vector<int> levels;
};

SweepData run_sweep(int d, int p, Continuity c, int s_lo, int s_hi) {
  SweepData out{{d, p, c, s_lo}, {}, {}, {}, {}};
  for (int s = s_lo; s <= s_hi; ++s) {
    const SplineSpace space = build_space(d, p, c, s);
    SolveResult res = solve(space, {.compute_residual = false});
    const double n = static_cast<double>(space.num_dofs());
    out.flops.emplace_back(n, static_cast<double>(res.cost.total_flops));
    out.bytes.emplace_back(n, static_cast<double>(res.cost.total_factor_bytes));
    out.costs.push_back(std::move(res.cost));
    out.levels.push_back(s);
  }
  return out;
}

struct ExponentCheck {
  std::string what;
  const std::vector<std::pair<double, double>>* samples;
  double lo;
  double hi;
};

std::vector<SweepData> g_sweeps;

Outcome scaling_exponents() {
  Outcome o;
  g_sweeps.clear();
  g_sweeps.push_back(run_sweep(1, 3, Continuity::C0, 5, 11));
  g_sweeps.push_back(run_sweep(1, 3, Continuity::Cpm1, 5, 11));
  g_sweeps.push_back(run_sweep(2, 3, Continuity::Cpm1, 2, 5));
  g_sweeps.push_back(run_sweep(2, 1, Continuity::C0, 3, 7));
  g_sweeps.push_back(run_sweep(3, 1, Continuity::C0, 1, 4));
  g_sweeps.push_back(run_sweep(3, 2, Continuity::Cpm1, 1, 3));

  const std::vector<ExponentCheck> checks = {
      {"1D C0 p=3 flops", &g_sweeps[0].flops, 0.95, 1.05},
      {"1D C0 p=3 memory", &g_sweeps[0].bytes, 0.95, 1.05},
      {"1D Cpm1 p=3 flops", &g_sweeps[1].flops, 0.95, 1.05},
      {"1D Cpm1 p=3 memory", &g_sweeps[1].bytes, 0.95, 1.05},
      {"2D Cpm1 p=3 flops", &g_sweeps[2].flops, 1.35, 1.65},
      {"2D C0 p=1 flops", &g_sweeps[3].flops, 1.35, 1.65},
      {"3D C0 p=1 flops", &g_sweeps[4].flops, 1.7, 2.2},
      {"3D C0 p=1 memory", &g_sweeps[4].bytes, 1.2, 1.45},
      {"3D Cpm1 p=2 flops", &g_sweeps[5].flops, 1.7, 2.2},
  };
  for (const ExponentCheck& ch : checks) {
    const ScalingFit fit = fit_scaling(*ch.samples);
    const bool ok = fit.exponent >= ch.lo && fit.exponent <= ch.hi;
    o.pass = o.pass && ok;
    std::ostringstream os;
    os.precision(3);
    os << ch.what << " " << fit.exponent << (ok ? "" : " (out of range)") << "; ";
    o.detail += os.str();
  }
  return o;
}

Outcome p_scaling() {
  Outcome o;
  for (const Continuity c : {Continuity::C0, Continuity::Cpm1}) {
    std::vector<std::pair<double, double>> samples;
    for (int p = 1; p <= 8; ++p) {
      const SplineSpace space = build_space(1, p, c, 6);
      const SolveResult res = solve(space, {.compute_residual = false});
      samples.emplace_back(static_cast<double>(p), static_cast<double>(res.cost.total_flops) /
                                                       static_cast<double>(space.num_dofs()));
    }
    const ScalingFit fit = fit_scaling(samples);
    const bool ok = fit.exponent >= 1.7 && fit.exponent <= 2.3;
    o.pass = o.pass && ok;
    std::ostringstream os;
    os.precision(3);
    os << to_string(c) << " exponent " << fit.exponent << (ok ? "" : " (out of range)") << "; ";
    o.detail += os.str();
  }
  return o;
}

Outcome table_ratios() {
  Outcome o;
  if (g_sweeps.empty()) return {false, "scaling sweeps unavailable"};
  int checked = 0;
  int bad = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::map<std::string, std::string> first_bad;
  for (const SweepData& sw : g_sweeps) {
    const Config& b = sw.base;
    for (std::size_t k = 0; k < sw.costs.size(); ++k) {
      const int s = sw.levels[k];
      for (const FrontCost& f : sw.costs[k].fronts) {
        if (!f.interior || f.level >= s) continue;
        const QrPrediction pr = predict_qr(b.d, b.p, b.c, f.level);
        const double rq = static_cast<double>(f.q) / pr.q;
        const double rr = static_cast<double>(f.r) / pr.r;
        ++checked;
        min_ratio = std::min({min_ratio, rq, rr});
        max_ratio = std::max({max_ratio, rq, rr});
        const bool ok = rq >= kRatioLo && rq <= kRatioHi && rr >= kRatioLo && rr <= kRatioHi;
        if (!ok) {
          ++bad;
          std::ostringstream id;
          id << b.d << "D " << to_string(b.c) << " p=" << b.p << " i=" << f.level;
          if (!first_bad.count(id.str())) {
            std::ostringstream os;
            os.precision(3);
            os << "q " << f.q << "/" << pr.q << " r " << f.r << "/" << pr.r;
            first_bad[id.str()] = os.str();
          }
        }
      }
    }
  }
  o.pass = bad == 0;
  std::ostringstream os;
  os.precision(3);
  os << checked << " interior clusters, " << bad << " outside [" << kRatioLo << ", " << kRatioHi
     << "], ratio range [" << min_ratio << ", " << max_ratio << "]";
  for (const auto& [id, what] : first_bad) os << "; " << id << ": " << what;
  o.detail = os.str();
  return o;
}

Outcome basis_sanity() {
  Outcome o;
  std::mt19937 rng(kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_unity = 0.0;
  double worst_row = 0.0;
  int configs = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int p = 1; p <= 4; ++p) {
      for (const Continuity c : {Continuity::C0, Continuity::Cpm1}) {
        const int s = d == 3 ? 1 : 2;
        const SplineSpace space = build_space(d, p, c, s);
        ++configs;
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int n = 0; n < kUnitySamples; ++n) {
          for (double& v : x) v = unit(rng);
          const BasisEval ev = eval_basis(space, x);
          worst_unity = std::max(worst_unity, std::abs(ev.values.sum() - 1.0));
        }
        for (Index e = 0; e < space.num_elements(); ++e) {
          const ElementOperators ops = element_operators(space, space.element_multi_index(e));
          worst_row =
              std::max(worst_row, ops.stiffness.rowwise().sum().cwiseAbs().maxCoeff());
        }
      }
    }
  }
  o.pass = worst_unity <= kUnityTol && worst_row <= kRowSumTol;
  std::ostringstream os;
  os << configs << " configurations, max |sum N - 1| = " << worst_unity
     << ", max |stiffness row sum| = " << worst_row;
  o.detail = os.str();
  return o;
}

}  // namespace

int main() {
  run(1, "oracle correctness", oracle_correctness);
  run(2, "DOF conservation", dof_conservation);
  run(3, "level-0 elimination counts", level0_counts);
  run(4, "counter exactness", counter_exactness);
  run(5, "scaling exponents in N", scaling_exponents);
  run(6, "p-scaling of flops/N", p_scaling);
  run(7, "cluster size ratios against the level table", table_ratios);
  run(8, "basis sanity", basis_sanity);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
