#include "mfs/costmodel.hpp"

#include <algorithm>
#include <cmath>

namespace mfs {

CostRecord aggregate_costs(std::vector<FrontCost> fronts, int levels,
                           std::size_t bytes_per_entry) {
  CostRecord rec;
  rec.per_level.resize(static_cast<std::size_t>(levels) + 1);
  for (int i = 0; i <= levels; ++i) rec.per_level[static_cast<std::size_t>(i)].level = i;

  std::vector<std::vector<const FrontCost*>> interior(rec.per_level.size());
  std::vector<std::vector<const FrontCost*>> all(rec.per_level.size());
  for (const FrontCost& f : fronts) {
    if (f.level < 0 || f.level > levels) throw std::out_of_range("front level out of range");
    const auto i = static_cast<std::size_t>(f.level);
    LevelCost& lc = rec.per_level[i];
    ++lc.n_clusters;
    lc.flops += f.flops;
    lc.entries += f.entries;
    all[i].push_back(&f);
    if (f.interior) interior[i].push_back(&f);
  }
  for (std::size_t i = 0; i < rec.per_level.size(); ++i) {
    LevelCost& lc = rec.per_level[i];
    auto& pool = interior[i].empty() ? all[i] : interior[i];
    lc.rep_from_interior = !interior[i].empty();
    if (!pool.empty()) {
      std::sort(pool.begin(), pool.end(), [](const FrontCost* a, const FrontCost* b) {
        return a->q != b->q ? a->q < b->q : a->r < b->r;
      });
      const FrontCost* mid = pool[(pool.size() - 1) / 2];
      lc.q_rep = mid->q;
      lc.r_rep = mid->r;
    }
    rec.total_flops += lc.flops;
    rec.total_factor_entries += lc.entries;
  }
  rec.total_factor_bytes = rec.total_factor_entries * bytes_per_entry;
  rec.fronts = std::move(fronts);
  return rec;
}

SchurCost schur_cost_model(double q, double r) {
  if (q < 0 || r < 0) throw std::invalid_argument("schur_cost_model: negative size");
  return {2.0 / 3.0 * q * q * q + 2.0 * q * q * r + 2.0 * q * r * r, q * q + 2.0 * q * r};
}

QrPrediction predict_qr(int d, int p, Continuity continuity, int level) {
  if (d < 1 || d > 3 || p < 1 || level < 0) throw std::invalid_argument("predict_qr: bad arguments");
  const double pd = std::pow(p, d);
  const double pd1 = std::pow(p, d - 1);
  if (level == 0) {
    return continuity == Continuity::C0 ? QrPrediction{pd, pd1} : QrPrediction{1.0, pd};
  }
  const double growth = std::pow(2.0, (d - 1) * level);
  const double v = growth * (continuity == Continuity::C0 ? pd1 : pd);
  return {v, v};
}

namespace {

struct ClosedForm {
  double flops;
  double mem;
  const char* flops_term;
  const char* mem_term;
};

ClosedForm closed_form(int d, double p, Continuity c, double n) {
  const bool c0 = c == Continuity::C0;
  switch (d) {
    case 1:
      return {n * p * p, n * p, "N p^2", "N p"};
    case 2:
      if (c0) {
        return {n * std::pow(p, 4) + std::pow(n, 1.5), n * p * p + n * std::log(n / (p * p)),
                "N p^4 + N^{1.5}", "N p^2 + N log(N/p^2)"};
      }
      return {std::pow(n, 1.5) * std::pow(p, 3), p * p * n * std::log(n / (p * p)),
              "N^{1.5} p^3", "p^2 N log(N/p^2)"};
    default:
      if (c0) {
        return {n * std::pow(p, 6) + n * n, n * std::pow(p, 3) + std::pow(n, 4.0 / 3.0),
                "N p^6 + N^2", "N p^3 + N^{4/3}"};
      }
      return {n * n * std::pow(p, 3), p * p * std::pow(n, 4.0 / 3.0), "N^2 p^3",
              "p^2 N^{4/3}"};
  }
}

}  // namespace

Prediction predict_total(int d, int p, Continuity continuity, int s) {
  const SplineSpace space = build_space(d, p, continuity, s);
  Prediction pr;
  pr.d = d;
  pr.p = p;
  pr.continuity = space.continuity;
  pr.s = s;
  pr.n_dofs = static_cast<double>(space.num_dofs());
  for (int i = 0; i < s; ++i) {
    const QrPrediction qr = predict_qr(d, p, space.continuity, i);
    const SchurCost cost = schur_cost_model(qr.q, qr.r);
    const double nc = std::pow(2.0, d * (s - i));
    pr.q_pred.push_back(qr.q);
    pr.r_pred.push_back(qr.r);
    pr.n_clusters.push_back(nc);
    pr.flops_level.push_back(cost.flops);
    pr.mem_level.push_back(cost.entries);
    pr.level_sum_flops += nc * cost.flops;
    pr.level_sum_mem += nc * cost.entries;
  }
  pr.root_q = predict_qr(d, p, space.continuity, s).q;
  const SchurCost root = schur_cost_model(pr.root_q, 0.0);
  pr.root_flops = root.flops;
  pr.root_mem = root.entries;
  pr.level_sum_flops += root.flops;
  pr.level_sum_mem += root.entries;

  const ClosedForm cf = closed_form(d, p, space.continuity, pr.n_dofs);
  pr.total_flops_pred = cf.flops;
  pr.total_mem_pred = cf.mem;
  pr.dominant_term = cf.flops_term;
  pr.dominant_memory_term = cf.mem_term;
  return pr;
}

ScalingFit fit_scaling(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 3) throw DegenerateFit("scaling fit needs at least 3 samples");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(samples[k].first > 0.0) || !(samples[k].second > 0.0)) {
      throw DegenerateFit("scaling fit needs positive samples");
    }
    if (k > 0 && !(samples[k].first > samples[k - 1].first)) {
      throw DegenerateFit("scaling fit needs strictly increasing abscissae");
    }
  }
  const bool constant = std::all_of(samples.begin(), samples.end(), [&](const auto& s) {
    return s.second == samples.front().second;
  });
  if (constant) throw DegenerateFit("all sampled values are equal");

  ScalingFit fit;
  const std::size_t used = std::max<std::size_t>(2, (samples.size() + 1) / 2);
  fit.points_used = used;
  const std::size_t start = samples.size() - used;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = start; k < samples.size(); ++k) {
    mx += std::log(samples[k].first);
    my += std::log(samples[k].second);
  }
  mx /= static_cast<double>(used);
  my /= static_cast<double>(used);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = start; k < samples.size(); ++k) {
    const double dx = std::log(samples[k].first) - mx;
    const double dy = std::log(samples[k].second) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.samples = std::move(samples);
  return fit;
}

Comparison compare(const CostRecord& measured, const Prediction& predicted) {
  const auto s = static_cast<std::size_t>(predicted.s);
  if (measured.per_level.size() != s + 1) {
    throw std::invalid_argument("compare: measured and predicted level counts differ");
  }
  const auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };

  Comparison cmp;
  for (std::size_t i = 0; i <= s; ++i) {
    const LevelCost& lc = measured.per_level[i];
    LevelComparison lv;
    lv.level = static_cast<int>(i);
    if (i < s) {
      lv.flops_ratio = ratio(static_cast<double>(lc.flops),
                             predicted.n_clusters[i] * predicted.flops_level[i]);
      lv.mem_ratio = ratio(static_cast<double>(lc.entries),
                           predicted.n_clusters[i] * predicted.mem_level[i]);
      lv.q_ratio = ratio(static_cast<double>(lc.q_rep), predicted.q_pred[i]);
      lv.r_ratio = ratio(static_cast<double>(lc.r_rep), predicted.r_pred[i]);
    } else {
      lv.flops_ratio = ratio(static_cast<double>(lc.flops), predicted.root_flops);
      lv.mem_ratio = ratio(static_cast<double>(lc.entries), predicted.root_mem);
      lv.q_ratio = ratio(static_cast<double>(lc.q_rep), predicted.root_q);
    }
    cmp.per_level.push_back(lv);
  }
  cmp.total_flops_ratio = ratio(static_cast<double>(measured.total_flops), predicted.level_sum_flops);
  cmp.total_mem_ratio =
      ratio(static_cast<double>(measured.total_factor_entries), predicted.level_sum_mem);

  double model_flops = 0.0;
  double model_mem = 0.0;
  for (const FrontCost& f : measured.fronts) {
    const SchurCost c = schur_cost_model(static_cast<double>(f.q), static_cast<double>(f.r));
    model_flops += c.flops;
    model_mem += c.entries;
  }
  cmp.exact_qr_flops_ratio = ratio(static_cast<double>(measured.total_flops), model_flops);
  cmp.exact_qr_mem_ratio = ratio(static_cast<double>(measured.total_factor_entries), model_mem);
  return cmp;
}

bool ratio_drifts(const std::vector<double>& ratios_by_s, double spread) {
  if (ratios_by_s.size() < 3) return false;
  bool up = true;
  bool down = true;
  for (std::size_t k = 1; k < ratios_by_s.size(); ++k) {
    up = up && ratios_by_s[k] > ratios_by_s[k - 1];
    down = down && ratios_by_s[k] < ratios_by_s[k - 1];
  }
  if (!up && !down) return false;
  const auto [lo, hi] = std::minmax_element(ratios_by_s.begin(), ratios_by_s.end());
  return *lo > 0.0 && *hi / *lo > spread;
}

}  // namespace mfs
