#include "kedim/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "kedim/errors.hpp"

namespace kedim {

using nlohmann::json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ComputationError(fmt::format("cannot write '{}'", path));
  out << content;
  if (!out) throw ComputationError(fmt::format("write to '{}' failed", path));
}

std::string spectra_csv(const EigenSequence& seq, const DomainParams& domain) {
  std::string s = "j,lambda_j,li_yau_lower\n";
  for (std::size_t j = 1; j <= seq.count_available(); ++j) {
    s += fmt::format("{},{},{}\n", j, num(seq(j)), num(li_yau_bound(domain, j)));
  }
  return s;
}

std::string state_csv(const GalerkinState& state) {
  std::string s = "j,coeff\n";
  for (Eigen::Index j = 0; j < state.coeffs.size(); ++j) s += fmt::format("{},{}\n", j + 1, num(state.coeffs[j]));
  return s;
}

std::string trace_csv(const EnergyTrace& trace) {
  std::string s = "t,W,V,L2,Linf,H1\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    s += fmt::format("{},{},{},{},{},{}\n", num(trace.times[k]), num(trace.W[k]), num(trace.V[k]),
                     num(std::sqrt(trace.W[k])), num(trace.Linf[k]), num(std::sqrt(trace.V[k])));
  }
  return s;
}

std::string cloud_csv(const AttractorSample& sample, const GalerkinSolver& solver) {
  const Eigen::Index m = sample.points.empty() ? 0 : sample.points.front().coeffs.size();
  std::string s = "point,trajectory,t,L2,Linf,H1";
  for (Eigen::Index j = 1; j <= m; ++j) s += fmt::format(",c{}", j);
  s += '\n';
  const std::size_t per = std::max<std::size_t>(1, sample.snapshots_per_traj);
  for (std::size_t k = 0; k < sample.points.size(); ++k) {
    const Eigen::VectorXd& c = sample.points[k].coeffs;
    s += fmt::format("{},{},{},{},{},{}", k, k / per, num(sample.points[k].time), num(solver.l2(c)),
                     num(solver.linf(c)), num(solver.h1(c)));
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      s += ',';
      s += num(c[j]);
    }
    s += '\n';
  }
  return s;
}

std::string boxcount_csv(const BoxCountReport& rep) {
  std::string s = "eps,log2_inv_eps,count,log2_count,in_fit\n";
  for (std::size_t k = 0; k < rep.eps_grid.size(); ++k) {
    const bool fit = !rep.degenerate && k >= rep.fit_range.first && k <= rep.fit_range.second &&
                     rep.counts[k] >= 10;
    s += fmt::format("{},{},{},{},{}\n", num(rep.eps_grid[k]), num(std::log2(1.0 / rep.eps_grid[k])), rep.counts[k],
                     num(std::log2(static_cast<double>(rep.counts[k]))), fit ? 1 : 0);
  }
  return s;
}

std::string boxcount_svg(const BoxCountReport& rep, double bound) {
  constexpr double W = 640.0, H = 440.0, left = 70.0, right = 20.0, top = 40.0, bottom = 60.0;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < rep.eps_grid.size(); ++k) {
    xs.push_back(std::log2(1.0 / rep.eps_grid[k]));
    ys.push_back(std::log2(static_cast<double>(rep.counts[k])));
  }
  double x0 = xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end());
  double x1 = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
  double y0 = 0.0;
  double y1 = ys.empty() ? 1.0 : *std::max_element(ys.begin(), ys.end());
  if (x1 - x0 < 1e-9) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-9) y1 = y0 + 1.0;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      W, H, W, H);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left,
                   H - bottom, W - right, H - bottom);
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left, top,
                   left, H - bottom);
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0;
    const double yv = y0 + (y1 - y0) * t / 4.0;
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:.2f}</text>\n",
                     px(xv), H - bottom + 16, xv);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:.2f}</text>\n",
                     left - 6, py(yv) + 4, yv);
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">log2(1/eps)</text>\n",
                   (left + W - right) / 2, H - 18);
  s += fmt::format(
      "<text x=\"16\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2f})\">"
      "log2 N_eps</text>\n",
      (top + H - bottom) / 2, (top + H - bottom) / 2);

  for (std::size_t k = 0; k < xs.size(); ++k) {
    const bool fit = !rep.degenerate && k >= rep.fit_range.first && k <= rep.fit_range.second;
    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"{}\"/>\n", px(xs[k]), py(ys[k]),
                     fit ? "#1f77b4" : "#bbbbbb");
  }
  if (!rep.degenerate && rep.fit_range.second > rep.fit_range.first) {
    double mx = 0.0, my = 0.0;
    const auto n = static_cast<double>(rep.fit_range.second - rep.fit_range.first + 1);
    for (std::size_t k = rep.fit_range.first; k <= rep.fit_range.second; ++k) {
      mx += xs[k];
      my += ys[k];
    }
    mx /= n;
    my /= n;
    const double xa = xs[rep.fit_range.first], xb = xs[rep.fit_range.second];
    s += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#d62728\" stroke-width=\"2\"/>\n",
        px(xa), py(my + rep.slope * (xa - mx)), px(xb), py(my + rep.slope * (xb - mx)));
  }
  s += fmt::format(
      "<text x=\"{:.2f}\" y=\"24\" font-size=\"13\">slope {:.4f} (r2 {:.4f}); upper bound {:.4g}</text>\n", left,
      rep.slope, rep.r_squared, bound);
  s += "</svg>\n";
  return s;
}

std::string entropy_csv(const std::vector<EntropyRow>& rows) {
  std::string s = "eps,d,upper_bits,lower_bits,section_d,lo,hi\n";
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : rows) {
    s += fmt::format("{},{},{},{},{},{},{}\n", num(r.eps), r.d, num(r.upper_bits), r.lower_bits ? num(*r.lower_bits) : "",
                     opt(r.section_d), opt(r.lo), opt(r.hi));
  }
  return s;
}

json to_json(const BoundCheck& c) {
  json j = {{"name", c.name},       {"passed", c.passed},   {"bound", c.bound},     {"worst", c.worst},
            {"tol", c.tol},         {"checked", c.checked}, {"skipped", c.skipped}, {"margin", c.margin()},
            {"note", c.note}};
  j["witness"] = c.witness ? json(*c.witness) : json(nullptr);
  return j;
}

json to_json(const BoxCountReport& rep) {
  return {{"eps_grid", rep.eps_grid},
          {"counts", rep.counts},
          {"slope", rep.slope},
          {"fit_range", {rep.fit_range.first, rep.fit_range.second}},
          {"r_squared", rep.r_squared},
          {"distinct_points", rep.distinct_points},
          {"degenerate", rep.degenerate}};
}

json to_json(const BoundsSummary& b) {
  return {{"parabolic", b.parabolic},
          {"elliptic_corollary", b.elliptic},
          {"equilibria", b.equilibria},
          {"zelik_parabolic", b.zelik_parabolic},
          {"smoothing_C", b.smoothing.C},
          {"c_gamma_beta", *b.smoothing.c_gamma_beta},
          {"time_star", *b.smoothing.time_star},
          {"c_tilde", *b.smoothing.c_tilde},
          {"c_tilde_cap", b.smoothing.c_tilde_cap ? json(*b.smoothing.c_tilde_cap) : json(nullptr)},
          {"li_yau_alpha", b.li_yau.alpha},
          {"li_yau_c", b.li_yau.c},
          {"l2_radius", b.l2_radius},
          {"linf_bound", b.linf_bound}};
}

json to_json(const CoverVerification& v) {
  json j = {{"passed", v.passed}, {"samples", v.samples}, {"radius", v.radius}, {"max_distance", v.max_distance}};
  if (v.witness_index) {
    j["witness_index"] = *v.witness_index;
    j["witness_head"] = std::vector<double>(v.witness_head->data(), v.witness_head->data() + v.witness_head->size());
    j["witness_tail_norm"] = v.witness_tail_norm;
  }
  return j;
}

json cover_plan_to_json(const CoverPlan& plan) {
  json centers = json::array();
  for (Eigen::Index k = 0; k < plan.centers.cols(); ++k) {
    centers.push_back(std::vector<double>(plan.centers.col(k).data(), plan.centers.col(k).data() + plan.centers.rows()));
  }
  json j = {{"d", plan.d},
            {"radius", plan.radius},
            {"target_eps", plan.target_eps},
            {"strategy", to_string(plan.strategy)},
            {"count", plan.count()},
            {"candidates", plan.candidates},
            {"net_radius", plan.net_radius},
            {"centers", centers}};
  if (plan.count_bound) j["count_bound"] = *plan.count_bound;
  if (plan.volumetric_bound) j["volumetric_bound"] = *plan.volumetric_bound;
  return j;
}

CoverPlan cover_plan_from_json(const json& doc) {
  try {
    CoverPlan plan;
    plan.d = doc.at("d").get<std::size_t>();
    plan.radius = doc.at("radius").get<double>();
    plan.target_eps = doc.at("target_eps").get<double>();
    const std::string strategy = doc.value("strategy", std::string("origin"));
    if (strategy == to_string(CoverPlan::Strategy::LatticeFarthestPoint)) {
      plan.strategy = CoverPlan::Strategy::LatticeFarthestPoint;
    } else if (strategy == to_string(CoverPlan::Strategy::TailAwarePartition)) {
      plan.strategy = CoverPlan::Strategy::TailAwarePartition;
    } else {
      plan.strategy = CoverPlan::Strategy::Origin;
    }
    const json& centers = doc.at("centers");
    plan.centers.resize(static_cast<Eigen::Index>(plan.d), static_cast<Eigen::Index>(centers.size()));
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const auto c = centers[k].get<std::vector<double>>();
      if (c.size() != plan.d) throw ConfigError(fmt::format("cover plan: center {} has {} coordinates, d = {}", k, c.size(), plan.d));
      for (std::size_t i = 0; i < c.size(); ++i) {
        plan.centers(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = c[i];
      }
    }
    if (plan.centers.cols() == 0) throw ConfigError("cover plan: no centers");
    if (!(plan.radius > 0.0) || !(plan.target_eps > 0.0)) throw ConfigError("cover plan: radius and eps must be positive");
    if (doc.contains("count_bound")) plan.count_bound = doc["count_bound"].get<double>();
    if (doc.contains("volumetric_bound")) plan.volumetric_bound = doc["volumetric_bound"].get<double>();
    plan.candidates = doc.value("candidates", std::size_t{0});
    plan.net_radius = doc.value("net_radius", 0.0);
    return plan;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("cover plan: malformed JSON ({})", e.what()));
  }
}

json report_json(const FullReport& rep, const json& config) {
  json j;
  j["config"] = config;
  j["seed"] = rep.seed;
  j["bounds"] = to_json(rep.bounds);
  j["checks"] = json::array();
  for (const auto& c : rep.checks) j["checks"].push_back(to_json(c));
  if (rep.boxcount) j["boxcount"] = to_json(*rep.boxcount);
  if (rep.sample) {
    j["sample"] = {{"points", rep.sample->points.size()},
                   {"ensemble_size", rep.sample->ensemble_size},
                   {"snapshots_per_traj", rep.sample->snapshots_per_traj},
                   {"burn_in", rep.sample->burn_in},
                   {"seed", rep.sample->seed}};
  }
  j["failures"] = rep.failures;
  j["all_passed"] = rep.all_passed();
  return j;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace kedim
