// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// argv[1] (optional): directory for the determinism artifacts.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "kedim/attractor_lab.hpp"
#include "kedim/dimension_bounds.hpp"
#include "kedim/ellipsoid.hpp"
#include "kedim/galerkin.hpp"
#include "kedim/parallel.hpp"
#include "kedim/random.hpp"
#include "kedim/report_io.hpp"
#include "kedim/spectra.hpp"

using namespace kedim;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, std::string what) {
    if (!cond) ok = false;
    notes.push_back(fmt::format("{} {}", cond ? "ok  " : "FAIL", what));
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool run(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.expect(false, fmt::format("exception: {}", e.what()));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.expect(secs < limit_s, fmt::format("runtime {:.2f} s < {} s", secs, limit_s));
  fmt::print("[{}] criterion {}: {}\n", out.ok ? "PASS" : "FAIL", id, title);
  for (const auto& n : out.notes) fmt::print("    {}\n", n);
  std::fflush(stdout);
  return out.ok;
}

FullReport desk_report(double lambda) {
  AttractorConfig acfg;  // ensemble 64, burn-in 10, 16 snapshots
  ReportOptions opts;    // 32 smoothing pairs, 16 energy pairs, 2% / 1e-4 slack
  return full_report(DomainParams::interval(kPi), ReactionParams::canonical(lambda, 1.0, 4.0), SolverConfig{}, acfg,
                     opts, kSeed, default_jobs());
}

struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;
};

Artifacts artifacts(const FullReport& rep) {
  GalerkinSolver solver(rep.solver);
  Artifacts a;
  a.files.emplace_back("cloud.csv", cloud_csv(*rep.sample, solver));
  if (rep.boxcount) a.files.emplace_back("boxcount.csv", boxcount_csv(*rep.boxcount));
  for (std::size_t k = 0; k < rep.traces.size(); ++k)
    a.files.emplace_back(fmt::format("trace_{:02}.csv", k), trace_csv(rep.traces[k]));
  return a;
}

const BoundCheck* find_check(const FullReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string outdir = argc > 1 ? argv[1] : "acceptance_out";
  bool all = true;

  all &= run(1, "formula suite", 1.0, [](Outcome& o) {
    const double want = 2 * (1 + std::log(3.0)) / std::log(2.0);
    o.expect(rel(entropy_upper_bound(1.0, 1.0, 1.0), want) <= 1e-9,
             fmt::format("entropy_upper_bound(1,1,1) = {:.12f} vs {:.12f}", entropy_upper_bound(1.0, 1.0, 1.0), want));
    auto ly = li_yau_constants(DomainParams::interval(kPi));
    o.expect(std::abs(ly.alpha - 2.0) <= 1e-12 && rel(ly.c, 1.0 / 3.0) <= 1e-12,
             fmt::format("li_yau_constants(1, pi) = ({}, {:.15f})", ly.alpha, ly.c));
    int points = 0;
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n)
      for (double vol : {0.25, 1.0, kPi, 12.0, 100.0})
        for (double lambda : {0.5, 2.0, 10.0, 80.0, 1000.0})
          for (double gb : {0.2, 3.0}) {
            auto dom = DomainParams::general(n, vol);
            auto params = ReactionParams{lambda, 1.0, gb, 4.0};
            auto k = li_yau_constants(dom);
            double eq = equilibria_dim_bound(lambda, k.c, k.alpha);
            worst = std::max(worst, rel(eq, zelik_bound(std::sqrt(lambda), k.c, k.alpha)));
            worst = std::max(worst, rel(elliptic_corollary_bound(dom, lambda), eq));
            worst = std::max(worst, rel(parabolic_bound(dom, params),
                                        zelik_bound(smoothing_constant_parabolic(params).C, k.c, k.alpha)));
            ++points;
          }
    o.expect(points >= 100 && worst <= 1e-9,
             fmt::format("composition identities on {} grid points, worst relative gap {:.2e}", points, worst));
  });

  all &= run(2, "covering consistency", 30.0, [](Outcome& o) {
    auto e = Ellipsoid::power_law(1.0, 2.0);
    for (double eps : {0.5, 0.3, 0.2, 0.1}) {
      const double upper = entropy_upper_bound(1.0, 2.0, eps);
      auto b1 = covering_oracle(e, eps, 1);
      auto exact = static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-12));
      o.expect(b1.lo == exact && b1.hi == exact && std::log2(double(b1.lo)) <= upper,
               fmt::format("eps={} d=1: [{}, {}], exact {}, log2(lo) = {:.3f} <= {:.3f}", eps, b1.lo, b1.hi, exact,
                           std::log2(double(b1.lo)), upper));
      auto b2 = covering_oracle(e, eps, 2);
      o.expect(b2.lo <= b2.hi && std::log2(double(b2.lo)) <= upper,
               fmt::format("eps={} d=2: [{}, {}], log2(lo) = {:.3f} <= {:.3f}", eps, b2.lo, b2.hi,
                           std::log2(double(b2.lo)), upper));
    }
  });

  all &= run(3, "constructive cover validity", 60.0, [](Outcome& o) {
    for (double alpha : {1.0, 2.0})
      for (double eps : {0.3, 0.5, 1.0}) {
        auto e = Ellipsoid::power_law(1.0, alpha);
        auto plan = build_cover(e, eps);
        auto v = verify_cover(plan, e, 100000, kSeed, default_jobs());
        const double cap = std::pow(3.0, double(plan.d)) * std::exp(alpha * double(plan.d));
        o.expect(v.passed && double(plan.count()) <= cap && std::abs(plan.radius - std::sqrt(2.0) * eps) < 1e-15,
                 fmt::format("alpha={} eps={}: d={}, {} centers <= {:.4g}, max distance {:.6f} <= {:.6f}", alpha, eps,
                             plan.d, plan.count(), cap, v.max_distance, plan.radius));
      }
  });

  all &= run(4, "Li-Yau verification", 10.0, [](Outcome& o) {
    for (int n = 1; n <= 3; ++n)
      for (double side : {1.0, kPi}) {
        auto dom = DomainParams::box(std::vector<double>(n, side));
        auto seq = box_eigenvalues(dom, 10000);
        auto ly = li_yau_constants(dom);
        std::size_t bad = 0;
        double tight = 1e300;
        for (std::size_t j = 1; j <= 10000; ++j) {
          double lower = ly.c * std::pow(double(j), ly.alpha);
          if (seq(j) < lower * (1 - 1e-12)) ++bad;
          tight = std::min(tight, seq(j) / lower);
        }
        o.expect(bad == 0, fmt::format("N={} side={:.6f}: {} violations in 10^4, min ratio {:.6f}", n, side, bad,
                                       tight));
      }
  });

  FullReport first;
  all &= run(5, "Chafee-Infante desk run", 300.0, [&](Outcome& o) {
    first = desk_report(10.0);
    for (const auto& f : first.failures) o.expect(false, f);
    auto show = [&](const char* name, double want_bound) {
      const BoundCheck* c = find_check(first, name);
      if (!c) {
        o.expect(false, fmt::format("{} check missing", name));
        return;
      }
      o.expect(c->passed && rel(c->bound, want_bound) < 1e-4,
               fmt::format("{}: worst {:.6g} vs bound {:.6g} (x{}) over {} items", name, c->worst, c->bound,
                           1 + c->tol, c->checked));
    };
    show("l2_bound", 8.8623);
    show("linf_bound", std::sqrt(10.0));
    show("smoothing", std::sqrt(80.0));
    show("energy_inequality", 1.0);
    o.expect(first.bounds.smoothing.time_star && std::abs(*first.bounds.smoothing.time_star - 0.02) < 1e-15,
             "t* = 0.02");
    const BoundCheck* en = find_check(first, "energy_inequality");
    o.expect(en && en->checked == 16 && en->tol == 1e-4, "energy inequality on 16 pairs at 1e-4");
  });

  all &= run(6, "equilibria suite", 120.0, [](Outcome& o) {
    GalerkinSolver solver{SolverConfig{}};
    auto nl = Nonlinearity::power_law(1.0, 4.0);
    auto seq = EigenSequence::power_law(1.0, 2.0, 64);
    auto n = counting_function(seq, 10.0);
    auto es = solver.find_equilibria(nl, 10.0, n, {0.1, 1.0, std::sqrt(10.0)}, default_jobs());
    double sep = 1e300, res = 0.0;
    for (std::size_t i = 0; i < es.equilibria.size(); ++i) {
      res = std::max({res, es.residuals[i], es.residuals_double[i]});
      for (std::size_t k = 0; k < i; ++k)
        sep = std::min(sep, (es.equilibria[i].coeffs - es.equilibria[k].coeffs).norm());
    }
    o.expect(es.equilibria.size() >= 7 && sep > 1e-4,
             fmt::format("{} equilibria, min pairwise L2 distance {:.4f}", es.equilibria.size(), sep));
    o.expect(res <= 1e-9, fmt::format("worst residual {:.3e} (also at 2M modes)", res));
    auto lip = verify_equilibrium_lipschitz(solver, es.equilibria, 10.0, 0.02);
    o.expect(lip.passed && lip.worst_ratio <= std::sqrt(10.0) * 1.02,
             fmt::format("Lipschitz worst ratio {:.6f} <= sqrt(10)*1.02 = {:.6f}", lip.worst_ratio,
                         std::sqrt(10.0) * 1.02));
    auto proj = Nonlinearity::spectral_projection(10.0, n);
    Rng rng(kSeed);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      GalerkinState u = solver.zero();
      for (std::size_t j = 0; j < n; ++j) u.coeffs[j] = rng.uniform(-5, 5);
      worst = std::max(worst, solver.residual(u.coeffs, proj, 10.0).norm());
    }
    o.expect(worst <= 1e-10, fmt::format("projection nonlinearity: 100 subspace points, worst residual {:.3e}", worst));
    auto opt = optimality_lower(10.0, 1.0, 2.0, seq);
    o.expect(n == 3 && double(opt.counted) >= opt.formula,
             fmt::format("N(10) = {} >= sqrt(10) - 1 = {:.4f}", opt.counted, opt.formula));
  });

  all &= run(7, "dimension sandwich", 300.0, [&](Outcome& o) {
    const double bound = parabolic_bound(DomainParams::interval(kPi), ReactionParams::canonical(10.0, 1.0, 4.0));
    const double closed = 8 * ((std::log(3.0) + 2) / std::log(2.0)) * std::sqrt(3 / (4 * kPi)) / std::tgamma(1.5) *
                          kPi * 2 * std::sqrt(10.0);
    o.expect(rel(bound, closed) <= 1e-6, fmt::format("parabolic bound {:.6f} vs closed form {:.6f}", bound, closed));
    if (!first.boxcount) {
      o.expect(false, "lambda=10 box count missing");
    } else {
      const auto& b = *first.boxcount;
      o.expect(b.slope >= 0.5 && b.slope <= bound,
               fmt::format("lambda=10 slope {:.4f} in [0.5, {:.4f}] (r^2 {:.3f}, fit {}..{})", b.slope, bound,
                           b.r_squared, b.fit_range.first, b.fit_range.second));
    }
    auto low = desk_report(0.5);
    o.expect(low.boxcount && low.boxcount->slope < 0.1,
             fmt::format("lambda=0.5 slope {:.4f} < 0.1 ({} distinct points)", low.boxcount ? low.boxcount->slope : -1.0,
                         low.boxcount ? low.boxcount->distinct_points : 0));
  });

  all &= run(8, "determinism", 300.0, [&](Outcome& o) {
    if (!first.sample) {
      o.expect(false, "criterion 5 produced no sample");
      return;
    }
    auto second = desk_report(10.0);
    auto a = artifacts(first);
    auto b = artifacts(second);
    o.expect(a.files.size() == b.files.size() && !a.files.empty(), fmt::format("{} CSV artifacts", a.files.size()));
    std::size_t same = 0;
    for (std::size_t k = 0; k < std::min(a.files.size(), b.files.size()); ++k) {
      const bool eq = a.files[k].first == b.files[k].first && a.files[k].second == b.files[k].second;
      same += eq;
      if (!eq) o.expect(false, fmt::format("{} differs", a.files[k].first));
      write_file((std::filesystem::path(outdir) / "run1" / a.files[k].first).string(), a.files[k].second);
      write_file((std::filesystem::path(outdir) / "run2" / b.files[k].first).string(), b.files[k].second);
    }
    o.expect(same == a.files.size(), fmt::format("{} of {} files byte-identical", same, a.files.size()));
  });

  fmt::print("{}\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
