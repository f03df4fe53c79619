// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "taupath/distributions.hpp"
#include "taupath/exact_kernel.hpp"
#include "taupath/fd_estimator.hpp"
#include "taupath/ipa_estimator.hpp"
#include "taupath/scenario.hpp"
#include "taupath/tauleap_kernel.hpp"
#include "test_support.hpp"

using namespace taupath;
using namespace taupath::testing;

namespace {

struct Context {
  bool extended = false;
  unsigned workers = 0;
  std::uint64_t seed = 1;
};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string within(const SensitivityEstimate& e, double target) {
  return "mean " + num(e.mean, 6) + " sd " + num(e.stddev, 3) + " target " + num(target, 6) +
         " (" + num(std::fabs(e.mean - target) / e.stddev, 3) + " sd)";
}

const ReactionNetwork& birth_death() {
  static const ReactionNetwork net = bundled_model("birth_death.model");
  return net;
}

IpaEstimate bd_ipa(const Context& ctx, Kernel kernel, double horizon, double tau_max,
                   std::uint64_t n, std::optional<double> reference = {}) {
  const ReactionNetwork& bd = birth_death();
  IpaConfig cfg;
  cfg.kernel = kernel;
  cfg.tau.tau_max = tau_max;
  return estimate_sensitivity_ipa(bd, bd.initial_state(), horizon, bd.default_parameters(),
                                  bd.parameter_index("theta2"), cfg, n, {ctx.seed, ctx.workers},
                                  reference);
}

SensitivityEstimate bd_fd(const Context& ctx, Coupling coupling, Kernel kernel, std::uint64_t n) {
  const ReactionNetwork& bd = birth_death();
  FdConfig cfg;
  cfg.coupling = coupling;
  cfg.kernel = kernel;
  cfg.tau.tau_max = 0.5;
  return estimate_sensitivity_fd(bd, bd.initial_state(), 5.0, bd.default_parameters(),
                                 bd.parameter_index("theta2"), cfg, n, {ctx.seed, ctx.workers});
}

Outcome ac1(const Context& ctx) {
  Outcome o;
  for (auto [horizon, target] : {std::pair{5.0, -90.204}, std::pair{10.0, -264.241}}) {
    const double exact = bd_sensitivity_theta2(10, 0.1, horizon);
    o.require(std::fabs(exact - target) < 5e-4, "closed form at T=" + num(horizon) + " is " + num(exact, 7));
    const SensitivityEstimate e = bd_ipa(ctx, Kernel::kExact, horizon, 0.5, 100000).estimate;
    o.require(std::fabs(e.mean - target) <= 3 * e.stddev, "T=" + num(horizon) + " " + within(e, target));
  }
  return o;
}

Outcome ac2(const Context& ctx) {
  Outcome o;
  for (auto [horizon, target] : {std::pair{5.0, -90.204}, std::pair{10.0, -264.241}}) {
    const SensitivityEstimate e = bd_ipa(ctx, Kernel::kTauLeap, horizon, 0.5, 100000, target).estimate;
    o.require(*e.re_percent <= 2.0, "T=" + num(horizon) + " mean " + num(e.mean, 6) + " RE " +
                                        num(*e.re_percent, 3) + "%");
  }
  return o;
}

Outcome ac3(const Context& ctx) {
  Outcome o;
  const double target = bd_centered_difference(0.1, 0.1, 5.0);
  o.require(std::fabs(target - (-90.643)) < 5e-4, "centered difference " + num(target, 7));
  for (auto [name, coupling] : {std::pair{"eCFD", Coupling::kCfd}, std::pair{"eCRP", Coupling::kCrp}}) {
    const SensitivityEstimate e = bd_fd(ctx, coupling, Kernel::kExact, 100000);
    o.require(std::fabs(e.mean - (-90.643)) <= 3 * e.stddev, std::string(name) + " " + within(e, -90.643));
  }
  return o;
}

Outcome ac4(const Context& ctx) {
  Outcome o;
  for (auto [name, coupling] : {std::pair{"tauCFD", Coupling::kCfd}, std::pair{"tauCRP", Coupling::kCrp}}) {
    const SensitivityEstimate e = bd_fd(ctx, coupling, Kernel::kTauLeap, 100000);
    o.require(e.mean >= -88.5 && e.mean <= -84.5,
              std::string(name) + " mean " + num(e.mean, 6) + " sd " + num(e.stddev, 3) + " in [-88.5, -84.5]");
  }
  return o;
}

Outcome ac5(const Context& ctx) {
  Outcome o;
  const IpaEstimate e = bd_ipa(ctx, Kernel::kTauLeap, 10.0, 0.5, 10000);
  const double rho = *e.estimate.mean_rho_tot;
  o.require(rho >= 9.0 && rho <= 11.0, "T=10 mean rho_tot " + num(rho, 4) + " in [9, 11]");
  const IpaEstimate short_run = bd_ipa(ctx, Kernel::kTauLeap, 5.0, 0.5, 10000);
  o.detail += "; info: T=5 mean rho_tot " + num(*short_run.estimate.mean_rho_tot, 4) +
              ", saturated fraction " + num(*short_run.estimate.saturation_fraction, 3);
  return o;
}

Outcome ac6(const Context& ctx) {
  Outcome o;
  const std::vector<double> taus = {1.0, 0.5, 0.25, 0.125};
  std::vector<double> re;
  std::string series;
  for (double tau : taus) {
    const SensitivityEstimate e = bd_ipa(ctx, Kernel::kTauLeap, 10.0, tau, 100000, -264.241).estimate;
    re.push_back(*e.re_percent);
    series += (series.empty() ? "" : ", ") + num(tau) + ":" + num(*e.re_percent, 3) + "%";
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) mx += taus[i], my += re[i];
  mx /= static_cast<double>(taus.size());
  my /= static_cast<double>(taus.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    sxy += (taus[i] - mx) * (re[i] - my);
    sxx += (taus[i] - mx) * (taus[i] - mx);
  }
  const double slope = sxy / sxx;
  o.require(true, "RE by tau_max " + series);
  o.require(re[3] < re[0] / 2, "RE(0.125) < RE(1)/2");
  o.require(slope > 0, "least-squares slope " + num(slope, 3) + " > 0");
  return o;
}

Outcome ac7(const Context& ctx) {
  Outcome o;
  const ReactionNetwork net = bundled_model("toggle_switch.model");
  IpaConfig cfg;
  cfg.kernel = Kernel::kExact;
  const std::uint64_t n = ctx.extended ? 100000 : 10000;
  const SensitivityEstimate e =
      estimate_sensitivity_ipa(net, net.initial_state(), 10.0, net.default_parameters(),
                               net.parameter_index("gamma"), cfg, n, {ctx.seed, ctx.workers})
          .estimate;
  o.require(std::fabs(e.mean - 54.5721) <= 3 * e.stddev,
            "eIPA gamma N=" + std::to_string(n) + " " + within(e, 54.5721));
  return o;
}

Outcome ac8(const Context& ctx) {
  Outcome o;
  const std::string path = std::string(TAUPATH_MODEL_DIR) + "/repressilator.model";
  for (Method m : {Method::kEipa, Method::kTauIpa, Method::kEcfd, Method::kEcrp, Method::kTcfd,
                   Method::kTcrp}) {
    Scenario sc;
    sc.model_path = path;
    sc.method = m;
    sc.parameter = "alpha2";
    sc.horizon = 10.0;
    sc.n = 100;
    sc.seed = ctx.seed;
    sc.workers = ctx.workers;
    if (is_tau_method(m)) sc.tau_max = 0.01;
    try {
      const ScenarioResult r = run_scenario(sc);
      o.require(std::isfinite(r.estimate.mean),
                std::string(method_name(m)) + " N=100 mean " + num(r.estimate.mean, 5));
    } catch (const std::exception& e) {
      o.require(false, std::string(method_name(m)) + " threw: " + e.what());
    }
  }
  if (ctx.extended) {
    // The reference value belongs to the P1 degradation rate gamma1 under this
    // model file's parameter names.
    const ReactionNetwork net = bundled_model("repressilator.model");
    IpaConfig cfg;
    cfg.kernel = Kernel::kExact;
    const SensitivityEstimate e =
        estimate_sensitivity_ipa(net, net.initial_state(), 10.0, net.default_parameters(),
                                 net.parameter_index("gamma1"), cfg, 10000, {ctx.seed, ctx.workers})
            .estimate;
    o.require(std::fabs(e.mean - (-2979.88)) <= 3 * e.stddev,
              "extended eIPA theta=gamma1 (reference -2979.88 is the gamma1 sensitivity) N=10000 " +
                  within(e, -2979.88));
  }
  return o;
}

Outcome ac9(const Context& ctx) {
  Outcome o;
  const ReactionNetwork net = bundled_model("birth_death_volume.model");
  const std::size_t theta2 = net.parameter_index("theta2");
  std::vector<double> lx, ly;
  std::string series;
  for (double v : {1.0, 2.0, 4.0, 8.0}) {
    IpaConfig cfg;
    cfg.kernel = Kernel::kExact;
    cfg.m0 = static_cast<std::uint64_t>(v);
    const SensitivityEstimate e =
        estimate_sensitivity_ipa(net, net.initial_state(), 10.0, net.default_parameters().with("V", v),
                                 theta2, cfg, 10000, {ctx.seed, ctx.workers})
            .estimate;
    lx.push_back(std::log(v));
    ly.push_back(std::log(*e.rsd));
    series += (series.empty() ? "" : ", ") + num(v) + ":" + num(*e.rsd, 4);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  o.require(true, "RSD by V " + series);
  o.require(slope >= -0.65 && slope <= -0.35, "log-log slope " + num(slope, 3) + " in [-0.65, -0.35]");
  return o;
}

// --- property suites -------------------------------------------------------

double poisson_pvalue(double mean, int n, std::uint64_t seed) {
  RngStream s(seed);
  std::map<std::int64_t, int> counts;
  for (int i = 0; i < n; ++i) ++counts[sample_poisson(s, mean)];
  const boost::math::poisson_distribution<> law(mean);
  std::vector<double> expected, observed;
  double e_acc = 0, o_acc = 0;
  const auto hi = static_cast<std::int64_t>(boost::math::quantile(law, 1.0 - 1e-9)) + 1;
  for (std::int64_t k = 0; k <= hi; ++k) {
    e_acc += n * (k == hi ? boost::math::cdf(complement(law, static_cast<double>(hi - 1)))
                          : boost::math::pdf(law, static_cast<double>(k)));
    if (k == hi) {
      for (auto it = counts.lower_bound(hi); it != counts.end(); ++it) o_acc += it->second;
    } else if (auto it = counts.find(k); it != counts.end()) {
      o_acc += it->second;
    }
    if (e_acc >= 5.0) {
      expected.push_back(e_acc);
      observed.push_back(o_acc);
      e_acc = o_acc = 0;
    }
  }
  if (e_acc > 0 && !expected.empty()) {
    expected.back() += e_acc;
    observed.back() += o_acc;
  }
  double chi2 = 0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    chi2 += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  if (expected.size() < 2) return 1.0;
  return boost::math::cdf(
      complement(boost::math::chi_squared(static_cast<double>(expected.size() - 1)), chi2));
}

Outcome ac10(const Context& ctx) {
  Outcome o;
  const ReactionNetwork& bd = birth_death();
  const ParameterSet& p = bd.default_parameters();
  const std::uint64_t seed = ctx.seed;

  {  // Poisson bridge: end and midpoint laws of a leap from z = 100, tau = 0.5.
    bool ok = true;
    std::string info;
    for (std::uint64_t eta : {1u, 2u, 5u}) {
      LeapFrame frame;
      Moments end, mid;
      std::vector<double> ends;
      for (int i = 0; i < 100000; ++i) {
        RngStream s = sample_stream(seed + 100 + eta, static_cast<std::uint64_t>(i));
        leap_with_interpolation(bd, State{100}, 0.0, 0.5, eta, p, s, frame);
        end.add(static_cast<double>(frame.end[0]));
        ends.push_back(static_cast<double>(frame.end[0]));
        mid.add(static_cast<double>(frame.z_hat[0][0]));
      }
      double m4 = 0;
      for (double e : ends) m4 += std::pow(e - end.mean(), 4);
      m4 /= static_cast<double>(ends.size());
      const double var = sample_variance(end);
      const double var_se = std::sqrt((m4 - var * var) / static_cast<double>(ends.size()));
      ok = ok && std::fabs(end.mean() - 100.0) < 3 * standard_error(end) &&
           std::fabs(var - 10.0) < 3 * var_se && std::fabs(mid.mean() - 100.0) < 3 * standard_error(mid);
      info += (info.empty() ? "" : "/") + num(var, 4);
    }
    o.require(ok, "bridge end variance (eta 1/2/5) " + info + " vs 10");
  }
  {  // Poisson sampler goodness of fit.
    bool ok = true;
    std::string info;
    for (double mean : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
      const double pv = poisson_pvalue(mean, 100000, seed + 200);
      ok = ok && pv > 0.001;
      info += (info.empty() ? "" : " ") + num(pv, 2);
    }
    o.require(ok, "Poisson chi-square p-values " + info);
  }
  {  // Coupled-difference leaf oracle.
    const double oracle = std::exp(-0.1 * 6.0);
    Moments exact, tau;
    for (int i = 0; i < 100000; ++i) {
      RngStream a = sample_stream(seed + 300, static_cast<std::uint64_t>(i));
      exact.add(coupled_difference_exact(bd, {10}, {11}, 4.0, 10.0, p, a));
      RngStream b = sample_stream(seed + 301, static_cast<std::uint64_t>(i));
      tau.add(coupled_difference_tau(bd, {10}, {11}, 4.0, 10.0, p, TauLeapConfig{0.5}, b));
    }
    o.require(std::fabs(exact.mean() - oracle) < 3 * standard_error(exact),
              "exact leaf " + num(exact.mean(), 4) + " vs " + num(oracle, 4));
    o.require(std::fabs(tau.mean() - oracle) < 3 * standard_error(tau) + 0.02 * oracle,
              "tau leaf " + num(tau.mean(), 4) + " vs " + num(oracle, 4));
  }
  {  // Split-coupling absorption.
    KernelCounters c;
    int met = 0;
    for (int i = 0; i < 20000; ++i) {
      RngStream s = sample_stream(seed + 400, static_cast<std::uint64_t>(i));
      auto [a, b] = simulate_split_pair_exact(bd, {10}, {11}, 0.0, 10.0, p, p, s, false, &c);
      met += a == b;
    }
    o.require(c.absorption_violations == 0 && met > 0,
              "coincident paths separated " + std::to_string(c.absorption_violations) + " times (" +
                  std::to_string(met) + " pairs met)");
    FdConfig on, off;
    off.early_exit = false;
    const auto theta2 = bd.parameter_index("theta2");
    const SensitivityEstimate e1 = estimate_sensitivity_fd(bd, {0}, 5.0, p, theta2, on, 20000, {seed, ctx.workers});
    const SensitivityEstimate e2 = estimate_sensitivity_fd(bd, {0}, 5.0, p, theta2, off, 20000, {seed, ctx.workers});
    o.require(std::fabs(e1.mean - e2.mean) <= 3 * std::hypot(e1.stddev, e2.stddev),
              "CFD early exit on/off means " + num(e1.mean, 6) + "/" + num(e2.mean, 6));
  }
  {  // h = 0 gives identical coupled paths.
    bool ok = true;
    for (int i = 0; i < 2000 && ok; ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      RngStream s1 = sample_stream(seed + 500, idx), s2 = s1;
      ok = ok && [](auto pr) { return pr.first == pr.second; }(simulate_cfd_pair_exact(bd, {0}, 5.0, p, p, s1));
      ok = ok && [](auto pr) { return pr.first == pr.second; }(simulate_cfd_pair_tau(bd, {0}, 5.0, p, p, {0.5}, s2));
      ok = ok && [](auto pr) { return pr.first == pr.second; }(
                     simulate_crp_pair_exact(bd, {0}, 5.0, p, p, sample_stream(seed + 501, idx)));
      ok = ok && [](auto pr) { return pr.first == pr.second; }(
                     simulate_crp_pair_tau(bd, {0}, 5.0, p, p, {0.5}, sample_stream(seed + 502, idx)));
    }
    o.require(ok, "h=0 pairs identical under all four couplings");
  }
  {  // Seed determinism independent of worker count.
    IpaConfig cfg;
    cfg.tau.tau_max = 0.5;
    cfg.n0 = 200;
    const auto theta2 = bd.parameter_index("theta2");
    const IpaEstimate a = estimate_sensitivity_ipa(bd, {0}, 5.0, p, theta2, cfg, 3000, {seed, 1});
    const IpaEstimate b = estimate_sensitivity_ipa(bd, {0}, 5.0, p, theta2, cfg, 3000, {seed, 4});
    o.require(a.estimate.mean == b.estimate.mean && a.estimate.stddev == b.estimate.stddev,
              "1 vs 4 workers bitwise equal");
  }
  {  // No negative states on the nonlinear models.
    bool ok = true;
    for (const char* file : {"toggle_switch.model", "repressilator.model"}) {
      const ReactionNetwork net = bundled_model(file);
      for (int i = 0; i < 100; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        RngStream s = sample_stream(seed + 600, idx), t = s;
        for (auto v : simulate_tauleap(net, net.initial_state(), 10.0, net.default_parameters(),
                                       TauLeapConfig{0.1}, s))
          ok = ok && v >= 0;
        for (auto v : simulate_ssa(net, net.initial_state(), 1.0, net.default_parameters(), t)) ok = ok && v >= 0;
      }
    }
    o.require(ok, "no negative components");
  }
  {  // Symbolic derivatives against central differences.
    const ReactionNetwork rep = bundled_model("repressilator.model");
    const ReactionNetwork tog = bundled_model("toggle_switch.model");
    RngStream s(seed + 700);
    int bad = 0, total = 0;
    for (const ReactionNetwork* net : {&rep, &tog}) {
      for (int i = 0; i < 100; ++i) {
        State x(net->species_count());
        for (auto& v : x) v = 1 + static_cast<std::int64_t>(s.next_uniform() * 60);
        ParameterSet q = net->default_parameters();
        const std::size_t j = static_cast<std::size_t>(s.next_uniform() * static_cast<double>(q.size()));
        q = q.with(j, q[j] * (0.5 + s.next_uniform()));
        const double h = 1e-6 * std::max(1.0, std::fabs(q[j]));
        for (std::size_t k = 0; k < net->reaction_count(); ++k) {
          const double sym = net->propensity_derivative_value(k, j, x, q);
          const double fd = (net->propensity(k, x, q.with(j, q[j] + h)) -
                             net->propensity(k, x, q.with(j, q[j] - h))) / (2 * h);
          const double scale = std::max({std::fabs(sym), std::fabs(fd), 1e-8});
          bad += std::fabs(sym - fd) / scale >= 1e-4;
          ++total;
        }
      }
    }
    o.require(bad == 0, "derivative mismatches " + std::to_string(bad) + "/" + std::to_string(total));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taupath acceptance checks"};
  Context ctx;
  std::string only;
  app.add_flag("--extended", ctx.extended, "Run the long variants of criteria 7 and 8");
  app.add_option("--only", only, "Comma-separated criterion numbers");
  app.add_option("--workers", ctx.workers, "Worker threads (0 = all cores)");
  app.add_option("--seed", ctx.seed, "Base seed");
  CLI11_PARSE(app, argc, argv);

  std::set<int> selected;
  if (!only.empty()) {
    std::stringstream in(only);
    for (std::string item; std::getline(in, item, ',');) selected.insert(std::stoi(item));
  }

  const std::vector<std::pair<std::string, std::function<Outcome(const Context&)>>> criteria = {
      {"birth-death eIPA unbiased at T=5 and T=10", ac1},
      {"birth-death tauIPA RE <= 2% at tau_max=0.5", ac2},
      {"eCFD and eCRP match the centered difference", ac3},
      {"tauCFD and tauCRP compound bias", ac4},
      {"auxiliary budget tracks M0", ac5},
      {"tauIPA error shrinks with tau_max", ac6},
      {"toggle switch eIPA gamma", ac7},
      {"repressilator runs under every method", ac8},
      {"eIPA RSD scales like 1/sqrt(V)", ac9},
      {"property suites", ac10},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      out.require(false, std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !out.pass;
    std::printf("AC%-2d %s  %s: %s (%.1fs)\n", id, out.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
