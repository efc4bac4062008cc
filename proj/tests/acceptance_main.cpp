// Release gate: one numbered check per line, exit status = number of failures.
// Every check restates its expected values independently of the library code.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "noisygd/accountant.hpp"
#include "noisygd/cli.hpp"
#include "noisygd/oracle.hpp"
#include "noisygd/planner.hpp"
#include "noisygd/rng.hpp"
#include "noisygd/trainer.hpp"

using namespace noisygd;
namespace acc = noisygd::accountant;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the first failure so the summary line can explain itself.
struct Gate {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& why) {
    if (!condition && ok) {
      ok = false;
      detail = why;
    }
  }
};

void report(int id, const char* label, const Gate& gate, double seconds) {
  std::printf("%s  criterion %d: %s (%.2f s)%s%s\n", gate.ok ? "PASS" : "FAIL", id,
              label, seconds, gate.ok ? "" : " -- ", gate.detail.c_str());
}

std::string fmt(double v) { return cli::format17(v); }

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_unit();
}

acc::AccountantInput caption_input() {
  acc::AccountantInput in;
  in.loss = acc::LossClass{1.0, 4.0, std::nullopt, 4.0};
  in.n = 5000;
  in.eta = 0.02;
  in.sigma2 = 0.02 * 0.02;
  in.steps = 100;
  in.alpha = 10.0;
  return in;
}

// Ten fixed records with d=2, n=10 for the simulation cross-check.
trainer::Dataset planted_dataset() {
  std::vector<std::vector<double>> recs;
  for (int i = 0; i < 10; ++i)
    recs.push_back({0.1 * (i + 1), 0.25 - 0.05 * i});
  return trainer::Dataset::from_records(std::move(recs));
}

// Picks the epsilon column of the row starting with the given prefix.
double csv_value_after(const std::string& text, const std::string& prefix,
                       bool* found) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) {
      *found = true;
      return std::strtod(line.c_str() + prefix.size(), nullptr);
    }
  }
  *found = false;
  return 0.0;
}

// --- 1. figure curve values match the printed closed forms -----------------

bool criterion1() {
  const auto t0 = Clock::now();
  Gate gate;

  const char* argv[] = {"noisygd", "figure1"};
  std::ostringstream out, err;
  const int rc = cli::run(2, argv, out, err);
  gate.require(rc == 0, "figure1 exited with code " + std::to_string(rc));

  const std::string text = out.str();
  bool found = false;
  const double converging = csv_value_after(text, "500,converging,30,1,", &found);
  gate.require(found, "no converging row at (K=500, alpha=30, lambda=1)");
  const double expected = 0.048 * -std::expm1(-5.0);
  gate.require(std::abs(converging - expected) <= 1e-9,
               "converging value " + fmt(converging) + " vs " + fmt(expected));

  const double asymptote = 30.0 * 16.0 / (1.0 * (0.02 * 0.02) * 5000.0 * 5000.0);
  gate.require(std::abs(asymptote - 0.048) <= 1e-12,
               "asymptote " + fmt(asymptote) + " vs 0.048");

  const double composition = csv_value_after(text, "100,composition,30,0,", &found);
  gate.require(found, "no composition row at (K=100, alpha=30)");
  gate.require(std::abs(composition - 0.024) <= 1e-12,
               "composition value " + fmt(composition) + " vs 0.024");

  const double elapsed = seconds_since(t0);
  gate.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s exceeds 1 s");
  report(1, "figure curves reproduce the caption formulas", gate, elapsed);
  return gate.ok;
}

// --- 2. lower <= exact <= upper across the whole grid -----------------------

bool criterion2() {
  const auto t0 = Clock::now();
  Gate gate;

  acc::AccountantInput in;
  in.loss = acc::LossClass{1.0, 1.0, std::nullopt, 4.0};
  in.n = 5000;
  in.sigma2 = 0.02 * 0.02;
  const oracle::NeighborPair pair = oracle::worst_case_pair(5000, 2, 4.0);

  for (double eta : {0.01, 0.02, 0.1, 0.5}) {
    in.eta = eta;
    for (double alpha : {10.0, 20.0, 30.0}) {
      in.alpha = alpha;
      for (std::int64_t k = 1; k <= 1000; ++k) {
        in.steps = k;
        const double lower = acc::lower_bound(in);
        const double exact = oracle::exact_divergence(pair, eta, in.sigma2, k, alpha);
        const double upper = acc::squared_loss_upper_bound(in);
        gate.require(lower <= exact + 1e-12 && exact <= upper + 1e-12,
                     "sandwich broken at eta=" + fmt(eta) + " alpha=" + fmt(alpha) +
                         " K=" + std::to_string(k));
      }
      // Saturation: once (1-eta)^K has fully decayed the ratio is 2 - eta.
      const std::int64_t k_big =
          static_cast<std::int64_t>(std::ceil(std::log(1e-12) / std::log1p(-eta)));
      in.steps = k_big;
      const double ratio =
          oracle::exact_divergence(pair, eta, in.sigma2, k_big, alpha) /
          acc::lower_bound(in);
      gate.require(std::abs(ratio - (2.0 - eta)) <= 1e-6,
                   "saturation ratio " + fmt(ratio) + " at eta=" + fmt(eta));
    }
  }

  const double elapsed = seconds_since(t0);
  gate.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s exceeds 5 s");
  report(2, "exact divergence sits between the closed-form bounds", gate, elapsed);
  return gate.ok;
}

// --- 3. recursion at gamma = 1/2 equals the closed form ---------------------

bool criterion3() {
  const auto t0 = Clock::now();
  Gate gate;
  Rng rng(301);

  for (int trial = 0; trial < 50; ++trial) {
    acc::AccountantInput in;
    in.loss = acc::LossClass{1.0, 1.0, std::nullopt, uniform(rng, 0.1, 10.0)};
    in.n = static_cast<std::int64_t>(1 + rng.next_u64() % 100000);
    in.eta = std::pow(10.0, uniform(rng, -3.0, -0.3));
    in.sigma2 = std::pow(10.0, uniform(rng, -3.0, 0.0));
    in.alpha = uniform(rng, 1.5, 100.0);
    in.steps = static_cast<std::int64_t>(1 + rng.next_u64() % 100000);
    const double lsi_c = std::pow(10.0, uniform(rng, -1.0, 1.7));

    const acc::RdpCurve curve = acc::rdp_recursion(in, lsi_c, 0.5);
    acc::AccountantInput probe = in;
    for (std::int64_t k : {std::int64_t{0}, std::int64_t{1}, in.steps / 2, in.steps}) {
      probe.steps = k;
      const double closed = acc::rdp_under_lsi(probe, lsi_c);
      const double recursed = curve.values[static_cast<std::size_t>(k)];
      gate.require(std::abs(recursed - closed) <=
                       1e-9 * std::max(std::abs(closed), 1e-300),
                   "trial " + std::to_string(trial) + " k=" + std::to_string(k) +
                       ": " + fmt(recursed) + " vs " + fmt(closed));
    }
  }

  const double elapsed = seconds_since(t0);
  gate.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s exceeds 5 s");
  report(3, "divergence recursion matches its closed form", gate, elapsed);
  return gate.ok;
}

// --- 4. specialization identities -------------------------------------------

bool criterion4() {
  const auto t0 = Clock::now();
  Gate gate;
  Rng rng(401);

  for (int trial = 0; trial < 1000; ++trial) {
    acc::AccountantInput in;
    const double lambda = uniform(rng, 0.05, 5.0);
    const double beta = lambda * uniform(rng, 1.0, 10.0);
    in.loss = acc::LossClass{lambda, beta, std::nullopt, uniform(rng, 0.1, 10.0)};
    in.n = static_cast<std::int64_t>(1 + rng.next_u64() % 100000);
    in.eta = 0.999 * std::min(1.0 / beta, 1.0) * uniform(rng, 1e-4, 1.0);
    in.sigma2 = std::pow(10.0, uniform(rng, -4.0, 0.0));
    in.steps = static_cast<std::int64_t>(rng.next_u64() % 20000);
    in.alpha = uniform(rng, 1.01, 64.0);

    const double c_convex =
        acc::lsi_constant(in.loss, in.sigma2, in.eta, acc::LsiVariant::strongly_convex);
    gate.require(rel_close(acc::rdp_under_lsi(in, c_convex),
                           acc::converging_bound(in), 1e-12),
                 "strongly-convex identity broke at trial " + std::to_string(trial));

    const double c_squared =
        acc::lsi_constant(in.loss, in.sigma2, in.eta, acc::LsiVariant::squared_loss);
    gate.require(rel_close(acc::rdp_under_lsi(in, c_squared),
                           acc::squared_loss_upper_bound(in), 1e-12),
                 "squared-loss identity broke at trial " + std::to_string(trial));
  }

  const double elapsed = seconds_since(t0);
  report(4, "log-Sobolev specializations equal the named bounds", gate, elapsed);
  return gate.ok;
}

// --- 5. Monte-Carlo moments against the exact Gaussian law ------------------

bool criterion5() {
  const auto t0 = Clock::now();
  Gate gate;

  const trainer::Dataset ds = planted_dataset();
  trainer::SquaredLoss loss;
  trainer::TrainConfig config;
  config.eta = 0.1;
  config.sigma2 = 0.5 * 0.5;
  config.steps = 50;
  config.seed = 20260814;
  const std::int64_t reps = 10000;

  const std::vector<double> theta0{0.0, 0.0};
  const oracle::GaussianIsotropic law =
      oracle::gaussian_state(ds, config.eta, config.sigma2, config.steps, theta0);
  const trainer::MonteCarloSummary mc = trainer::monte_carlo_runs(ds, loss, config, reps);

  const double se = std::sqrt(law.var / static_cast<double>(reps));
  for (std::size_t j = 0; j < 2; ++j) {
    gate.require(std::abs(mc.mean[j] - law.mean[j]) <= 3.0 * se,
                 "mean[" + std::to_string(j) + "] = " + fmt(mc.mean[j]) +
                     " vs oracle " + fmt(law.mean[j]) + " (3 SE = " + fmt(3.0 * se) + ")");
    gate.require(std::abs(mc.variance[j] - law.var) <= 0.05 * law.var,
                 "variance[" + std::to_string(j) + "] = " + fmt(mc.variance[j]) +
                     " vs oracle " + fmt(law.var));
  }

  const double elapsed = seconds_since(t0);
  gate.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s exceeds 30 s");
  report(5, "simulated moments match the exact state law", gate, elapsed);
  return gate.ok;
}

// --- 6. planner output honours its own budget --------------------------------

bool criterion6() {
  const auto t0 = Clock::now();
  Gate gate;
  Rng rng(601);

  for (int trial = 0; trial < 100; ++trial) {
    const double lambda = uniform(rng, 0.1, 5.0);
    const double beta = lambda * uniform(rng, 1.0, 10.0);
    const double lipschitz = uniform(rng, 0.1, 10.0);
    const std::int64_t n = static_cast<std::int64_t>(100 + rng.next_u64() % 100000);
    const std::int64_t d = static_cast<std::int64_t>(1 + rng.next_u64() % 500);
    const double alpha = uniform(rng, 1.5, 50.0);
    double eps_prime = std::pow(10.0, uniform(rng, -2.0, 1.0));
    // Stay clear of the feasibility boundary so K* is well defined.
    while (!(static_cast<double>(n) * static_cast<double>(n) * eps_prime >
             1.01 * alpha * static_cast<double>(d)))
      eps_prime = std::pow(10.0, uniform(rng, -2.0, 1.0));

    planner::PlanRequest req;
    req.loss = acc::LossClass{lambda, beta, lipschitz, 2.0 * lipschitz};
    req.n = n;
    req.d = d;
    req.budget = acc::RdpPoint{alpha, eps_prime};
    const planner::PlanResult res = planner::plan_rdp(req);
    gate.require(res.k_star >= 1, "k_star < 1 at trial " + std::to_string(trial));

    acc::AccountantInput in;
    in.loss = acc::LossClass{lambda, beta, std::nullopt, 2.0 * lipschitz};
    in.n = n;
    in.eta = res.eta;
    in.sigma2 = res.sigma2;
    in.steps = res.k_star;
    in.alpha = alpha;
    const double spent = acc::converging_bound(in);
    gate.require(spent <= eps_prime * (1.0 + 1e-12),
                 "plan exceeds its budget at trial " + std::to_string(trial) + ": " +
                     fmt(spent) + " > " + fmt(eps_prime));
  }

  planner::PlanRequest worked;
  worked.loss = acc::LossClass{1.0, 1.0, 1.0, 2.0};
  worked.n = 1000;
  worked.d = 10;
  worked.budget = acc::RdpPoint{2.0, 1.0};
  const planner::PlanResult res = planner::plan_rdp(worked);
  gate.require(res.sigma2 == 8e-6, "worked example sigma2 = " + fmt(res.sigma2));
  gate.require(res.k_star == 22,
               "worked example K* = " + std::to_string(res.k_star));

  const double elapsed = seconds_since(t0);
  report(6, "planned hyperparameters stay within the stated budget", gate, elapsed);
  return gate.ok;
}

// --- 7. monotonicity of every bound in every argument ------------------------

bool criterion7() {
  const auto t0 = Clock::now();
  Gate gate;

  struct Named {
    const char* name;
    double (*op)(const acc::AccountantInput&);
  };
  const Named bounds[] = {{"composition", acc::composition_bound},
                          {"converging", acc::converging_bound},
                          {"squared-upper", acc::squared_loss_upper_bound},
                          {"lower", acc::lower_bound}};

  const auto check_direction = [&gate](const char* bound, const char* arg,
                                       const std::vector<double>& values,
                                       bool nondecreasing) {
    for (std::size_t i = 1; i < values.size(); ++i) {
      const double slack =
          1e-14 * std::max(std::abs(values[i - 1]), std::abs(values[i]));
      const bool ok = nondecreasing ? values[i] >= values[i - 1] - slack
                                    : values[i] <= values[i - 1] + slack;
      gate.require(ok, std::string(bound) + " not " +
                           (nondecreasing ? "nondecreasing" : "nonincreasing") +
                           " in " + arg);
    }
  };

  for (const Named& bound : bounds) {
    std::vector<double> values;

    values.clear();
    for (std::int64_t k : {0, 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000}) {
      acc::AccountantInput in = caption_input();
      in.steps = k;
      values.push_back(bound.op(in));
    }
    check_direction(bound.name, "K", values, true);

    values.clear();
    for (double alpha : {1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 30.0, 50.0, 100.0}) {
      acc::AccountantInput in = caption_input();
      in.alpha = alpha;
      values.push_back(bound.op(in));
    }
    check_direction(bound.name, "alpha", values, true);

    values.clear();
    for (double sg : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      acc::AccountantInput in = caption_input();
      in.loss.grad_sensitivity = sg;
      values.push_back(bound.op(in));
    }
    check_direction(bound.name, "S_g", values, true);

    values.clear();
    for (std::int64_t n : {10, 100, 1000, 5000, 10000, 100000}) {
      acc::AccountantInput in = caption_input();
      in.n = n;
      values.push_back(bound.op(in));
    }
    check_direction(bound.name, "n", values, false);

    values.clear();
    for (double sigma2 : {1e-5, 1e-4, 4e-4, 1e-3, 1e-2, 0.1, 1.0}) {
      acc::AccountantInput in = caption_input();
      in.sigma2 = sigma2;
      values.push_back(bound.op(in));
    }
    check_direction(bound.name, "sigma2", values, false);
  }

  const double elapsed = seconds_since(t0);
  report(7, "bounds are monotone in K, alpha, S_g and antitone in n, sigma2", gate,
         elapsed);
  return gate.ok;
}

// --- 8. conversion identities -------------------------------------------------

bool criterion8() {
  const auto t0 = Clock::now();
  Gate gate;

  const acc::DpParams dp = acc::rdp_to_dp(acc::RdpPoint{2.0, 1.0}, std::exp(-1.0));
  gate.require(std::abs(dp.eps - 2.0) <= 1e-12, "eps_dp = " + fmt(dp.eps));
  gate.require(dp.delta == std::exp(-1.0), "delta = " + fmt(dp.delta));

  const acc::RdpPoint derived =
      planner::dp_budget_to_rdp(acc::DpParams{1.0, std::exp(-2.0)});
  gate.require(std::abs(derived.alpha - 5.0) <= 1e-12,
               "derived alpha = " + fmt(derived.alpha));
  gate.require(derived.epsilon == 0.5, "derived eps' = " + fmt(derived.epsilon));

  const double elapsed = seconds_since(t0);
  report(8, "privacy-parameter conversions hit their closed forms", gate, elapsed);
  return gate.ok;
}

}  // namespace

int main() {
  int failures = 0;
  failures += !criterion1();
  failures += !criterion2();
  failures += !criterion3();
  failures += !criterion4();
  failures += !criterion5();
  failures += !criterion6();
  failures += !criterion7();
  failures += !criterion8();
  if (failures == 0)
    std::printf("all 8 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
