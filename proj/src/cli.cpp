#include "noisygd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noisygd/accountant.hpp"
#include "noisygd/mathutil.hpp"
#include "noisygd/oracle.hpp"
#include "noisygd/planner.hpp"
#include "noisygd/trainer.hpp"

namespace noisygd::cli {

namespace {

namespace acc = noisygd::accountant;

std::string join17(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format17(v[i]);
  }
  return s;
}

// Whole-payload write: commands finish all computation before emitting, so a
// thrown precondition never leaves a partial file behind.
void emit(const std::string& path, std::ostream& fallback, const std::string& payload) {
  if (path.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open output file: " + path);
  file << payload;
  file.flush();
  if (!file) throw IoError("failed while writing output file: " + path);
}

// ---------------------------------------------------------------- account --

struct AccountFlags {
  std::string method = "best";
  double alpha = 10.0;
  double lambda = 1.0;
  double beta = 0.0;  // 0 means "same as lambda"
  double sg = 4.0;
  double sigma = 0.02;
  std::int64_t n = 5000;
  double eta = 0.02;
  std::int64_t steps = 100;
  double gamma = 0.5;
  double lsi_c = 0.0;  // 0 means lambda / (2 sigma^2)
  std::string output;
};

int cmd_account(const AccountFlags& f, std::ostream& fallback) {
  acc::AccountantInput in;
  in.loss.lambda = f.lambda;
  in.loss.beta = f.beta > 0.0 ? f.beta : f.lambda;
  in.loss.grad_sensitivity = f.sg;
  in.n = f.n;
  in.eta = f.eta;
  in.sigma2 = f.sigma * f.sigma;
  in.steps = f.steps;
  in.alpha = f.alpha;
  const double lsi_c = f.lsi_c > 0.0 ? f.lsi_c : in.loss.lambda / (2.0 * in.sigma2);

  std::vector<double> values(static_cast<std::size_t>(f.steps) + 1);
  if (f.method == "recursion") {
    values = acc::rdp_recursion(in, lsi_c, f.gamma).values;
  } else {
    double (*op)(const acc::AccountantInput&) = nullptr;
    if (f.method == "converging") op = acc::converging_bound;
    else if (f.method == "composition") op = acc::composition_bound;
    else if (f.method == "best") op = acc::best_bound;
    else if (f.method == "squared-upper") op = acc::squared_loss_upper_bound;
    else if (f.method == "lower") op = acc::lower_bound;
    else throw DomainError("unknown method: " + f.method);
    for (std::int64_t k = 0; k <= f.steps; ++k) {
      in.steps = k;
      values[static_cast<std::size_t>(k)] = op(in);
    }
  }

  std::ostringstream csv;
  csv << "# command=account method=" << f.method << "\n";
  csv << "# alpha=" << format17(f.alpha) << " lambda=" << format17(in.loss.lambda)
      << " beta=" << format17(in.loss.beta) << " sg=" << format17(f.sg)
      << " sigma=" << format17(f.sigma) << " n=" << f.n << " eta=" << format17(f.eta)
      << " K=" << f.steps;
  if (f.method == "recursion")
    csv << " gamma=" << format17(f.gamma) << " lsi_c=" << format17(lsi_c);
  csv << "\n";
  csv << "k,epsilon\n";
  for (std::int64_t k = 0; k <= f.steps; ++k)
    csv << k << "," << format17(values[static_cast<std::size_t>(k)]) << "\n";
  emit(f.output, fallback, csv.str());
  return kExitOk;
}

// ------------------------------------------------------------------- plan --

struct PlanFlags {
  double alpha = 0.0;
  double eps_prime = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double lipschitz = 1.0;
  double lambda = 1.0;
  double beta = 0.0;
  std::int64_t n = 1000;
  std::int64_t d = 10;
  double radius = 0.0;  // 0 means default 2L/lambda
  std::string output;
  bool renyi_mode = false;
};

int cmd_plan(const PlanFlags& f, std::ostream& fallback) {
  planner::PlanRequest req;
  req.loss.lambda = f.lambda;
  req.loss.beta = f.beta > 0.0 ? f.beta : f.lambda;
  req.loss.lipschitz = f.lipschitz;
  req.loss.grad_sensitivity = 2.0 * f.lipschitz;
  req.n = f.n;
  req.d = f.d;
  if (f.radius > 0.0) req.set_radius = f.radius;

  planner::PlanResult res;
  acc::RdpPoint derived{};
  if (f.renyi_mode) {
    req.budget = acc::RdpPoint{f.alpha, f.eps_prime};
    res = planner::plan_rdp(req);
  } else {
    const acc::DpParams budget{f.eps, f.delta};
    req.budget = budget;
    res = planner::plan_dp(req);
    derived = planner::dp_budget_to_rdp(budget);
  }

  std::ostringstream csv;
  csv << "# command=plan budget=" << (f.renyi_mode ? "renyi" : "dp") << "\n";
  csv << "# ";
  if (f.renyi_mode)
    csv << "alpha=" << format17(f.alpha) << " eps_prime=" << format17(f.eps_prime);
  else
    csv << "eps=" << format17(f.eps) << " delta=" << format17(f.delta);
  csv << " L=" << format17(f.lipschitz) << " lambda=" << format17(req.loss.lambda)
      << " beta=" << format17(req.loss.beta) << " n=" << f.n << " d=" << f.d << "\n";
  csv << "key,value\n";
  csv << "sigma2," << format17(res.sigma2) << "\n";
  csv << "k_star," << res.k_star << "\n";
  csv << "eta," << format17(res.eta) << "\n";
  csv << "predicted_risk," << format17(res.predicted_risk) << "\n";
  csv << "floor," << format17(res.floor) << "\n";
  if (!f.renyi_mode) {
    csv << "derived_alpha," << format17(derived.alpha) << "\n";
    csv << "derived_eps_prime," << format17(derived.epsilon) << "\n";
  }
  emit(f.output, fallback, csv.str());
  return kExitOk;
}

// ------------------------------------------------------------------ train --

struct TrainFlags {
  std::string data;
  std::string loss = "squared";
  double mu = 1.0;
  double eta = 0.1;
  double sigma = 0.5;
  std::int64_t steps = 50;
  std::uint64_t seed = 1;
  double project_radius = 0.0;  // 0 means unconstrained
  std::string theta0 = "zero";
  std::int64_t runs = 0;  // 0 means a single run
  std::string output;
};

int cmd_train(const TrainFlags& f, std::ostream& fallback) {
  const trainer::Dataset data = trainer::load_dataset(f.data);

  std::unique_ptr<trainer::LossModel> loss;
  if (f.loss == "squared") loss = std::make_unique<trainer::SquaredLoss>();
  else if (f.loss == "logistic") loss = std::make_unique<trainer::RidgeLogisticLoss>(f.mu);
  else throw DomainError("unknown loss: " + f.loss);

  trainer::TrainConfig config;
  config.eta = f.eta;
  config.sigma2 = f.sigma * f.sigma;
  config.steps = f.steps;
  config.seed = f.seed;
  if (f.project_radius > 0.0)
    config.projection = trainer::ProjectionSpec::ball(f.project_radius);
  if (f.theta0 == "zero") config.theta0_mode = trainer::Theta0Mode::zero;
  else if (f.theta0 == "gaussian")
    config.theta0_mode = trainer::Theta0Mode::projected_gaussian;
  else throw DomainError("unknown theta0 mode: " + f.theta0);

  std::ostringstream csv;
  csv << "# command=train loss=" << f.loss << " data=" << f.data << "\n";
  csv << "# eta=" << format17(f.eta) << " sigma=" << format17(f.sigma)
      << " K=" << f.steps << " seed=" << f.seed << " theta0=" << f.theta0
      << " project_radius=" << format17(f.project_radius);
  if (f.loss == "logistic") csv << " mu=" << format17(f.mu);
  if (f.runs != 0) csv << " runs=" << f.runs;
  csv << "\n";
  if (f.runs != 0) {
    const trainer::MonteCarloSummary mc =
        trainer::monte_carlo_runs(data, *loss, config, f.runs);
    csv << "i,mean,variance\n";
    for (std::size_t i = 0; i < mc.mean.size(); ++i)
      csv << i << "," << format17(mc.mean[i]) << "," << format17(mc.variance[i]) << "\n";
  } else {
    const std::vector<double> theta = trainer::run_noisy_gd(data, *loss, config);
    csv << "i,theta\n";
    for (std::size_t i = 0; i < theta.size(); ++i)
      csv << i << "," << format17(theta[i]) << "\n";
  }
  emit(f.output, fallback, csv.str());
  return kExitOk;
}

// -------------------------------------------------------------- tightness --

struct TightnessFlags {
  double alpha = 10.0;
  double sg = 4.0;
  double sigma = 0.02;
  double eta = 0.02;
  std::int64_t n = 5000;
  std::int64_t d = 2;
  std::int64_t steps = 300;
  std::string output;
};

int cmd_tightness(const TightnessFlags& f, std::ostream& fallback) {
  acc::AccountantInput in;
  in.loss = acc::LossClass{1.0, 1.0, std::nullopt, f.sg};
  in.n = f.n;
  in.eta = f.eta;
  in.sigma2 = f.sigma * f.sigma;
  in.alpha = f.alpha;

  const oracle::NeighborPair pair = oracle::worst_case_pair(f.n, f.d, f.sg);

  bool sandwich_ok = true;
  std::vector<double> lower(static_cast<std::size_t>(f.steps) + 1);
  std::vector<double> exact(static_cast<std::size_t>(f.steps) + 1);
  std::vector<double> upper(static_cast<std::size_t>(f.steps) + 1);
  for (std::int64_t k = 0; k <= f.steps; ++k) {
    in.steps = k;
    const std::size_t i = static_cast<std::size_t>(k);
    lower[i] = acc::lower_bound(in);
    exact[i] = oracle::exact_divergence(pair, f.eta, in.sigma2, k, f.alpha);
    upper[i] = acc::squared_loss_upper_bound(in);
    if (!(lower[i] <= exact[i] + 1e-12 && exact[i] <= upper[i] + 1e-12))
      sandwich_ok = false;
  }

  // Ratio check at a horizon where the geometric factor has fully decayed.
  const std::int64_t k_big = static_cast<std::int64_t>(
      std::ceil(std::log(1e-12) / std::log1p(-f.eta)));
  in.steps = k_big;
  const double ratio =
      oracle::exact_divergence(pair, f.eta, in.sigma2, k_big, f.alpha) /
      acc::lower_bound(in);
  const bool ratio_ok = std::abs(ratio - (2.0 - f.eta)) <= 1e-3;
  const bool pass = sandwich_ok && ratio_ok;

  std::ostringstream csv;
  csv << "# command=tightness\n";
  csv << "# alpha=" << format17(f.alpha) << " sg=" << format17(f.sg)
      << " sigma=" << format17(f.sigma) << " eta=" << format17(f.eta)
      << " n=" << f.n << " d=" << f.d << " K=" << f.steps << "\n";
  csv << "K,lower,exact,upper\n";
  for (std::int64_t k = 0; k <= f.steps; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    csv << k << "," << format17(lower[i]) << "," << format17(exact[i]) << ","
        << format17(upper[i]) << "\n";
  }
  csv << "# large_k=" << k_big << " exact_over_lower=" << format17(ratio)
      << " target=" << format17(2.0 - f.eta) << "\n";
  csv << "# verdict " << (pass ? "PASS" : "FAIL") << "\n";
  emit(f.output, fallback, csv.str());
  return pass ? kExitOk : kExitVerdict;
}

// -------------------------------------------------------------- figure1/2 --

struct Figure1Flags {
  std::vector<double> alphas{10.0, 20.0, 30.0};
  std::vector<double> lambdas{1.0, 2.0, 4.0};
  double beta = 4.0;
  double sg = 4.0;
  std::int64_t n = 5000;
  double eta = 0.02;
  double sigma = 0.02;
  std::int64_t kmax = 500;
  std::string output;
};

int cmd_figure1(const Figure1Flags& f, std::ostream& fallback) {
  acc::AccountantInput in;
  in.loss.beta = f.beta;
  in.loss.grad_sensitivity = f.sg;
  in.n = f.n;
  in.eta = f.eta;
  in.sigma2 = f.sigma * f.sigma;

  std::ostringstream csv;
  csv << "# command=figure1\n";
  csv << "# alpha=" << join17(f.alphas) << " lambda=" << join17(f.lambdas)
      << " beta=" << format17(f.beta) << " sg=" << format17(f.sg) << " n=" << f.n
      << " eta=" << format17(f.eta) << " sigma=" << format17(f.sigma)
      << " kmax=" << f.kmax << "\n";
  csv << "# composition rows do not depend on lambda; their lambda column is 0\n";
  csv << "K,method,alpha,lambda,epsilon\n";
  for (double alpha : f.alphas) {
    in.alpha = alpha;
    for (double lambda : f.lambdas) {
      in.loss.lambda = lambda;
      for (std::int64_t k = 0; k <= f.kmax; ++k) {
        in.steps = k;
        csv << k << ",converging," << format17(alpha) << "," << format17(lambda)
            << "," << format17(acc::converging_bound(in)) << "\n";
      }
    }
  }
  in.loss.lambda = in.loss.beta;  // composition ignores the curvature constants
  for (double alpha : f.alphas) {
    in.alpha = alpha;
    for (std::int64_t k = 0; k <= f.kmax; ++k) {
      in.steps = k;
      csv << k << ",composition," << format17(alpha) << ",0,"
          << format17(acc::composition_bound(in)) << "\n";
    }
  }
  emit(f.output, fallback, csv.str());
  return kExitOk;
}

struct Figure2Flags {
  std::vector<double> alphas{10.0, 20.0, 30.0};
  double sg = 4.0;
  std::int64_t n = 5000;
  double eta = 0.02;
  double sigma = 0.02;
  std::int64_t kmax = 300;
  std::string output;
};

int cmd_figure2(const Figure2Flags& f, std::ostream& fallback) {
  acc::AccountantInput in;
  in.loss = acc::LossClass{1.0, 1.0, std::nullopt, f.sg};
  in.n = f.n;
  in.eta = f.eta;
  in.sigma2 = f.sigma * f.sigma;

  std::ostringstream csv;
  csv << "# command=figure2\n";
  csv << "# alpha=" << join17(f.alphas) << " sg=" << format17(f.sg) << " n=" << f.n
      << " eta=" << format17(f.eta) << " sigma=" << format17(f.sigma)
      << " kmax=" << f.kmax << "\n";
  csv << "K,alpha,our_bound,lower_bound,composition\n";
  for (double alpha : f.alphas) {
    in.alpha = alpha;
    for (std::int64_t k = 0; k <= f.kmax; ++k) {
      in.steps = k;
      csv << k << "," << format17(alpha) << ","
          << format17(acc::squared_loss_upper_bound(in)) << ","
          << format17(acc::lower_bound(in)) << ","
          << format17(acc::composition_bound(in)) << "\n";
    }
  }
  emit(f.output, fallback, csv.str());
  return kExitOk;
}

}  // namespace

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Privacy accounting, planning, and verification for noisy gradient descent"};
  app.require_subcommand(1);

  AccountFlags af;
  CLI::App* account = app.add_subcommand(
      "account", "Per-iteration Renyi privacy curve for one accounting method");
  account->add_option("--method", af.method,
                      "converging|composition|best|squared-upper|lower|recursion")
      ->capture_default_str();
  account->add_option("--alpha", af.alpha, "Renyi order")->capture_default_str();
  account->add_option("--lambda", af.lambda, "strong convexity")->capture_default_str();
  account->add_option("--beta", af.beta, "smoothness (defaults to lambda)");
  account->add_option("--sg", af.sg, "total gradient sensitivity")->capture_default_str();
  account->add_option("--sigma", af.sigma, "noise standard deviation")
      ->capture_default_str();
  account->add_option("--n", af.n, "dataset size")->capture_default_str();
  account->add_option("--eta", af.eta, "step size")->capture_default_str();
  account->add_option("--K", af.steps, "iteration count")->capture_default_str();
  account->add_option("--gamma", af.gamma, "recursion splitting parameter")
      ->capture_default_str();
  account->add_option("--lsi-c", af.lsi_c,
                      "log-Sobolev constant (defaults to lambda/(2 sigma^2))");
  account->add_option("--output", af.output, "CSV output path (default stdout)");

  PlanFlags pf;
  CLI::App* plan = app.add_subcommand(
      "plan", "Utility-optimal noise, step size, and iteration count for a budget");
  CLI::Option* opt_alpha = plan->add_option("--alpha", pf.alpha, "Renyi order");
  CLI::Option* opt_epsp = plan->add_option("--eps-prime", pf.eps_prime, "Renyi budget");
  CLI::Option* opt_eps = plan->add_option("--eps", pf.eps, "classical epsilon");
  CLI::Option* opt_delta = plan->add_option("--delta", pf.delta, "classical delta");
  opt_alpha->needs(opt_epsp);
  opt_epsp->needs(opt_alpha);
  opt_eps->needs(opt_delta);
  opt_delta->needs(opt_eps);
  opt_alpha->excludes(opt_eps)->excludes(opt_delta);
  plan->add_option("--L", pf.lipschitz, "Lipschitz constant")->capture_default_str();
  plan->add_option("--lambda", pf.lambda, "strong convexity")->capture_default_str();
  plan->add_option("--beta", pf.beta, "smoothness (defaults to lambda)");
  plan->add_option("--n", pf.n, "dataset size")->capture_default_str();
  plan->add_option("--d", pf.d, "dimension")->capture_default_str();
  plan->add_option("--radius", pf.radius, "constraint-set radius (defaults to 2L/lambda)");
  plan->add_option("--output", pf.output, "output path (default stdout)");

  TrainFlags tf;
  CLI::App* train =
      app.add_subcommand("train", "Projected noisy gradient descent on a dataset");
  train->add_option("--data", tf.data, "dataset file")->required();
  train->add_option("--loss", tf.loss, "squared|logistic")->capture_default_str();
  train->add_option("--mu", tf.mu, "ridge weight for the logistic loss")
      ->capture_default_str();
  train->add_option("--eta", tf.eta, "step size")->capture_default_str();
  train->add_option("--sigma", tf.sigma, "noise standard deviation")
      ->capture_default_str();
  train->add_option("--K", tf.steps, "iteration count")->capture_default_str();
  train->add_option("--seed", tf.seed, "run seed")->capture_default_str();
  train->add_option("--project-radius", tf.project_radius,
                    "centered-ball radius (default unconstrained)");
  train->add_option("--theta0", tf.theta0, "zero|gaussian")->capture_default_str();
  train->add_option("--runs", tf.runs, "Monte-Carlo replications (summary output)");
  train->add_option("--output", tf.output, "output path (default stdout)");

  TightnessFlags gf;
  CLI::App* tightness = app.add_subcommand(
      "tightness", "Lower/exact/upper privacy sandwich on the worst-case pair");
  tightness->add_option("--alpha", gf.alpha, "Renyi order")->capture_default_str();
  tightness->add_option("--sg", gf.sg, "total gradient sensitivity")->capture_default_str();
  tightness->add_option("--sigma", gf.sigma, "noise standard deviation")
      ->capture_default_str();
  tightness->add_option("--eta", gf.eta, "step size")->capture_default_str();
  tightness->add_option("--n", gf.n, "dataset size")->capture_default_str();
  tightness->add_option("--d", gf.d, "dimension")->capture_default_str();
  tightness->add_option("--K", gf.steps, "iteration count")->capture_default_str();
  tightness->add_option("--output", gf.output, "CSV output path (default stdout)");

  Figure1Flags f1;
  CLI::App* figure1 = app.add_subcommand(
      "figure1", "Converging bound vs composition baseline curve data");
  figure1->add_option("--alpha", f1.alphas, "Renyi orders")->delimiter(',');
  figure1->add_option("--lambda", f1.lambdas, "strong convexity values")->delimiter(',');
  figure1->add_option("--beta", f1.beta, "smoothness")->capture_default_str();
  figure1->add_option("--sg", f1.sg, "total gradient sensitivity")->capture_default_str();
  figure1->add_option("--n", f1.n, "dataset size")->capture_default_str();
  figure1->add_option("--eta", f1.eta, "step size")->capture_default_str();
  figure1->add_option("--sigma", f1.sigma, "noise standard deviation")
      ->capture_default_str();
  figure1->add_option("--kmax", f1.kmax, "largest iteration count")->capture_default_str();
  figure1->add_option("--output", f1.output, "CSV output path (default stdout)");

  Figure2Flags f2;
  CLI::App* figure2 = app.add_subcommand(
      "figure2", "Upper/lower/composition tightness curve data for the squared loss");
  figure2->add_option("--alpha", f2.alphas, "Renyi orders")->delimiter(',');
  figure2->add_option("--sg", f2.sg, "total gradient sensitivity")->capture_default_str();
  figure2->add_option("--n", f2.n, "dataset size")->capture_default_str();
  figure2->add_option("--eta", f2.eta, "step size")->capture_default_str();
  figure2->add_option("--sigma", f2.sigma, "noise standard deviation")
      ->capture_default_str();
  figure2->add_option("--kmax", f2.kmax, "largest iteration count")->capture_default_str();
  figure2->add_option("--output", f2.output, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (plan->parsed()) {
    pf.renyi_mode = opt_alpha->count() > 0;
    if (!pf.renyi_mode && opt_eps->count() == 0) {
      err << "error: a budget is required: --alpha/--eps-prime or --eps/--delta\n";
      return kExitUsage;
    }
  }

  try {
    if (account->parsed()) return cmd_account(af, out);
    if (plan->parsed()) return cmd_plan(pf, out);
    if (train->parsed()) return cmd_train(tf, out);
    if (tightness->parsed()) return cmd_tightness(gf, out);
    if (figure1->parsed()) return cmd_figure1(f1, out);
    if (figure2->parsed()) return cmd_figure2(f2, out);
    err << "error: no command given\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace noisygd::cli
