#include "noisygd/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "noisygd/mathutil.hpp"
#include "noisygd/rng.hpp"

namespace noisygd::trainer {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void Dataset::validate() const {
  require(!records.empty(), "dataset must contain at least one record");
  require(std::isfinite(domain_radius) && domain_radius >= 0.0,
          "domain_radius must be finite and >= 0");
  const std::size_t d = records.front().size();
  require(d >= 1, "records must have at least one coordinate");
  for (const auto& r : records) {
    if (r.size() != d)
      throw MismatchError("dataset records have mixed dimensions");
    double s = 0.0;
    for (double x : r) {
      require(std::isfinite(x), "record values must be finite");
      s += x * x;
    }
    // Same summation order as norm(), so the radius comparison is unchanged.
    if (!(std::sqrt(s) <= domain_radius))
      throw DomainError("record norm exceeds domain_radius");
  }
}

Dataset Dataset::from_records(std::vector<std::vector<double>> recs) {
  Dataset ds;
  ds.records = std::move(recs);
  double radius = 0.0;
  for (const auto& r : ds.records) radius = std::max(radius, norm(r));
  ds.domain_radius = radius;
  ds.validate();
  return ds;
}

Dataset load_dataset(std::istream& in) {
  Dataset ds;
  bool have_radius = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream row(line);
    std::string first;
    if (!(row >> first)) continue;  // blank line
    if (first[0] == '#') {
      // Header/comment. "# radius <r>" pins the domain radius.
      std::string key = first.size() > 1 ? first.substr(1) : "";
      if (key.empty()) row >> key;
      if (key == "radius") {
        double r = 0.0;
        if (!(row >> r) || !(std::isfinite(r) && r >= 0.0))
          throw IoError("line " + std::to_string(lineno) +
                        ": malformed radius header");
        ds.domain_radius = r;
        have_radius = true;
      }
      continue;
    }
    std::vector<double> rec;
    std::istringstream vals(line);
    double v = 0.0;
    while (vals >> v) rec.push_back(v);
    if (!vals.eof())
      throw IoError("line " + std::to_string(lineno) + ": non-numeric value");
    if (!ds.records.empty() && rec.size() != ds.records.front().size())
      throw IoError("line " + std::to_string(lineno) + ": expected " +
                    std::to_string(ds.records.front().size()) + " values, got " +
                    std::to_string(rec.size()));
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw IoError("dataset contains no records");
  if (!have_radius) {
    double radius = 0.0;
    for (const auto& r : ds.records) radius = std::max(radius, norm(r));
    ds.domain_radius = radius;
  }
  try {
    ds.validate();
  } catch (const Error& e) {
    throw IoError(std::string("invalid dataset: ") + e.what());
  }
  return ds;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  return load_dataset(in);
}

void ProjectionSpec::validate() const {
  if (kind == Kind::centered_ball)
    require(std::isfinite(radius) && radius > 0.0,
            "projection radius must be positive and finite");
}

bool ProjectionSpec::contains(std::span<const double> theta) const {
  if (kind == Kind::unconstrained) return true;
  return norm(theta) <= radius * (1.0 + 1e-12);
}

void ProjectionSpec::apply(std::vector<double>& theta) const {
  if (kind == Kind::unconstrained) return;
  const double len = norm(theta);
  if (len <= radius) return;
  const double scale = radius / len;
  for (double& t : theta) t *= scale;
}

void TrainConfig::validate() const {
  require(std::isfinite(eta) && eta > 0.0, "eta must be positive and finite");
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "sigma2 must be >= 0");
  require(steps >= 0, "steps must be >= 0");
  projection.validate();
}

double SquaredLoss::value(std::span<const double> theta,
                          std::span<const double> x) const {
  return 0.5 * squared_distance(theta, x);
}

void SquaredLoss::add_gradient(std::span<const double> theta,
                               std::span<const double> x,
                               std::span<double> grad) const {
  for (std::size_t i = 0; i < theta.size(); ++i) grad[i] += theta[i] - x[i];
}

std::optional<LossClass> SquaredLoss::certificate(double domain_radius) const {
  // Swapping one record moves the summed gradient by x' - x, at most 2r.
  return LossClass{1.0, 1.0, std::nullopt, 2.0 * domain_radius};
}

RidgeLogisticLoss::RidgeLogisticLoss(double mu) : mu_(mu) {
  require(std::isfinite(mu) && mu > 0.0, "mu must be positive and finite");
}

double RidgeLogisticLoss::value(std::span<const double> theta,
                                std::span<const double> x) const {
  double u = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) u += theta[i] * x[i];
  // log(1 + e^{-u}) without overflow for large |u|.
  const double link = u > 0.0 ? std::log1p(std::exp(-u)) : -u + std::log1p(std::exp(u));
  return link + 0.5 * mu_ * squared_norm(theta);
}

void RidgeLogisticLoss::add_gradient(std::span<const double> theta,
                                     std::span<const double> x,
                                     std::span<double> grad) const {
  double u = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) u += theta[i] * x[i];
  // s = 1 / (1 + e^u), evaluated on the stable side.
  double s = 0.0;
  if (u >= 0.0) {
    const double e = std::exp(-u);
    s = e / (1.0 + e);
  } else {
    s = 1.0 / (1.0 + std::exp(u));
  }
  for (std::size_t i = 0; i < theta.size(); ++i)
    grad[i] += mu_ * theta[i] - s * x[i];
}

std::optional<LossClass> RidgeLogisticLoss::certificate(double domain_radius) const {
  // Data-dependent gradient term has norm below ||x|| <= r, so a swap moves
  // the summed gradient by at most 2r; the curvature of the link is at most
  // r^2/4 on top of the ridge.
  return LossClass{mu_, mu_ + domain_radius * domain_radius / 4.0, std::nullopt,
                   2.0 * domain_radius};
}

double total_gradient_sensitivity(const LossModel& loss, double dataset_radius) {
  require(std::isfinite(dataset_radius) && dataset_radius >= 0.0,
          "dataset_radius must be finite and >= 0");
  const auto cert = loss.certificate(dataset_radius);
  if (!cert)
    throw UnsupportedLossError("loss model '" + loss.name() +
                               "' carries no sensitivity certificate");
  return cert->grad_sensitivity;
}

std::vector<double> run_noisy_gd(const Dataset& data, const LossModel& loss,
                                 const TrainConfig& config) {
  data.validate();
  config.validate();
  const std::size_t d = data.dim();
  const double n = static_cast<double>(data.size());

  Rng rng(config.seed);
  std::vector<double> theta(d, 0.0);
  if (config.theta0_mode == Theta0Mode::projected_gaussian) {
    const auto cert = loss.certificate(data.domain_radius);
    if (!cert || !(cert->lambda > 0.0))
      throw UnsupportedLossError(
          "theta0 mode projected_gaussian needs a certified lambda");
    // Stationary-scale start: per-coordinate variance 2 sigma2 / lambda.
    const double sd = std::sqrt(2.0 * config.sigma2 / cert->lambda);
    for (double& t : theta) t = sd * rng.next_gaussian();
    config.projection.apply(theta);
  }

  std::vector<double> grad(d);
  const double step_scale = config.eta / n;
  const double noise_scale = std::sqrt(2.0 * config.eta * config.sigma2);
  for (std::int64_t k = 0; k < config.steps; ++k) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const auto& x : data.records) loss.add_gradient(theta, x, grad);
    for (std::size_t i = 0; i < d; ++i)
      theta[i] += -step_scale * grad[i] + noise_scale * rng.next_gaussian();
    config.projection.apply(theta);
  }
  return theta;
}

MonteCarloSummary monte_carlo_runs(const Dataset& data, const LossModel& loss,
                                   const TrainConfig& config,
                                   std::int64_t replications) {
  data.validate();
  config.validate();
  require(replications >= 1, "replications must be >= 1");
  if (config.theta0_mode == Theta0Mode::projected_gaussian &&
      !loss.certificate(data.domain_radius))
    throw UnsupportedLossError(
        "theta0 mode projected_gaussian needs a certified lambda");

  MonteCarloSummary out;
  out.thetas.assign(static_cast<std::size_t>(replications), {});

  const auto run_range = [&](std::int64_t begin, std::int64_t end,
                             std::exception_ptr& failure) {
    try {
      for (std::int64_t i = begin; i < end; ++i) {
        TrainConfig per_run = config;
        per_run.seed = Rng::derive(config.seed, static_cast<std::uint64_t>(i));
        out.thetas[static_cast<std::size_t>(i)] = run_noisy_gd(data, loss, per_run);
      }
    } catch (...) {
      failure = std::current_exception();
    }
  };

  // Replications are independent streams; any partition gives identical
  // per-slot results, and summaries below run in replication order.
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min<unsigned>(workers, 16);
  if (replications < 64) workers = 1;

  if (workers == 1) {
    std::exception_ptr failure;
    run_range(0, replications, failure);
    if (failure) std::rethrow_exception(failure);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    const std::int64_t chunk = (replications + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
      const std::int64_t end = std::min<std::int64_t>(begin + chunk, replications);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end, std::ref(failures[w]));
    }
    for (auto& t : pool) t.join();
    for (const auto& failure : failures)
      if (failure) std::rethrow_exception(failure);
  }

  const std::size_t d = data.dim();
  out.mean.assign(d, 0.0);
  out.variance.assign(d, 0.0);
  std::vector<double> m2(d, 0.0);
  for (std::int64_t i = 0; i < replications; ++i) {
    const auto& theta = out.thetas[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = theta[j] - out.mean[j];
      out.mean[j] += delta / static_cast<double>(i + 1);
      m2[j] += delta * (theta[j] - out.mean[j]);
    }
  }
  if (replications > 1)
    for (std::size_t j = 0; j < d; ++j)
      out.variance[j] = m2[j] / static_cast<double>(replications - 1);
  return out;
}

}  // namespace noisygd::trainer
