#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "noisygd/accountant.hpp"
#include "noisygd/errors.hpp"

namespace noisygd::trainer {

using accountant::LossClass;

// Records x_1..x_n in R^d with a certified bound on their norms.
struct Dataset {
  std::vector<std::vector<double>> records{};
  double domain_radius = 0.0;

  std::size_t size() const { return records.size(); }
  std::size_t dim() const { return records.empty() ? 0 : records.front().size(); }

  // Throws unless the dataset is nonempty, rectangular, and every record
  // satisfies ||x|| <= domain_radius.
  void validate() const;

  // Builds a dataset whose radius is the maximum record norm.
  static Dataset from_records(std::vector<std::vector<double>> recs);
};

// Text format: one whitespace-separated record per line; an optional leading
// "# radius <r>" line pins the domain radius, otherwise the maximum record
// norm is used.
Dataset load_dataset(std::istream& in);
Dataset load_dataset(const std::string& path);

// Euclidean projection onto either the whole space or a centred ball.
struct ProjectionSpec {
  enum class Kind { unconstrained, centered_ball };

  Kind kind = Kind::unconstrained;
  double radius = 0.0;

  static ProjectionSpec unconstrained() { return {}; }
  static ProjectionSpec ball(double radius) {
    return {Kind::centered_ball, radius};
  }

  void validate() const;
  bool constrained() const { return kind == Kind::centered_ball; }
  bool contains(std::span<const double> theta) const;
  void apply(std::vector<double>& theta) const;
};

enum class Theta0Mode { zero, projected_gaussian };

struct TrainConfig {
  double eta = 0.0;
  double sigma2 = 0.0;
  std::int64_t steps = 0;
  ProjectionSpec projection{};
  std::uint64_t seed = 0;
  Theta0Mode theta0_mode = Theta0Mode::zero;

  void validate() const;
};

// A per-record loss with an optional analytic certificate. Gradients are
// accumulated into a caller-owned buffer so the inner loop does not allocate.
class LossModel {
 public:
  virtual ~LossModel() = default;
  virtual std::string name() const = 0;
  virtual double value(std::span<const double> theta,
                       std::span<const double> x) const = 0;
  virtual void add_gradient(std::span<const double> theta,
                            std::span<const double> x,
                            std::span<double> grad) const = 0;
  // Certificate for datasets of the given radius, or nullopt when the loss
  // carries no analytic constants.
  virtual std::optional<LossClass> certificate(double domain_radius) const {
    (void)domain_radius;
    return std::nullopt;
  }
};

// 0.5 * ||theta - x||^2; lambda = beta = 1.
class SquaredLoss final : public LossModel {
 public:
  std::string name() const override { return "squared"; }
  double value(std::span<const double> theta,
               std::span<const double> x) const override;
  void add_gradient(std::span<const double> theta, std::span<const double> x,
                    std::span<double> grad) const override;
  std::optional<LossClass> certificate(double domain_radius) const override;
};

// log(1 + exp(-theta.x)) + (mu/2) ||theta||^2 with the label folded into x;
// lambda = mu, beta = mu + r^2/4 on a radius-r domain.
class RidgeLogisticLoss final : public LossModel {
 public:
  explicit RidgeLogisticLoss(double mu);
  std::string name() const override { return "logistic"; }
  double value(std::span<const double> theta,
               std::span<const double> x) const override;
  void add_gradient(std::span<const double> theta, std::span<const double> x,
                    std::span<double> grad) const override;
  std::optional<LossClass> certificate(double domain_radius) const override;
  double mu() const { return mu_; }

 private:
  double mu_;
};

// Worst-case change of the summed gradient when one record within the
// radius-r domain is replaced. Throws UnsupportedLossError when the loss
// carries no certificate.
double total_gradient_sensitivity(const LossModel& loss, double dataset_radius);

// Projected noisy gradient descent:
//   theta_{k+1} = Pi_C(theta_k - (eta/n) sum_i grad(theta_k; x_i)
//                      + sqrt(2 eta) N(0, sigma2 I)).
// Bit-reproducible for a fixed config on any platform with IEEE doubles.
std::vector<double> run_noisy_gd(const Dataset& data, const LossModel& loss,
                                 const TrainConfig& config);

struct MonteCarloSummary {
  std::vector<std::vector<double>> thetas{};  // one final iterate per replication
  std::vector<double> mean{};                 // per-dimension empirical mean
  std::vector<double> variance{};             // per-dimension sample variance
};

// Independent replications of run_noisy_gd; replication i is seeded from
// (config.seed, i), so results do not depend on execution order. Summaries
// are accumulated in replication order with Welford updates.
MonteCarloSummary monte_carlo_runs(const Dataset& data, const LossModel& loss,
                                   const TrainConfig& config,
                                   std::int64_t replications);

}  // namespace noisygd::trainer
