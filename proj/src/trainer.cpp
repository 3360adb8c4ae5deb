#include "ritzpen/trainer.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include "ritzpen/errors.hpp"

namespace ritzpen {

TrainReport train_network(const PenalizedProblem& p, const NetworkFamily& start,
                          const TrainConfig& cfg) {
  require_config(cfg.iterations >= 0, "iteration budget must be nonnegative");
  require_config(cfg.learning_rate > 0.0, "learning rate must be positive");
  require_config(cfg.log_every >= 1, "log_every must be at least 1");

  const auto t0 = std::chrono::steady_clock::now();
  const SamplingSpec sampling{cfg.mc_samples, cfg.mc_seed};

  NetworkFamily fam = start;
  const int nparams = fam.parameter_count();
  std::vector<double> sq_avg(nparams, 0.0);

  TrainReport report;
  report.reference_label = cfg.reference_label;
  std::vector<double> best_theta = fam.theta;
  double best_energy = std::numeric_limits<double>::infinity();
  int best_iteration = 0;

  auto finish = [&](double last_grad_norm) {
    report.network = NetworkFamily::with_parameters(fam.widths, fam.activation, best_theta);
    report.network.seed = start.seed;
    report.final_energy = best_energy;
    report.best_iteration = best_iteration;
    report.last_gradient_norm = last_grad_norm;
    report.walltime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    if (cfg.reference_min) {
      const GapResult g = clamp_gap(report.final_energy, *cfg.reference_min);
      report.delta = g.delta;
      report.gap_flagged = g.flagged;
    }
  };

  for (int it = 0; it <= cfg.iterations; ++it) {
    EnergyGradient eg;
    try {
      eg = energy_gradient(fam, p, sampling);
    } catch (const NumericalError& err) {
      finish(0.0);
      throw TrainingDivergence(std::string("training diverged: ") + err.what(),
                               std::move(report));
    }
    if (!std::isfinite(eg.energy) || eg.energy > cfg.divergence_energy) {
      finish(0.0);
      std::ostringstream os;
      os << "training diverged: energy " << eg.energy << " at iteration " << it;
      throw TrainingDivergence(os.str(), std::move(report));
    }

    // Strict improvement only, so the earliest iterate wins ties.
    if (eg.energy < best_energy) {
      best_energy = eg.energy;
      best_theta = fam.theta;
      best_iteration = it;
    }
    if (it % cfg.log_every == 0 || it == cfg.iterations)
      report.trace.push_back({it, eg.energy, best_energy});

    if (it == cfg.iterations) {
      double g2 = 0.0;
      for (double g : eg.grad) g2 += g * g;
      finish(std::sqrt(g2));
      break;
    }

    for (int k = 0; k < nparams; ++k) {
      const double g = eg.grad[k];
      sq_avg[k] = cfg.squared_grad_decay * sq_avg[k] +
                  (1.0 - cfg.squared_grad_decay) * g * g;
      fam.theta[k] -= cfg.learning_rate * g / (std::sqrt(sq_avg[k]) + cfg.epsilon);
    }
  }
  return report;
}

GapResult certify_gap(const TrainReport& report, double reference_min) {
  return clamp_gap(report.final_energy, reference_min);
}

double empirical_envelope(const PenalizedProblem& p, const std::string& arch_spec,
                          const TrainConfig& base, std::span<const std::uint64_t> seeds,
                          int budget_multiplier) {
  require_config(!seeds.empty(), "envelope needs at least one seed");
  require_config(budget_multiplier >= 1, "budget multiplier must be at least 1");
  TrainConfig cfg = base;
  cfg.iterations = base.iterations * budget_multiplier;
  cfg.reference_min.reset();

  // Independent seeds run as independent tasks; the reduction happens
  // in seed order, so the result does not depend on scheduling.
  std::vector<std::future<double>> runs;
  runs.reserve(seeds.size());
  for (std::uint64_t seed : seeds)
    runs.push_back(std::async(std::launch::async, [&, seed] {
      const NetworkFamily start = NetworkFamily::from_spec(arch_spec, seed);
      return train_network(p, start, cfg).final_energy;
    }));
  double best = std::numeric_limits<double>::infinity();
  for (auto& run : runs) best = std::min(best, run.get());
  return best;
}

}  // namespace ritzpen
