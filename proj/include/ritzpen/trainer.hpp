#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ritzpen/errors.hpp"
#include "ritzpen/network.hpp"
#include "ritzpen/problem.hpp"

namespace ritzpen {

/// First-order trainer configuration.  The optimizer is a momentum-free
/// adaptive method: a running average of squared gradients with the
/// given decay scales each step.  All choices here are artifact
/// decisions; nothing about training is prescribed by the theory being
/// tested.
struct TrainConfig {
  int iterations = 20000;
  double learning_rate = 1e-3;
  double squared_grad_decay = 0.999;
  double epsilon = 1e-8;
  /// 0 = deterministic mesh quadrature; otherwise a seeded Monte Carlo
  /// volume sample of this size (fixed across iterations).
  int mc_samples = 0;
  std::uint64_t mc_seed = 0;
  int log_every = 100;
  double divergence_energy = 1e6;
  /// Optional certified lower-energy reference; when present the report
  /// carries the optimization gap against it.
  std::optional<double> reference_min;
  std::string reference_label = "empirical lower envelope";
};

struct TracePoint {
  int iteration = 0;
  double energy = 0.0;
  double best_energy = 0.0;
};

struct TrainReport {
  NetworkFamily network;  ///< best-seen parameters, not the last iterate
  std::vector<TracePoint> trace;
  double final_energy = 0.0;  ///< energy of the best-seen parameters
  int best_iteration = 0;
  double last_gradient_norm = 0.0;
  double walltime_ms = 0.0;
  std::optional<double> delta;
  std::string reference_label;
  bool gap_flagged = false;
};

/// Minimize the penalized energy over the network parameters.  The
/// best-seen iterate wins; at equal energies the earliest iteration is
/// kept.  Divergence (energy above the configured bound, or NaN) aborts
/// with the partial trace attached to the exception.
TrainReport train_network(const PenalizedProblem& p, const NetworkFamily& start,
                          const TrainConfig& cfg);

class TrainingDivergence : public NumericalError {
public:
  TrainingDivergence(const std::string& message, TrainReport partial_report)
      : NumericalError(message), partial(std::move(partial_report)) {}
  TrainReport partial;
};

/// Gap of a finished training run against a certified or empirical
/// reference minimum; flags the inconsistent case where the reference
/// sits above the candidate by more than the noise tolerance.
GapResult certify_gap(const TrainReport& report, double reference_min);

/// Best energy over independent seeds at a multiple of the iteration
/// budget.  This is the "empirical lower envelope" reference for
/// network gaps; it is computed once per fixture and stored, never
/// claimed to be the true infimum.
double empirical_envelope(const PenalizedProblem& p, const std::string& arch_spec,
                          const TrainConfig& base, std::span<const std::uint64_t> seeds,
                          int budget_multiplier);

}  // namespace ritzpen
