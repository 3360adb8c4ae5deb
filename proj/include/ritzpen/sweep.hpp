#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ritzpen/flat_config.hpp"
#include "ritzpen/rates.hpp"

namespace ritzpen {

enum class AnsatzKind { finite_element, network };
std::string to_string(AnsatzKind k);

/// Declarative description of one convergence sweep: a growing family
/// scale grid (mesh resolutions or hidden widths n) with the coupled
/// penalty schedule lambda_h = lambda0 * h^{-sigma} for elements and
/// lambda_n = lambda0 * n^{sigma} for networks.
struct SweepConfig {
  std::string case_id;
  AnsatzKind ansatz = AnsatzKind::finite_element;
  std::vector<int> grid;
  double sigma = 1.0;
  double lambda0 = 1.0;
  std::vector<std::uint64_t> seeds = {1};
  std::string out_path;

  /// Error reference: "closed_form" uses the catalog solution; "refined"
  /// solves at twice the finest resolution with lambda scaled by 16 so
  /// the reference's own penalty bias sits below the measured errors.
  std::string reference = "closed_form";

  // Network-ansatz knobs (ignored for elements).
  std::string activation = "tanh";
  int train_iterations = 2000;
  double learning_rate = 1e-3;
  int mc_samples = 0;
  int train_resolution = 0;  ///< 0 = per-domain default
  int eval_resolution = 0;   ///< quadrature mesh for error reporting; 0 = default

  int threads = 0;  ///< concurrent grid tasks; 0 = hardware concurrency

  static SweepConfig from_flat(const FlatConfig& cfg);
  void validate() const;
};

/// One completed grid point.  The CSV serialization writes walltime_ms
/// as 0 so reruns are byte-identical; measured times go to the sidecar.
struct SweepRecord {
  double scale = 0.0;  ///< h for elements, width n for networks
  double lambda = 0.0;
  double h1_error = 0.0;
  double bdry_l2_error = 0.0;
  double energy = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double walltime_ms = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  /// log-log fit of h1_error against scale; empty `fit.points` means the
  /// grid had fewer than the 3 points a fit needs and none was computed.
  RateFit fit;
  std::string csv_path;
  std::string sidecar_path;
  std::string plot_h1_path;
  std::string plot_bdry_path;
};

/// Run every (grid point, seed) task, concurrently up to cfg.threads,
/// and assemble outputs in grid order regardless of completion order.
/// A failing solve aborts the sweep: completed records up to the failure
/// are flushed to the CSV together with a failure row (errors serialized
/// as nan), and the error is rethrown with the partial path attached.
SweepResult run_sweep(const SweepConfig& cfg);

/// The exact CSV header; stable across versions.
extern const char kSweepCsvHeader[];

}  // namespace ritzpen
