#include "ritzpen/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "ritzpen/errors.hpp"
#include "ritzpen/exact_cases.hpp"
#include "ritzpen/fe_space.hpp"
#include "ritzpen/galerkin.hpp"
#include "ritzpen/network.hpp"
#include "ritzpen/problem.hpp"
#include "ritzpen/trainer.hpp"

namespace ritzpen {

const char kSweepCsvHeader[] =
    "scale,lambda,h1_error,bdry_l2_error,energy,delta,seed,walltime_ms";

std::string to_string(AnsatzKind k) {
  return k == AnsatzKind::finite_element ? "fe" : "network";
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int default_train_resolution(DomainKind d) {
  switch (d) {
    case DomainKind::interval: return 32;
    case DomainKind::unit_square: return 16;
    case DomainKind::unit_disk_polar: return 8;
  }
  throw ContractError("unreachable domain kind");
}

int default_eval_resolution(DomainKind d) {
  switch (d) {
    case DomainKind::interval: return 256;
    case DomainKind::unit_square: return 64;
    case DomainKind::unit_disk_polar: return 16;
  }
  throw ContractError("unreachable domain kind");
}

double schedule_lambda(const SweepConfig& cfg, const DomainMesh& mesh_or_width,
                       int width) {
  if (cfg.ansatz == AnsatzKind::finite_element)
    return cfg.lambda0 * std::pow(mesh_or_width.mesh_size(), -cfg.sigma);
  return cfg.lambda0 * std::pow(static_cast<double>(width), cfg.sigma);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char buf[64];
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_record_row(std::ofstream& out, const SweepRecord& rec) {
  // walltime_ms is serialized as 0 so reruns produce byte-identical
  // files; the measured value lives in the sidecar.
  out << fmt17(rec.scale) << ',' << fmt17(rec.lambda) << ',' << fmt17(rec.h1_error)
      << ',' << fmt17(rec.bdry_l2_error) << ',' << fmt17(rec.energy) << ','
      << fmt17(rec.delta) << ',' << rec.seed << ",0\n";
}

struct TaskSpec {
  int scale = 0;
  double scale_value = 0.0;  ///< h for elements, width as double for networks
  std::uint64_t seed = 0;
  double lambda = 0.0;
};

}  // namespace

SweepConfig SweepConfig::from_flat(const FlatConfig& f) {
  SweepConfig cfg;
  cfg.case_id = f.get_string("case");
  const std::string kind = f.get_string_or("ansatz", "fe");
  if (kind == "fe")
    cfg.ansatz = AnsatzKind::finite_element;
  else if (kind == "network")
    cfg.ansatz = AnsatzKind::network;
  else
    throw ConfigError("ansatz must be 'fe' or 'network', got '" + kind + "'");
  cfg.grid = f.get_int_list("grid");
  cfg.sigma = f.get_double("sigma");
  cfg.lambda0 = f.get_double("lambda0");
  if (f.has("seeds")) cfg.seeds = f.get_u64_list("seeds");
  cfg.out_path = f.get_string("out");
  cfg.reference = f.get_string_or("reference", "closed_form");
  cfg.activation = f.get_string_or("activation", "tanh");
  cfg.train_iterations = f.get_int_or("iterations", 2000);
  cfg.learning_rate = f.get_double_or("learning_rate", 1e-3);
  cfg.mc_samples = f.get_int_or("mc_samples", 0);
  cfg.train_resolution = f.get_int_or("train_resolution", 0);
  cfg.eval_resolution = f.get_int_or("eval_resolution", 0);
  cfg.threads = f.get_int_or("threads", 0);

  const auto unknown = f.unknown_keys();
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const std::string& k : unknown) msg += " '" + k + "'";
    throw ConfigError(msg);
  }
  cfg.validate();
  return cfg;
}

void SweepConfig::validate() const {
  (void)case_by_id(case_id);  // throws on unknown ids
  require_config(!grid.empty(), "scale grid must not be empty");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    require_config(grid[i] < grid[i + 1], "scale grid must be strictly increasing");
  const int min_scale = ansatz == AnsatzKind::finite_element ? 2 : 1;
  require_config(grid.front() >= min_scale, "scales too small for the ansatz kind");
  require_config(sigma >= 0.0, "sigma must be nonnegative");
  require_config(lambda0 > 0.0, "lambda0 must be positive");
  require_config(!seeds.empty(), "at least one seed is required");
  require_config(!out_path.empty(), "output path must be set");
  require_config(reference == "closed_form" || reference == "refined",
                 "reference must be 'closed_form' or 'refined'");
  require_config(activation == "tanh" || activation == "relu",
                 "activation must be 'tanh' or 'relu'");
  require_config(train_iterations >= 0, "iterations must be nonnegative");
  require_config(learning_rate > 0.0, "learning rate must be positive");
  require_config(mc_samples >= 0, "mc_samples must be nonnegative");
  require_config(train_resolution == 0 || train_resolution >= 2,
                 "train_resolution must be 0 (default) or at least 2");
  require_config(eval_resolution == 0 || eval_resolution >= 2,
                 "eval_resolution must be 0 (default) or at least 2");
  require_config(threads >= 0, "threads must be nonnegative");
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const ExactSolutionCase c = case_by_id(cfg.case_id);
  const bool is_fe = cfg.ansatz == AnsatzKind::finite_element;
  const int eval_res =
      cfg.eval_resolution > 0 ? cfg.eval_resolution : default_eval_resolution(c.domain);
  const int train_res =
      cfg.train_resolution > 0 ? cfg.train_resolution : default_train_resolution(c.domain);

  // Error reference: the catalog's closed form, or a refined solve at
  // twice the finest scale with lambda * 16 (penalty bias below the
  // measured errors).
  DiscreteFunction reference = c.u_star;
  std::string reference_label = "closed_form";
  if (cfg.reference == "refined") {
    const int fine_res = 2 * (is_fe ? cfg.grid.back() : eval_res);
    auto fine_mesh = make_mesh(c.domain, fine_res);
    const double lambda_finest =
        is_fe ? cfg.lambda0 * std::pow(fine_mesh->mesh_size() * 2.0, -cfg.sigma)
              : cfg.lambda0 * std::pow(static_cast<double>(cfg.grid.back()), cfg.sigma);
    FiniteElementFamily fine_fam(fine_mesh);
    const auto fine_p =
        PenalizedProblem::penalized(fine_mesh, c.A, c.f, 16.0 * lambda_finest);
    reference = solve_linear(fine_p, fine_fam).function;
    reference_label = "refined solve at resolution " + std::to_string(fine_res) +
                      ", lambda x 16";
  }

  // Task list in (grid, seed) order; the CSV is assembled in this order
  // no matter how the concurrent tasks complete.
  std::vector<TaskSpec> tasks;
  for (int scale : cfg.grid) {
    double lambda, scale_value;
    if (is_fe) {
      auto probe = make_mesh(c.domain, scale);
      lambda = schedule_lambda(cfg, *probe, scale);
      scale_value = probe->mesh_size();
    } else {
      auto probe = make_mesh(c.domain, train_res);
      lambda = schedule_lambda(cfg, *probe, scale);
      scale_value = static_cast<double>(scale);
    }
    for (std::uint64_t seed : cfg.seeds)
      tasks.push_back({scale, scale_value, seed, lambda});
  }

  const auto run_task = [&](const TaskSpec& t) -> SweepRecord {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.lambda = t.lambda;
    rec.seed = t.seed;
    if (is_fe) {
      auto mesh = make_mesh(c.domain, t.scale);
      FiniteElementFamily fam(mesh);
      const auto p = PenalizedProblem::penalized(mesh, c.A, c.f, t.lambda);
      const FESolution sol = solve_linear(p, fam);
      rec.scale = mesh->mesh_size();
      rec.h1_error = h1_distance(sol.function, reference, *mesh);
      rec.bdry_l2_error = boundary_l2_distance(sol.function, reference, *mesh);
      rec.energy = sol.energy;
      rec.delta = 0.0;  // the linear solve is the exact family minimizer
    } else {
      auto train_mesh = make_mesh(c.domain, train_res);
      const auto p = PenalizedProblem::penalized(train_mesh, c.A, c.f, t.lambda);
      const std::string arch = std::to_string(dimension(c.domain)) + "-" +
                               std::to_string(t.scale) + "-1:" + cfg.activation;
      TrainConfig tc;
      tc.iterations = cfg.train_iterations;
      tc.learning_rate = cfg.learning_rate;
      tc.mc_samples = cfg.mc_samples;
      tc.mc_seed = t.seed;
      tc.log_every = std::max(1, cfg.train_iterations / 10);
      const TrainReport report =
          train_network(p, NetworkFamily::from_spec(arch, t.seed), tc);
      const DiscreteFunction u = network_function(report.network, c.domain);

      auto eval_mesh = make_mesh(c.domain, eval_res);
      const auto p_eval = PenalizedProblem::penalized(eval_mesh, c.A, c.f, t.lambda);
      rec.scale = static_cast<double>(t.scale);
      rec.h1_error = h1_distance(u, reference, *eval_mesh);
      rec.bdry_l2_error = boundary_l2_distance(u, reference, *eval_mesh);
      rec.energy = energy(p_eval, u);
      // Certified family-minimum proxy: the element minimizer on the
      // evaluation mesh bounds the achievable energy from below.
      FiniteElementFamily eval_fam(eval_mesh);
      const FESolution fe_ref = solve_linear(p_eval, eval_fam);
      rec.delta = clamp_gap(rec.energy, fe_ref.energy).delta;
    }
    rec.walltime_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    return rec;
  };

  // Wave-parallel execution.
  const int conc = cfg.threads > 0
                       ? cfg.threads
                       : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::optional<SweepRecord>> done(tasks.size());
  std::size_t failed_at = tasks.size();
  std::exception_ptr failure;
  for (std::size_t base = 0; base < tasks.size() && !failure; base += conc) {
    const std::size_t end = std::min(tasks.size(), base + conc);
    std::vector<std::future<SweepRecord>> wave;
    for (std::size_t i = base; i < end; ++i)
      wave.push_back(std::async(std::launch::async, run_task, tasks[i]));
    for (std::size_t i = base; i < end; ++i) {
      try {
        done[i] = wave[i - base].get();
      } catch (...) {
        if (!failure) {
          failure = std::current_exception();
          failed_at = i;
        }
      }
    }
  }

  // Assemble outputs.  On failure, flush what completed before the
  // failing task plus one failure row, then rethrow.
  const std::filesystem::path csv_path(cfg.out_path);
  if (csv_path.has_parent_path())
    std::filesystem::create_directories(csv_path.parent_path());
  SweepResult result;
  result.csv_path = cfg.out_path;
  result.sidecar_path = cfg.out_path + ".meta";
  result.plot_h1_path = cfg.out_path + ".h1.dat";
  result.plot_bdry_path = cfg.out_path + ".bdry.dat";

  std::ofstream csv(result.csv_path, std::ios::trunc);
  if (!csv) throw ConfigError("cannot write output file: " + result.csv_path);
  csv << kSweepCsvHeader << "\n";
  const std::size_t upto = failure ? failed_at : tasks.size();
  for (std::size_t i = 0; i < upto; ++i) {
    if (!done[i]) continue;
    result.records.push_back(*done[i]);
    write_record_row(csv, *done[i]);
  }
  if (failure) {
    SweepRecord bad;
    bad.scale = tasks[failed_at].scale_value;
    bad.lambda = tasks[failed_at].lambda;
    bad.seed = tasks[failed_at].seed;
    bad.h1_error = bad.bdry_l2_error = bad.energy = bad.delta =
        std::numeric_limits<double>::quiet_NaN();
    write_record_row(csv, bad);
  }
  csv.close();

  std::ofstream meta(result.sidecar_path, std::ios::trunc);
  meta << "# sweep sidecar; volatile metadata lives here, not in the CSV\n";
  meta << "created_utc = " << utc_timestamp() << "\n";
  meta << "case = " << cfg.case_id << "\n";
  meta << "ansatz = " << to_string(cfg.ansatz) << "\n";
  meta << "sigma = " << fmt17(cfg.sigma) << "\n";
  meta << "lambda0 = " << fmt17(cfg.lambda0) << "\n";
  meta << "reference = " << reference_label << "\n";
  meta << "records = " << result.records.size() << " of " << tasks.size() << "\n";

  if (!failure) {
    // Fit on the best error per grid point (min over seeds), floored at
    // machine noise as the fitter requires.
    std::vector<std::pair<double, double>> fit_points;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
      double best = std::numeric_limits<double>::infinity();
      double scale = 0.0;
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const SweepRecord& rec = result.records[g * cfg.seeds.size() + s];
        best = std::min(best, rec.h1_error);
        scale = rec.scale;
      }
      fit_points.emplace_back(scale, std::max(best, 1e-16));
    }
    if (fit_points.size() >= 3) {
      result.fit = fit_rate(fit_points);
      meta << "fit_slope = " << fmt17(result.fit.slope) << "\n";
      meta << "fit_r_squared = " << fmt17(result.fit.r_squared) << "\n";
      meta << "fit_window = [" << result.fit.window_begin << ", "
           << result.fit.window_end << ")\n";
    } else {
      meta << "fit = skipped (needs 3 grid points)\n";
    }

    std::ofstream p1(result.plot_h1_path, std::ios::trunc);
    std::ofstream p2(result.plot_bdry_path, std::ios::trunc);
    for (const auto& [scale, err] : fit_points) p1 << fmt17(scale) << ' ' << fmt17(err) << '\n';
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
      double best = std::numeric_limits<double>::infinity();
      double scale = 0.0;
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const SweepRecord& rec = result.records[g * cfg.seeds.size() + s];
        best = std::min(best, rec.bdry_l2_error);
        scale = rec.scale;
      }
      p2 << fmt17(scale) << ' ' << fmt17(std::max(best, 1e-16)) << '\n';
    }
  } else {
    meta << "aborted_at_scale = " << tasks[failed_at].scale << "\n";
    meta << "aborted_at_seed = " << tasks[failed_at].seed << "\n";
  }

  meta << "walltime_ms_per_record =";
  for (const SweepRecord& rec : result.records) meta << ' ' << fmt17(rec.walltime_ms);
  meta << "\n";
  meta << "-- begin config --\n";
  meta << "case = " << cfg.case_id << "\nansatz = " << to_string(cfg.ansatz) << "\ngrid =";
  for (std::size_t i = 0; i < cfg.grid.size(); ++i)
    meta << (i ? "," : " ") << cfg.grid[i];
  meta << "\nsigma = " << fmt17(cfg.sigma) << "\nlambda0 = " << fmt17(cfg.lambda0)
       << "\nseeds =";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    meta << (i ? "," : " ") << cfg.seeds[i];
  meta << "\nout = " << cfg.out_path << "\nreference = " << cfg.reference
       << "\nactivation = " << cfg.activation
       << "\niterations = " << cfg.train_iterations
       << "\nlearning_rate = " << fmt17(cfg.learning_rate)
       << "\nmc_samples = " << cfg.mc_samples
       << "\ntrain_resolution = " << train_res
       << "\neval_resolution = " << eval_res << "\nthreads = " << cfg.threads << "\n";
  meta << "-- end config --\n";
  meta.close();

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      throw NumericalError(std::string("sweep aborted: ") + e.what() +
                           "; partial results flushed to " + result.csv_path);
    }
  }
  return result;
}

}  // namespace ritzpen
