#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ritzpen/errors.hpp"
#include "ritzpen/flat_config.hpp"
#include "ritzpen/sweep.hpp"

using namespace ritzpen;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "ritzpen-sweep-tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SweepConfig small_fe_config(const std::string& out_name) {
  SweepConfig cfg;
  cfg.case_id = "interval_poisson";
  cfg.ansatz = AnsatzKind::finite_element;
  cfg.grid = {4, 8, 16};
  cfg.sigma = 1.0;
  cfg.lambda0 = 4.0;
  cfg.out_path = (scratch_dir() / out_name).string();
  return cfg;
}

}  // namespace

TEST_CASE("flat config parses typed keys, comments and whitespace") {
  const FlatConfig cfg = FlatConfig::parse_text(
      "# leading comment\n"
      "name =  interval_poisson  # trailing comment\n"
      "\n"
      "count=3\n"
      "  width  =   0.5\n"
      "flag = yes\n"
      "grid = 4, 8,16\n"
      "rates = 0.5,1.0 , 2\n"
      "seeds = 7, 9\n",
      "inline.cfg");
  CHECK(cfg.origin() == "inline.cfg");
  CHECK(cfg.text().find("# leading comment") == 0);  // verbatim text retained
  CHECK(cfg.has("name"));
  CHECK(!cfg.has("missing"));
  CHECK(cfg.get_string("name") == "interval_poisson");
  CHECK(cfg.get_int("count") == 3);
  CHECK(cfg.get_double("width") == 0.5);
  CHECK(cfg.get_bool_or("flag", false));
  CHECK(cfg.get_bool_or("absent", true));
  CHECK(cfg.get_int_list("grid") == std::vector<int>{4, 8, 16});
  CHECK(cfg.get_double_list("rates") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(cfg.get_u64_list("seeds") == std::vector<std::uint64_t>{7, 9});
  CHECK(cfg.get_string_or("name", "zzz") == "interval_poisson");
  CHECK(cfg.get_string_or("absent2", "zzz") == "zzz");
  CHECK(cfg.get_int_or("absent3", 11) == 11);
  CHECK(cfg.get_double_or("absent4", 2.5) == 2.5);
}

TEST_CASE("flat config reports unconsumed keys") {
  const FlatConfig cfg = FlatConfig::parse_text("a = 1\nb = 2\nc = 3\n");
  CHECK(cfg.unknown_keys() == std::vector<std::string>{"a", "b", "c"});
  (void)cfg.get_int("a");
  (void)cfg.get_string_or("c", "");
  CHECK(cfg.unknown_keys() == std::vector<std::string>{"b"});
}

TEST_CASE("flat config rejects malformed input with file and line") {
  CHECK_THROWS_AS((void)FlatConfig::parse_file("/nonexistent/path.cfg"), ConfigError);
  CHECK_THROWS_WITH_AS((void)FlatConfig::parse_text("a = 1\nbogus line\n", "f.cfg"),
                       "f.cfg:2: expected 'key = value', got 'bogus line'",
                       ConfigError);
  CHECK_THROWS_WITH_AS((void)FlatConfig::parse_text("= 5\n", "f.cfg"),
                       "f.cfg:1: empty key", ConfigError);
  CHECK_THROWS_WITH_AS((void)FlatConfig::parse_text("a = 1\na = 2\n", "f.cfg"),
                       "f.cfg:2: duplicate key 'a'", ConfigError);

  const FlatConfig cfg = FlatConfig::parse_text(
      "num = 12x\nint = 3.5\nbig = 99999999999999\nflag = maybe\nseeds = -1\n");
  CHECK_THROWS_AS((void)cfg.get_string("nothere"), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_double("num"), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_int("int"), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_int("big"), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_bool_or("flag", false), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_u64_list("seeds"), ConfigError);
}

TEST_CASE("sweep config from flat table applies defaults and rejects typos") {
  const FlatConfig flat = FlatConfig::parse_text(
      "case = square_sine\n"
      "ansatz = network\n"
      "grid = 4, 8\n"
      "sigma = 0.5\n"
      "lambda0 = 2\n"
      "seeds = 3, 4\n"
      "out = /tmp/x.csv\n"
      "iterations = 50\n");
  const SweepConfig cfg = SweepConfig::from_flat(flat);
  CHECK(cfg.case_id == "square_sine");
  CHECK(cfg.ansatz == AnsatzKind::network);
  CHECK(cfg.grid == std::vector<int>{4, 8});
  CHECK(cfg.sigma == 0.5);
  CHECK(cfg.lambda0 == 2.0);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(cfg.reference == "closed_form");
  CHECK(cfg.activation == "tanh");
  CHECK(cfg.train_iterations == 50);
  CHECK(cfg.learning_rate == 1e-3);
  CHECK(cfg.threads == 0);

  const FlatConfig typo = FlatConfig::parse_text(
      "case = interval_poisson\ngrid = 4, 8\nsigma = 1\nlambda0 = 1\n"
      "out = /tmp/x.csv\nlerning_rate = 0.1\n");
  CHECK_THROWS_WITH_AS((void)SweepConfig::from_flat(typo),
                       "unknown config keys: 'lerning_rate'", ConfigError);
}

TEST_CASE("sweep config validation rejects each broken invariant") {
  const auto expect_reject = [](void (*mutate)(SweepConfig&)) {
    SweepConfig cfg;
    cfg.case_id = "interval_poisson";
    cfg.grid = {4, 8};
    cfg.out_path = "/tmp/x.csv";
    mutate(cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  expect_reject([](SweepConfig& c) { c.case_id = "unknown_case"; });
  expect_reject([](SweepConfig& c) { c.grid.clear(); });
  expect_reject([](SweepConfig& c) { c.grid = {8, 8}; });
  expect_reject([](SweepConfig& c) { c.grid = {16, 8}; });
  expect_reject([](SweepConfig& c) { c.grid = {1, 8}; });  // fe needs >= 2
  expect_reject([](SweepConfig& c) { c.sigma = -0.5; });
  expect_reject([](SweepConfig& c) { c.lambda0 = 0.0; });
  expect_reject([](SweepConfig& c) { c.seeds.clear(); });
  expect_reject([](SweepConfig& c) { c.out_path.clear(); });
  expect_reject([](SweepConfig& c) { c.reference = "exact"; });
  expect_reject([](SweepConfig& c) { c.activation = "sigmoid"; });
  expect_reject([](SweepConfig& c) { c.train_iterations = -1; });
  expect_reject([](SweepConfig& c) { c.learning_rate = 0.0; });
  expect_reject([](SweepConfig& c) { c.mc_samples = -1; });
  expect_reject([](SweepConfig& c) { c.train_resolution = 1; });
  expect_reject([](SweepConfig& c) { c.eval_resolution = 1; });
  expect_reject([](SweepConfig& c) { c.threads = -2; });

  SweepConfig net;
  net.case_id = "interval_poisson";
  net.ansatz = AnsatzKind::network;
  net.grid = {1, 2};  // width 1 is a valid network
  net.out_path = "/tmp/x.csv";
  CHECK_NOTHROW(net.validate());
}

TEST_CASE("csv schema: pinned header, penalty schedule and 17-digit round trip") {
  CHECK(std::string(kSweepCsvHeader) ==
        "scale,lambda,h1_error,bdry_l2_error,energy,delta,seed,walltime_ms");

  const SweepConfig cfg = small_fe_config("schema.csv");
  const SweepResult res = run_sweep(cfg);
  REQUIRE(res.records.size() == 3);

  const auto text = slurp(res.csv_path);
  const auto rows = lines_of(text);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == kSweepCsvHeader);

  const double expected_scale[] = {0.25, 0.125, 0.0625};
  for (int i = 0; i < 3; ++i) {
    const auto cells = split_csv(rows[i + 1]);
    REQUIRE(cells.size() == 8);
    // scale = h, lambda = lambda0 * h^{-sigma}; both exact dyadics here
    CHECK(std::strtod(cells[0].c_str(), nullptr) == expected_scale[i]);
    CHECK(std::strtod(cells[1].c_str(), nullptr) == 4.0 / expected_scale[i]);
    // every numeric cell round-trips at 17 significant digits
    for (int col : {0, 1, 2, 3, 4, 5}) {
      const double v = std::strtod(cells[col].c_str(), nullptr);
      CHECK(cells[col] == fmt17(v));
    }
    CHECK(std::strtod(cells[2].c_str(), nullptr) == res.records[i].h1_error);
    CHECK(std::strtod(cells[4].c_str(), nullptr) == res.records[i].energy);
    CHECK(cells[5] == "0");  // the element minimizer has zero gap
    CHECK(cells[6] == "1");
    CHECK(cells[7] == "0");  // walltime sentinel; real times live in the sidecar
  }

  // Plot data: two columns per grid point, matching the records.
  const auto h1_rows = lines_of(slurp(res.plot_h1_path));
  REQUIRE(h1_rows.size() == 3);
  for (int i = 0; i < 3; ++i) {
    std::istringstream is(h1_rows[i]);
    double scale = 0.0, err = 0.0;
    is >> scale >> err;
    CHECK(scale == expected_scale[i]);
    CHECK(err == res.records[i].h1_error);
  }

  CHECK(res.fit.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(res.fit.window_begin == 0);
  CHECK(res.fit.window_end == 3);
}

TEST_CASE("rerunning an identical sweep reproduces the csv byte for byte") {
  const SweepConfig cfg = small_fe_config("idempotent.csv");
  run_sweep(cfg);
  const std::string first = slurp(cfg.out_path);
  run_sweep(cfg);
  CHECK(slurp(cfg.out_path) == first);
}

TEST_CASE("sidecar embeds a reparseable resolved config that reruns identically") {
  const SweepConfig cfg = small_fe_config("roundtrip.csv");
  const SweepResult res = run_sweep(cfg);

  const std::string meta = slurp(res.sidecar_path);
  CHECK(meta.find("created_utc = ") != std::string::npos);
  CHECK(meta.find("walltime_ms_per_record =") != std::string::npos);
  const auto begin = meta.find("-- begin config --\n");
  const auto end = meta.find("-- end config --");
  REQUIRE(begin != std::string::npos);
  REQUIRE(end != std::string::npos);
  const std::string block =
      meta.substr(begin + std::string("-- begin config --\n").size(),
                  end - begin - std::string("-- begin config --\n").size());

  SweepConfig again = SweepConfig::from_flat(FlatConfig::parse_text(block, "sidecar"));
  CHECK(again.case_id == cfg.case_id);
  CHECK(again.grid == cfg.grid);
  CHECK(again.sigma == cfg.sigma);
  CHECK(again.lambda0 == cfg.lambda0);
  again.out_path = (scratch_dir() / "roundtrip2.csv").string();
  const SweepResult rerun = run_sweep(again);
  REQUIRE(rerun.records.size() == res.records.size());
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    CHECK(rerun.records[i].h1_error == res.records[i].h1_error);
    CHECK(rerun.records[i].energy == res.records[i].energy);
  }
}

TEST_CASE("network sweep with fixed seeds is deterministic across reruns") {
  SweepConfig cfg;
  cfg.case_id = "interval_poisson";
  cfg.ansatz = AnsatzKind::network;
  cfg.grid = {4, 8, 16};
  cfg.sigma = 1.0;
  cfg.lambda0 = 10.0;
  cfg.seeds = {1, 2};
  cfg.train_iterations = 100;
  cfg.out_path = (scratch_dir() / "net_a.csv").string();
  const SweepResult first = run_sweep(cfg);
  REQUIRE(first.records.size() == 6);
  const std::string bytes_a = slurp(cfg.out_path);

  cfg.out_path = (scratch_dir() / "net_b.csv").string();
  run_sweep(cfg);
  CHECK(slurp(cfg.out_path) == bytes_a);

  // Records arrive in (grid, seed) order and respect the width schedule.
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    const int width = cfg.grid[i / 2];
    CHECK(first.records[i].scale == static_cast<double>(width));
    CHECK(first.records[i].lambda == 10.0 * width);
    CHECK(first.records[i].seed == cfg.seeds[i % 2]);
    CHECK(first.records[i].delta >= 0.0);
    CHECK(std::isfinite(first.records[i].h1_error));
  }

  // A different seed list must actually change the training outcome.
  cfg.seeds = {3};
  cfg.out_path = (scratch_dir() / "net_c.csv").string();
  const SweepResult other = run_sweep(cfg);
  CHECK(other.records[0].h1_error != first.records[0].h1_error);
}

TEST_CASE("a failing grid point flushes completed records plus a nan row") {
  SweepConfig cfg;
  cfg.case_id = "interval_poisson";
  cfg.ansatz = AnsatzKind::network;
  cfg.grid = {2, 32};
  cfg.sigma = 8.0;      // lambda(32) ~ 1.1e9 makes the training blow up
  cfg.lambda0 = 1e-3;   // while lambda(2) = 0.256 trains fine
  cfg.train_iterations = 400;
  cfg.threads = 1;
  cfg.out_path = (scratch_dir() / "failing.csv").string();

  bool threw = false;
  try {
    run_sweep(cfg);
  } catch (const NumericalError& e) {
    threw = true;
    CHECK(std::string(e.what()).find(cfg.out_path) != std::string::npos);
    CHECK(std::string(e.what()).find("diverged") != std::string::npos);
  }
  CHECK(threw);

  const auto rows = lines_of(slurp(cfg.out_path));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == kSweepCsvHeader);
  const auto done = split_csv(rows[1]);
  CHECK(done[0] == "2");
  CHECK(std::isfinite(std::strtod(done[2].c_str(), nullptr)));
  const auto failed = split_csv(rows[2]);
  CHECK(failed[0] == "32");
  CHECK(std::strtod(failed[1].c_str(), nullptr) ==
        doctest::Approx(1e-3 * std::pow(32.0, 8.0)).epsilon(1e-12));
  for (int col : {2, 3, 4, 5}) CHECK(failed[col] == "nan");
  CHECK(failed[6] == "1");
}

TEST_CASE("the scale column is the true mesh size on every domain") {
  SweepConfig cfg;
  cfg.case_id = "disk_radial";
  cfg.grid = {4, 8};
  cfg.sigma = 1.0;
  cfg.lambda0 = 2.0;
  cfg.out_path = (scratch_dir() / "disk.csv").string();
  const SweepResult res = run_sweep(cfg);
  REQUIRE(res.records.size() == 2);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < 2; ++i) {
    const double h = pi / (2.0 * cfg.grid[i]);  // polar mesh size
    CHECK(res.records[i].scale == doctest::Approx(h).epsilon(1e-15));
    CHECK(res.records[i].lambda == doctest::Approx(2.0 / h).epsilon(1e-15));
    CHECK(res.records[i].h1_error < 0.2);
    CHECK(res.records[i].h1_error > 0.0);
  }
  CHECK(res.records[1].h1_error < res.records[0].h1_error);
}

TEST_CASE("refined reference replaces the closed form and skips short fits") {
  SweepConfig cfg;
  cfg.case_id = "interval_poisson";
  cfg.grid = {4, 8};
  cfg.sigma = 1.0;
  cfg.lambda0 = 1.0;
  cfg.reference = "refined";
  cfg.out_path = (scratch_dir() / "refined.csv").string();
  const SweepResult refined = run_sweep(cfg);
  REQUIRE(refined.records.size() == 2);
  CHECK(refined.fit.points.empty());  // 2 grid points: fit skipped
  CHECK(slurp(refined.sidecar_path).find("refined solve at resolution 16") !=
        std::string::npos);
  CHECK(slurp(refined.sidecar_path).find("fit = skipped") != std::string::npos);

  cfg.reference = "closed_form";
  cfg.out_path = (scratch_dir() / "refined_vs_closed.csv").string();
  const SweepResult closed = run_sweep(cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    // The refined solve approximates u_lambda of a 16x stronger penalty;
    // errors against it stay within a constant of the closed-form ones.
    CHECK(refined.records[i].h1_error >= 0.3 * closed.records[i].h1_error);
    CHECK(refined.records[i].h1_error <= 3.0 * closed.records[i].h1_error);
  }
}

#ifdef RITZPEN_CLI_PATH
namespace {

int cli(const std::string& args) {
  const std::string cmd =
      std::string(RITZPEN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli exit codes: 0 success, 1 numerical failure, 2 usage errors") {
  const auto dir = scratch_dir();
  CHECK(cli("solve --case interval_poisson --lambda 10 --resolution 16") == 0);
  CHECK(cli("rates --order 1 --smoothness 1.5 --sigma 0.5") == 0);
  CHECK(cli("steklov --modes 4") == 0);

  CHECK(cli("") == 2);                          // missing subcommand
  CHECK(cli("solve --bogus-flag") == 2);        // unknown flag
  CHECK(cli("solve --case not_a_case") == 2);   // unknown catalog id
  CHECK(cli("sweep --config /nonexistent.cfg") == 2);
  CHECK(cli("solve --case interval_poisson --lambda -3") == 2);
  CHECK(cli("steklov --modes 0") == 2);

  // Config with a key typo: usage error, not a crash.
  const auto typo_path = dir / "typo.cfg";
  std::ofstream(typo_path) << "case = interval_poisson\ngrid = 4, 8\nsigma = 1\n"
                              "lambda0 = 1\nout = " << (dir / "t.csv").string()
                           << "\nlerning_rate = 1\n";
  CHECK(cli("sweep --config " + typo_path.string()) == 2);

  // The deterministic diverging sweep maps to the numerical-failure code.
  const auto fail_path = dir / "failing.cfg";
  std::ofstream(fail_path) << "case = interval_poisson\nansatz = network\n"
                              "grid = 2, 32\nsigma = 8\nlambda0 = 1e-3\n"
                              "iterations = 400\nthreads = 1\nout = "
                           << (dir / "cli_fail.csv").string() << "\n";
  CHECK(cli("sweep --config " + fail_path.string()) == 1);

  // A good sweep through the cli, with an --out override.
  const auto ok_path = dir / "ok.cfg";
  std::ofstream(ok_path) << "case = interval_poisson\ngrid = 4, 8, 16\nsigma = 1\n"
                            "lambda0 = 4\nout = " << (dir / "unused.csv").string()
                         << "\n";
  const auto actual_out = dir / "cli_ok.csv";
  CHECK(cli("sweep --config " + ok_path.string() + " --out " + actual_out.string()) ==
        0);
  CHECK(lines_of(slurp(actual_out)).size() == 4);
}
#endif
