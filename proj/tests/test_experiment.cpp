#include <doctest.h>

#include <filesystem>
#include <set>

#include "sobolcap/experiment.hpp"
#include "sobolcap/io.hpp"

using namespace sobolcap;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.rho_values = {0.75, 0.0};
  spec.n_grid = {200, 400};
  spec.runs = 3;
  spec.base_seed = 77;
  spec.identification.max_outer_iterations = 20;
  return spec;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sobolcap_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("cell seeds are distinct across cells and streams") {
  std::set<std::uint64_t> seen;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < 7; ++k)
      for (int run = 0; run < 20; ++run)
        for (int stream = 0; stream < 2; ++stream) seen.insert(cell_seed(1, r, k, run, stream));
  CHECK(seen.size() == 3 * 7 * 20 * 2);
  CHECK(cell_seed(1, 0, 0, 0, 0) == cell_seed(1, 0, 0, 0, 0));
  CHECK(cell_seed(1, 0, 0, 0, 0) != cell_seed(2, 0, 0, 0, 0));
}

TEST_CASE("summary statistics") {
  std::vector<RunStats> runs(3);
  for (int r = 0; r < 3; ++r) runs[r].fill(static_cast<double>(r + 1));
  const auto row = summarize(100, runs);
  CHECK(row.n == 100);
  CHECK(row.runs == 3);
  CHECK(row.mean[0] == doctest::Approx(2.0));
  CHECK(row.stddev[3] == doctest::Approx(1.0));
  CHECK(summarize(5, {runs[0]}).stddev[0] == 0.0);
}

TEST_CASE("figure file names") {
  CHECK(figure_file_name(0.75) == "figure_rho_+0.75.csv");
  CHECK(figure_file_name(0.0) == "figure_rho_0.csv");
  CHECK(figure_file_name(-0.0) == "figure_rho_0.csv");
  CHECK(figure_file_name(-0.75) == "figure_rho_-0.75.csv");
}

TEST_CASE("sweep validation") {
  auto spec = small_spec();
  spec.runs = 0;
  CHECK_THROWS_AS(spec.check(), SpecError);
  spec = small_spec();
  spec.n_grid = {400, 200};
  CHECK_THROWS_AS(spec.check(), SpecError);
  spec = small_spec();
  spec.rho_values = {1.0};
  CHECK_THROWS_AS(spec.check(), SpecError);
  spec = small_spec();
  spec.identification.objective_orders = {3};
  CHECK_THROWS_AS(spec.check(), ArgumentError);
}

TEST_CASE("experiment writes figure data, is deterministic and resumes") {
  const auto spec = small_spec();
  const auto a_dir = fresh_dir("exp_a");
  const auto b_dir = fresh_dir("exp_b");
  std::size_t calls = 0;
  const auto a = run_experiment(spec, {a_dir, 1, false, [&](std::size_t, std::size_t total) {
                                         ++calls;
                                         CHECK(total == 12);
                                       }});
  CHECK(calls == 12);
  const auto b = run_experiment(spec, {b_dir, 3, false, {}});
  REQUIRE(a.size() == 2);
  CHECK(a[0].rows.size() == 2);
  CHECK(a[0].rows[1].runs == 3);
  for (const char* name : {"figure_rho_+0.75.csv", "figure_rho_0.csv", "manifest.json"}) {
    CHECK(io::read_file(a_dir / name) == io::read_file(b_dir / name));
  }
  const auto csv = io::read_file(a_dir / "figure_rho_+0.75.csv");
  CHECK(csv.rfind("n,runs,phi1_mean,phi1_sd,phi2_mean,phi2_sd,phi3_mean,phi3_sd,I12_mean,I12_sd,", 0) == 0);
  CHECK(a[0].rows[1].mean[6] > 0.6);
  CHECK(std::abs(a[1].rows[1].mean[6]) < 0.15);

  // Simulate an interruption: drop one run file and mark another as foreign.
  const auto runs_dir = a_dir / "runs";
  CHECK(std::distance(fs::directory_iterator(runs_dir), fs::directory_iterator{}) == 12);
  fs::remove(runs_dir / "rho1_n400_run2.json");
  io::write_file(runs_dir / "rho0_n200_run0.json", "{\"truncated\n");
  const auto before = io::read_file(a_dir / "figure_rho_0.csv");
  fs::remove(a_dir / "figure_rho_0.csv");
  calls = 0;
  run_experiment(spec, {a_dir, 2, true, [&](std::size_t, std::size_t) { ++calls; }});
  CHECK(calls == 2);
  CHECK(io::read_file(a_dir / "figure_rho_0.csv") == before);
  CHECK(io::read_file(a_dir / "figure_rho_+0.75.csv") == csv);

  auto other = spec;
  other.runs = 4;
  CHECK_THROWS_AS(run_experiment(other, {a_dir, 1, true, {}}), SpecError);
  fs::remove_all(a_dir);
  fs::remove_all(b_dir);
}
