#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "sobolcap/cli.hpp"
#include "sobolcap/io.hpp"

using namespace sobolcap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return (fs::path(SOBOLCAP_FIXTURES) / name).string(); }

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "sobolcap_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> positions(const std::string& csv) {
  std::istringstream in(csv);
  const auto rows = io::parse_csv(in);
  std::vector<std::string> out;
  for (std::size_t r = 1; r < rows.size(); ++r) out.push_back(rows[r].at(2));
  return out;
}

}  // namespace

TEST_CASE("gen writes data and a sidecar, deterministically") {
  const auto dir = scratch();
  const auto path = (dir / "gen.csv").string();
  const auto first = run({"gen", "--n", "5000", "--m", "3", "--rho", "1,2,0.68", "--seed", "7", "--out", path});
  REQUIRE(first.code == 0);
  CHECK(first.out.find("rho(1,2): target 0.68") != std::string::npos);
  const auto v = io::read_matrix_csv(fs::path(path));
  CHECK(v.rows() == 5000);
  CHECK(v.criteria() == 3);
  const auto sidecar = io::Json::parse(io::read_file(dir / "gen.spec.json"));
  CHECK(sidecar["seed"] == 7);
  CHECK(sidecar["n"] == 5000);

  const auto bytes = io::read_file(path);
  REQUIRE(run({"gen", "--n", "5000", "--m", "3", "--rho", "1,2,0.68", "--seed", "7", "--out", path}).code == 0);
  CHECK(io::read_file(path) == bytes);
  REQUIRE(run({"gen", "--n", "5000", "--m", "3", "--rho", "1,2,0.68", "--seed", "8", "--out", path}).code == 0);
  CHECK(io::read_file(path) != bytes);
}

TEST_CASE("gen rejects bad specs with exit code 2") {
  const auto path = (scratch() / "bad.csv").string();
  const auto zero = run({"gen", "--n", "0", "--out", path});
  CHECK(zero.code == 2);
  CHECK(zero.err.find("n must be at least 1") != std::string::npos);
  CHECK(run({"gen", "--n", "10", "--rho", "1,2", "--out", path}).code == 2);
  CHECK(run({"gen", "--n", "10", "--rho", "1,2,1.5", "--out", path}).code == 2);
  CHECK(run({"gen", "--out", path}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("help exits cleanly") {
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("identify") != std::string::npos);
  CHECK(run({"rank", "--help"}).code == 0);
}

TEST_CASE("rank reproduces the students example") {
  const auto wam_run = run({"rank", "--data", fixture("students.csv"), "--weights", "equal"});
  REQUIRE(wam_run.code == 0);
  CHECK(wam_run.out.rfind("alternative,overall,position\nStudent 1,", 0) == 0);
  CHECK(positions(wam_run.out) == std::vector<std::string>{"1", "3", "2"});
  CHECK(positions(run({"rank", "--data", fixture("students.csv"), "--weights", "2,2,2"}).out) ==
        std::vector<std::string>{"1", "3", "2"});

  const auto out = (scratch() / "ranking.csv").string();
  const auto ml = run({"rank", "--data", fixture("students.csv"), "--capacity", fixture("table1_capacity.json"), "--out", out});
  REQUIRE(ml.code == 0);
  CHECK(positions(ml.out) == std::vector<std::string>{"2", "3", "1"});
  CHECK(io::read_file(out) == ml.out);

  const auto learned = run({"rank", "--data", fixture("students.csv"), "--capacity", fixture("learned_capacity.json")});
  CHECK(positions(learned.out) == std::vector<std::string>{"3", "2", "1"});
}

TEST_CASE("rank edge cases") {
  const auto single = run({"rank", "--data", fixture("single_row.csv")});
  CHECK(single.code == 0);
  CHECK(positions(single.out) == std::vector<std::string>{"1"});
  const auto bad = run({"rank", "--data", fixture("students.csv"), "--capacity", fixture("nonmonotone_capacity.json")});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("invalid capacity") != std::string::npos);
  CHECK(run({"rank", "--data", fixture("students.csv"), "--weights", "1,2"}).code == 2);
  CHECK(run({"rank", "--data", fixture("students.csv"), "--weights", "equal", "--capacity",
             fixture("table1_capacity.json")})
            .code == 2);
  CHECK(run({"rank", "--data", "/nonexistent.csv"}).code == 2);
}

TEST_CASE("rank normalizes raw scores on request") {
  const auto path = scratch() / "raw.csv";
  io::write_file(path, "x,y\n10,5\n20,1\n30,3\n");
  CHECK(run({"rank", "--data", path.string()}).code == 2);
  const auto r = run({"rank", "--data", path.string(), "--normalize"});
  CHECK(r.code == 0);
  CHECK(positions(r.out) == std::vector<std::string>{"2", "3", "1"});
}

TEST_CASE("sobol report carries exact analytic rows") {
  const auto dir = scratch();
  const auto data = (dir / "sobol_data.csv").string();
  REQUIRE(run({"gen", "--n", "2000", "--rho", "1,2,0.68", "--seed", "3", "--out", data}).code == 0);
  const auto capacity = fixture("learned_capacity.json");
  const auto r = run({"sobol", "--data", data, "--capacity", capacity, "--orders", "1,2"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const auto reports = io::read_sobol_csv(in, 3);
  REQUIRE(reports.size() == 12);
  const auto ib = banzhaf_from_capacity(io::read_capacity_json(capacity));
  int analytic_rows = 0;
  for (const auto& rep : reports) {
    CHECK(rep.sample_size == (rep.estimator == Estimator::AnalyticBanzhaf ? 0u : 2000u));
    if (rep.estimator == Estimator::AnalyticBanzhaf) {
      ++analytic_rows;
      CHECK(rep.raw_variance == ib[rep.subset] * ib[rep.subset] / std::pow(12.0, cardinality(rep.subset)));
    }
  }
  CHECK(analytic_rows == 6);
  // Criterion 1 sits in the correlated block, so its empirical index exceeds the analytic one.
  CHECK(reports[0].estimator == Estimator::EmpiricalSlices);
  CHECK(reports[0].subset == 1);
  CHECK(reports[0].raw_variance > 1.5 * reports[1].raw_variance);

  std::ostringstream again;
  io::write_sobol_csv(again, reports);
  CHECK(again.str() == r.out);
}

TEST_CASE("sobol on degenerate data") {
  const auto path = scratch() / "flat.csv";
  io::write_file(path, "a,b,c\n0.4,0.2,0.9\n0.4,0.2,0.9\n0.4,0.2,0.9\n");
  const auto r = run({"sobol", "--data", path.string(), "--capacity", fixture("table1_capacity.json")});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  std::istringstream in(r.out);
  for (const auto& rep : io::read_sobol_csv(in, 3)) {
    if (rep.estimator == Estimator::EmpiricalSlices) {
      CHECK(rep.raw_variance == 0.0);
      CHECK(std::isnan(rep.normalized));
    }
  }
  CHECK(run({"sobol", "--data", path.string(), "--capacity", fixture("table1_capacity.json"), "--normalized"}).code == 4);
  CHECK(run({"sobol", "--data", path.string(), "--capacity", fixture("nonmonotone_capacity.json")}).code == 3);
  CHECK(run({"sobol", "--data", path.string(), "--capacity", fixture("table1_capacity.json"), "--orders", "3"}).code == 2);
}

TEST_CASE("identify writes deterministic JSON and a readable summary") {
  const auto dir = scratch();
  const auto data = (dir / "identify.csv").string();
  REQUIRE(run({"gen", "--n", "5000", "--rho", "1,2,0.68", "--seed", "11", "--out", data}).code == 0);
  const auto a = (dir / "a.json").string();
  const auto b = (dir / "b.json").string();
  const auto first = run({"identify", "--data", data, "--seed", "5", "--out", a});
  REQUIRE(first.code == 0);
  REQUIRE(run({"identify", "--data", data, "--seed", "5", "--out", b}).code == 0);
  CHECK(io::read_file(a) == io::read_file(b));
  CHECK(first.out.find("I(1,2) = -") != std::string::npos);
  CHECK(first.out.find("(redundant)") != std::string::npos);

  const auto j = io::Json::parse(io::read_file(a));
  CHECK(j["seed"] == 5);
  const auto mu = io::capacity_from_json(j["capacity"]);
  CHECK(validate(mu).ok());
  const auto ib = banzhaf_from_capacity(mu);
  CHECK(ib[pair_of(1, 2)] < 0.0);
  CHECK(ib[singleton(3)] > std::max(ib[singleton(1)], ib[singleton(2)]));

  CHECK(run({"identify", "--data", data, "--singleton", "0.9"}).code == 2);
  CHECK(run({"identify", "--data", data, "--orders", "5"}).code == 2);
}

TEST_CASE("config file mirrors flags and flags win") {
  const auto dir = scratch();
  const auto config = dir / "config.json";
  const auto path = (dir / "from_config.csv").string();
  io::write_file(config, io::Json{{"gen", {{"n", 40}, {"m", 4}, {"seed", 3}, {"out", path}, {"rho", {"1,2,0.5"}}}}}.dump());
  REQUIRE(run({"--config", config.string(), "gen"}).code == 0);
  const auto v = io::read_matrix_csv(fs::path(path));
  CHECK(v.rows() == 40);
  CHECK(v.criteria() == 4);
  REQUIRE(run({"--config", config.string(), "gen", "--n", "25"}).code == 0);
  CHECK(io::read_matrix_csv(fs::path(path)).rows() == 25);

  io::write_file(config, "{not json");
  CHECK(run({"--config", config.string(), "gen"}).code == 2);
}

TEST_CASE("experiment command writes figure data") {
  const auto dir = scratch() / "experiment";
  fs::remove_all(dir);
  const auto r = run({"experiment", "--rho", "0.75", "--n-grid", "200", "400", "--runs", "2", "--seed", "1", "--jobs",
                      "2", "--max-iter", "10", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "figure_rho_+0.75.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(r.out.find("rho = 0.75") != std::string::npos);
  CHECK(run({"experiment", "--runs", "0", "--out-dir", dir.string()}).code == 2);
  fs::remove_all(dir);
}
