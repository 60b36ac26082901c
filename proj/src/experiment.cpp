#include "sobolcap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "sobolcap/datagen.hpp"
#include "sobolcap/io.hpp"

namespace sobolcap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::filesystem::path run_file(const std::filesystem::path& dir, std::size_t rho_index, std::size_t n, int run) {
  return dir / "runs" / ("rho" + std::to_string(rho_index) + "_n" + std::to_string(n) + "_run" + std::to_string(run) +
                         ".json");
}

io::Json manifest_json(const ExperimentSpec& spec) {
  io::Json j;
  j["rho_values"] = spec.rho_values;
  j["n_grid"] = spec.n_grid;
  j["runs"] = spec.runs;
  j["base_seed"] = spec.base_seed;
  j["identification"] = io::to_json(spec.identification, 3);
  return j;
}

std::optional<RunStats> load_run(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    return std::nullopt;
  }
  try {
    const auto j = io::Json::parse(io::read_file(path));
    RunStats stats{};
    for (std::size_t s = 0; s < stats.size(); ++s) {
      stats[s] = j.at(kRunStatNames[s]).get<double>();
    }
    return stats;
  } catch (const std::exception&) {
    return std::nullopt;  // half-written or foreign file: recompute
  }
}

void save_run(const std::filesystem::path& path, const RunStats& stats) {
  io::Json j;
  for (std::size_t s = 0; s < stats.size(); ++s) {
    j[kRunStatNames[s]] = stats[s];
  }
  io::write_file(path, j.dump(2) + "\n");
}

std::string figure_csv(const ExperimentSummary& summary) {
  std::ostringstream out;
  out << "n,runs";
  for (const char* name : kRunStatNames) {
    out << ',' << name << "_mean," << name << "_sd";
  }
  out << '\n';
  for (const auto& row : summary.rows) {
    out << row.n << ',' << row.runs;
    for (std::size_t s = 0; s < row.mean.size(); ++s) {
      out << ',' << io::format_double(row.mean[s]) << ',' << io::format_double(row.stddev[s]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

void ExperimentSpec::check() const {
  if (runs < 1) {
    throw SpecError("runs must be at least 1, got " + std::to_string(runs));
  }
  if (n_grid.empty()) {
    throw SpecError("n grid is empty");
  }
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] < 1) {
      throw SpecError("n grid entries must be at least 1");
    }
    if (k > 0 && n_grid[k] <= n_grid[k - 1]) {
      throw SpecError("n grid must be strictly ascending");
    }
  }
  if (rho_values.empty()) {
    throw SpecError("no rho values given");
  }
  for (double rho : rho_values) {
    if (!(std::abs(rho) < 1.0)) {
      throw SpecError("rho must satisfy |rho| < 1, got " + std::to_string(rho));
    }
  }
  identification.check(3);
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t rho_index, std::size_t n_index, int run, int stream) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ rho_index);
  h = splitmix64(h ^ n_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(run));
  return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

RunStats run_cell(const ExperimentSpec& spec, std::size_t rho_index, std::size_t n_index, int run) {
  GenSpec gen;
  gen.n = spec.n_grid.at(n_index);
  gen.m = 3;
  gen.targets = {{1, 2, spec.rho_values.at(rho_index)}};
  gen.seed = cell_seed(spec.base_seed, rho_index, n_index, run, 0);
  const auto v = generate(gen);

  auto config = spec.identification;
  config.rng_seed = cell_seed(spec.base_seed, rho_index, n_index, run, 1);
  const auto result = identify(v, config);
  const auto& ib = result.interactions;
  return {ib[singleton(1)],   ib[singleton(2)],   ib[singleton(3)], ib[pair_of(1, 2)],
          ib[pair_of(1, 3)], ib[pair_of(2, 3)], pearson(v.column(0), v.column(1))};
}

SummaryRow summarize(std::size_t n, const std::vector<RunStats>& runs) {
  SummaryRow row;
  row.n = n;
  row.runs = static_cast<int>(runs.size());
  for (std::size_t s = 0; s < row.mean.size(); ++s) {
    double mean = 0.0;
    for (const auto& r : runs) {
      mean += r[s];
    }
    mean /= static_cast<double>(runs.size());
    double acc = 0.0;
    for (const auto& r : runs) {
      acc += (r[s] - mean) * (r[s] - mean);
    }
    row.mean[s] = mean;
    row.stddev[s] = runs.size() > 1 ? std::sqrt(acc / static_cast<double>(runs.size() - 1)) : 0.0;
  }
  return row;
}

std::string figure_file_name(double rho) {
  std::ostringstream name;
  name << "figure_rho_" << (rho > 0 ? "+" : "") << io::format_double(rho == 0.0 ? 0.0 : rho) << ".csv";
  return name.str();
}

std::vector<ExperimentSummary> run_experiment(const ExperimentSpec& spec, const ExperimentOptions& options) {
  spec.check();
  if (options.jobs < 1) {
    throw ArgumentError("jobs must be at least 1");
  }
  const auto manifest_path = options.out_dir / "manifest.json";
  const auto manifest = manifest_json(spec);
  if (options.resume && std::filesystem::exists(manifest_path)) {
    const auto previous = io::Json::parse(io::read_file(manifest_path));
    if (previous != manifest) {
      throw SpecError("resume manifest in " + options.out_dir.string() + " was written for a different experiment");
    }
  }
  io::write_file(manifest_path, manifest.dump(2) + "\n");

  struct Cell {
    std::size_t rho_index;
    std::size_t n_index;
    int run;
  };
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < spec.rho_values.size(); ++r) {
    for (std::size_t k = 0; k < spec.n_grid.size(); ++k) {
      for (int run = 0; run < spec.runs; ++run) {
        cells.push_back({r, k, run});
      }
    }
  }
  std::vector<RunStats> stats(cells.size());
  std::vector<bool> pending(cells.size(), true);
  if (options.resume) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      if (auto loaded = load_run(run_file(options.out_dir, cell.rho_index, spec.n_grid[cell.n_index], cell.run))) {
        stats[c] = *loaded;
        pending[c] = false;
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{static_cast<std::size_t>(std::count(pending.begin(), pending.end(), false))};
  std::mutex report_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      if (!pending[c]) {
        continue;
      }
      {
        std::lock_guard lock(report_mutex);
        if (failure) {
          return;
        }
      }
      try {
        const auto& cell = cells[c];
        stats[c] = run_cell(spec, cell.rho_index, cell.n_index, cell.run);
        save_run(run_file(options.out_dir, cell.rho_index, spec.n_grid[cell.n_index], cell.run), stats[c]);
        const std::size_t finished = ++done;
        if (options.progress) {
          std::lock_guard lock(report_mutex);
          options.progress(finished, cells.size());
        }
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < options.jobs; ++t) {
      pool.emplace_back(worker);
    }
    worker();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  std::vector<ExperimentSummary> summaries;
  std::size_t c = 0;
  for (std::size_t r = 0; r < spec.rho_values.size(); ++r) {
    ExperimentSummary summary{spec.rho_values[r], {}};
    for (std::size_t k = 0; k < spec.n_grid.size(); ++k) {
      std::vector<RunStats> runs(stats.begin() + static_cast<std::ptrdiff_t>(c),
                                 stats.begin() + static_cast<std::ptrdiff_t>(c + static_cast<std::size_t>(spec.runs)));
      c += static_cast<std::size_t>(spec.runs);
      summary.rows.push_back(summarize(spec.n_grid[k], runs));
    }
    io::write_file(options.out_dir / figure_file_name(summary.rho), figure_csv(summary));
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

}  // namespace sobolcap
