#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sobolcap/identification.hpp"

namespace sobolcap {

/// Interaction statistics tracked per identification run on 3 criteria.
inline constexpr std::array<const char*, 7> kRunStatNames = {"phi1", "phi2", "phi3", "I12",
                                                             "I13",  "I23",  "rho12"};
using RunStats = std::array<double, kRunStatNames.size()>;

/// Monte Carlo sweep over correlation levels and numbers of alternatives.
struct ExperimentSpec {
  std::vector<double> rho_values{0.75, 0.0, -0.75};
  std::vector<std::size_t> n_grid{100, 250, 500, 1000, 2500, 5000, 10000};
  int runs = 100;
  std::uint64_t base_seed = 0;
  IdentificationConfig identification;

  /// Throws SpecError: runs >= 1, nonempty ascending n_grid, |rho| < 1.
  void check() const;
};

struct SummaryRow {
  std::size_t n = 0;
  int runs = 0;
  RunStats mean{};
  RunStats stddev{};  ///< sample standard deviation over runs (0 for a single run)
};

struct ExperimentSummary {
  double rho = 0.0;
  std::vector<SummaryRow> rows;  ///< one per n_grid entry
};

/// Seed for (rho, n, run, stream) cells, mixed with SplitMix64 so that
/// neighbouring cells get unrelated streams. stream 0 feeds data
/// generation, stream 1 the optimizer.
std::uint64_t cell_seed(std::uint64_t base, std::size_t rho_index, std::size_t n_index, int run, int stream);

/// One identification on freshly generated data for grid cell (rho, n, run).
RunStats run_cell(const ExperimentSpec& spec, std::size_t rho_index, std::size_t n_index, int run);

struct ExperimentOptions {
  std::filesystem::path out_dir;
  int jobs = 1;
  /// Reuse per-run files already present in out_dir/runs.
  bool resume = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Runs every cell (concurrently up to `jobs`), writing out_dir/manifest.json
/// first and one out_dir/runs/*.json per finished cell, then one figure CSV
/// per rho value. Returns the summaries in rho_values order.
std::vector<ExperimentSummary> run_experiment(const ExperimentSpec& spec, const ExperimentOptions& options);

/// File name of the figure CSV for a rho value, e.g. "figure_rho_+0.75.csv".
std::string figure_file_name(double rho);

/// Mean and sample standard deviation per statistic.
SummaryRow summarize(std::size_t n, const std::vector<RunStats>& runs);

}  // namespace sobolcap
