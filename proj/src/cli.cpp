#include "sobolcap/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "sobolcap/aggregation.hpp"
#include "sobolcap/datagen.hpp"
#include "sobolcap/experiment.hpp"
#include "sobolcap/identification.hpp"
#include "sobolcap/io.hpp"
#include "sobolcap/sobol.hpp"

namespace sobolcap::cli {

namespace {

class InvalidCapacity : public Error {
public:
  using Error::Error;
};

/// Reads CLI11 configuration from JSON. Nested objects name subcommands:
/// {"identify": {"seed": 3, "orders": [1]}} sets `identify --seed 3 --orders 1`.
class JsonConfig : public CLI::Config {
public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    io::Json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        const auto results = opt->results();
        if (!results.empty()) {
          j[opt->get_lnames()[0]] = results.size() == 1 ? io::Json(results[0]) : io::Json(results);
        } else if (default_also && !opt->get_default_str().empty()) {
          j[opt->get_lnames()[0]] = opt->get_default_str();
        }
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    io::Json j;
    try {
      j = io::Json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

private:
  static std::string scalar(const io::Json& value) {
    if (value.is_string()) {
      return value.get<std::string>();
    }
    return value.dump();
  }

  static void collect(const io::Json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& element : value) {
          item.inputs.push_back(scalar(element));
        }
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, separator)) {
    out.push_back(item);
  }
  return out;
}

std::vector<int> parse_orders(const std::vector<std::string>& raw) {
  std::vector<int> out;
  for (const auto& group : raw) {
    for (const auto& item : split(group, ',')) {
      out.push_back(static_cast<int>(io::parse_double(item)));
    }
  }
  return out;
}

PairTarget parse_target(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) {
    throw SpecError("correlation target '" + text + "' must look like j,k,rho");
  }
  return {static_cast<int>(io::parse_double(parts[0])), static_cast<int>(io::parse_double(parts[1])),
          io::parse_double(parts[2])};
}

WeightVector parse_weights(const std::string& text, std::size_t m) {
  if (text == "equal") {
    return WeightVector::equal(m);
  }
  std::vector<double> w;
  for (const auto& item : split(text, ',')) {
    w.push_back(io::parse_double(item));
  }
  if (w.size() != m) {
    throw DimensionError("got " + std::to_string(w.size()) + " weights for " + std::to_string(m) + " criteria");
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(sum > 0.0)) {
    throw DomainError("weights must have a positive sum");
  }
  for (double& x : w) {
    x /= sum;
  }
  return WeightVector(std::move(w));
}

Capacity load_valid_capacity(const std::string& path) {
  auto mu = io::read_capacity_json(path);
  const auto report = validate(mu);
  if (!report.ok()) {
    throw InvalidCapacity(path + ": " + report.describe());
  }
  return mu;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

std::string alternative_name(const DecisionMatrix& v, std::size_t i) {
  return v.labels() ? (*v.labels())[i] : std::to_string(i + 1);
}

std::string list(std::span<const double> values, int precision = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << '[';
  for (std::size_t k = 0; k < values.size(); ++k) {
    out << (k ? ", " : "") << values[k];
  }
  out << ']';
  return out.str();
}

/// Identification flags shared by `identify` and `experiment`.
struct IdentifyFlags {
  double singleton = 0.0;  ///< 0 means 1/m
  std::vector<std::string> orders{"1"};
  int slices = 20;
  int min_population = 1;
  double gs_tolerance = 1e-6;
  double objective_tolerance = 1e-10;
  int max_iterations = 500;
  int starts = 1;
  bool normalized = false;

  void attach(CLI::App* app) {
    app->add_option("--singleton", singleton, "Common singleton capacity mu({j}) (default 1/m)");
    app->add_option("--orders", orders, "Subset cardinalities whose Sobol' indices are equalized (1 and/or 2)")
        ->delimiter(',');
    app->add_option("--slices", slices, "Equal-width slices per conditioning criterion")->capture_default_str();
    app->add_option("--min-population", min_population, "Cells with fewer rows are left out of variances")
        ->capture_default_str();
    app->add_option("--gs-tol", gs_tolerance, "Golden-section bracket width at which to stop")->capture_default_str();
    app->add_option("--obj-tol", objective_tolerance, "Improvement below which an outer step counts as stagnant")
        ->capture_default_str();
    app->add_option("--max-iter", max_iterations, "Maximum outer iterations")->capture_default_str();
    app->add_option("--starts", starts, "Number of starts (the first is the additive capacity)")->capture_default_str();
    app->add_flag("--normalized", normalized, "Equalize normalized instead of raw Sobol' indices");
  }

  IdentificationConfig config(std::uint64_t seed) const {
    IdentificationConfig c;
    if (singleton != 0.0) {
      c.singleton_value = singleton;
    }
    c.objective_orders = parse_orders(orders);
    c.slices.slice_count = slices;
    c.slices.min_slice_population = min_population;
    c.gs_tolerance = gs_tolerance;
    c.objective_tolerance = objective_tolerance;
    c.max_outer_iterations = max_iterations;
    c.rng_seed = seed;
    c.normalized = normalized;
    c.starts = starts;
    return c;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised 2-additive capacity identification for the multilinear model by Sobol' index balancing",
               "sobolcap"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the flags; flags given on the command line take precedence");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a decision matrix with uniform marginals and correlated pairs");
  GenSpec gen_spec;
  gen_spec.m = 3;
  std::vector<std::string> gen_targets;
  std::string gen_out;
  gen->add_option("--n", gen_spec.n, "Number of alternatives")->required();
  gen->add_option("--m", gen_spec.m, "Number of criteria")->capture_default_str();
  gen->add_option("--rho", gen_targets, "Pearson correlation target j,k,rho (repeatable)");
  gen->add_option("--seed", gen_spec.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV; a .spec.json sidecar is written next to it")->required();

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Aggregate and rank alternatives (WAM or multilinear model)");
  std::string rank_data;
  std::string rank_weights;
  std::string rank_capacity;
  std::string rank_out;
  bool rank_normalize = false;
  rank_cmd->add_option("--data", rank_data, "Decision matrix CSV")->required();
  auto* weights_opt = rank_cmd->add_option("--weights", rank_weights, "WAM weights w1,...,wm (rescaled to sum 1) or 'equal'");
  auto* capacity_opt = rank_cmd->add_option("--capacity", rank_capacity, "Capacity JSON for the multilinear model");
  weights_opt->excludes(capacity_opt);
  rank_cmd->add_flag("--normalize", rank_normalize, "Min-max normalize each column to [0,1] first");
  rank_cmd->add_option("--out", rank_out, "Also write the ranking CSV here");

  // sobol
  auto* sobol_cmd = app.add_subcommand("sobol", "Empirical and analytic Sobol' indices of the multilinear model");
  std::string sobol_data;
  std::string sobol_capacity;
  std::string sobol_out;
  std::vector<std::string> sobol_orders{"1"};
  SliceConfig sobol_slices;
  bool sobol_normalize_data = false;
  bool sobol_normalized = false;
  sobol_cmd->add_option("--data", sobol_data, "Decision matrix CSV")->required();
  sobol_cmd->add_option("--capacity", sobol_capacity, "Capacity JSON")->required();
  sobol_cmd->add_option("--orders", sobol_orders, "Subset cardinalities to report (1 and/or 2)")->delimiter(',');
  sobol_cmd->add_option("--slices", sobol_slices.slice_count, "Equal-width slices per criterion")->capture_default_str();
  sobol_cmd->add_option("--min-population", sobol_slices.min_slice_population, "Minimum rows per counted cell")
      ->capture_default_str();
  sobol_cmd->add_flag("--normalized", sobol_normalized, "Fail if Var[Y] = 0 (normalized indices required)");
  sobol_cmd->add_flag("--normalize", sobol_normalize_data, "Min-max normalize each column to [0,1] first");
  sobol_cmd->add_option("--out", sobol_out, "Report CSV (default stdout)");

  // identify
  auto* identify_cmd = app.add_subcommand("identify", "Identify a 2-additive capacity that balances Sobol' indices");
  std::string identify_data;
  std::string identify_out;
  std::uint64_t identify_seed = 0;
  bool identify_normalize = false;
  IdentifyFlags identify_flags;
  identify_cmd->add_option("--data", identify_data, "Decision matrix CSV")->required();
  identify_cmd->add_option("--seed", identify_seed, "Seed for the pair-role draws")->capture_default_str();
  identify_cmd->add_option("--out", identify_out, "Result JSON");
  identify_cmd->add_flag("--normalize", identify_normalize, "Min-max normalize each column to [0,1] first");
  identify_flags.attach(identify_cmd);

  // experiment
  auto* experiment_cmd =
      app.add_subcommand("experiment", "Monte Carlo sweep over correlation and number of alternatives (figure data)");
  ExperimentSpec experiment_spec;
  std::string experiment_dir;
  int experiment_jobs = 1;
  bool experiment_resume = false;
  IdentifyFlags experiment_flags;
  experiment_cmd->add_option("--rho", experiment_spec.rho_values, "Correlation levels between criteria 1 and 2")
      ->delimiter(',')
      ->capture_default_str();
  experiment_cmd->add_option("--n-grid", experiment_spec.n_grid, "Numbers of alternatives (ascending)")
      ->delimiter(',')
      ->capture_default_str();
  experiment_cmd->add_option("--runs", experiment_spec.runs, "Simulations per grid cell")->capture_default_str();
  experiment_cmd->add_option("--seed", experiment_spec.base_seed, "Base seed")->capture_default_str();
  experiment_cmd->add_option("--jobs", experiment_jobs, "Concurrent runs")->capture_default_str();
  experiment_cmd->add_option("--out-dir", experiment_dir, "Directory for figure CSVs, per-run files and manifest")
      ->required();
  experiment_cmd->add_flag("--resume", experiment_resume, "Reuse finished per-run files from an interrupted sweep");
  experiment_flags.attach(experiment_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help is routed here too.
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (gen->parsed()) {
      for (const auto& t : gen_targets) {
        gen_spec.targets.push_back(parse_target(t));
      }
      const auto v = generate(gen_spec);
      std::ostringstream csv;
      io::write_matrix_csv(csv, v);
      io::write_file(gen_out, csv.str());
      auto sidecar = std::filesystem::path(gen_out);
      sidecar.replace_extension(".spec.json");
      io::write_file(sidecar, io::to_json(gen_spec).dump(2) + "\n");
      for (const auto& t : gen_spec.targets) {
        out << "rho(" << t.j << "," << t.k << "): target " << t.rho << ", sample "
            << pearson(v.column(static_cast<std::size_t>(t.j - 1)), v.column(static_cast<std::size_t>(t.k - 1))) << '\n';
      }
      out << "wrote " << v.rows() << " alternatives x " << v.criteria() << " criteria to " << gen_out << '\n';
      return kOk;
    }

    if (rank_cmd->parsed()) {
      const auto v = io::read_matrix_csv(rank_data, {rank_normalize});
      std::vector<double> overall;
      if (!rank_capacity.empty()) {
        const auto mu = load_valid_capacity(rank_capacity);
        overall = multilinear(v, mu);
      } else {
        overall = wam(v, parse_weights(rank_weights.empty() ? "equal" : rank_weights, v.criteria()));
      }
      const auto ranking = rank(overall);
      std::ostringstream csv;
      csv << "alternative,overall,position\n";
      for (std::size_t i = 0; i < v.rows(); ++i) {
        csv << io::csv_field(alternative_name(v, i)) << ',' << io::format_double(ranking.overall[i]) << ','
            << ranking.positions[i] << '\n';
      }
      out << csv.str();
      if (!rank_out.empty()) {
        io::write_file(rank_out, csv.str());
      }
      return kOk;
    }

    if (sobol_cmd->parsed()) {
      const auto v = io::read_matrix_csv(sobol_data, {sobol_normalize_data});
      const auto mu = load_valid_capacity(sobol_capacity);
      if (static_cast<std::size_t>(mu.criteria()) != v.criteria()) {
        throw DimensionError("capacity has " + std::to_string(mu.criteria()) + " criteria, data has " +
                             std::to_string(v.criteria()));
      }
      if (!sobol_slices.adequate_for(v.rows())) {
        err << "warning: " << v.rows() << " rows for " << sobol_slices.slice_count
            << " slices; estimates will be noisy (recommend n >= 10 x slices)\n";
      }
      const auto y = multilinear(v, mu);
      const auto ib = banzhaf_from_capacity(mu);
      std::vector<SobolReport> reports;
      for (int k : parse_orders(sobol_orders)) {
        if (k < 1 || k > 2) {
          throw ArgumentError("Sobol' order " + std::to_string(k) + " unsupported (use 1 or 2)");
        }
        for (Subset a : mu.index().of_cardinality(k)) {
          reports.push_back(sobol_empirical(y, v, a, sobol_slices, sobol_normalized));
          reports.push_back(analytic_report(ib, a));
        }
      }
      std::ostringstream csv;
      io::write_sobol_csv(csv, reports);
      emit(sobol_out, csv.str(), out);
      return kOk;
    }

    if (identify_cmd->parsed()) {
      const auto v = io::read_matrix_csv(identify_data, {identify_normalize});
      const auto config = identify_flags.config(identify_seed);
      if (!config.slices.adequate_for(v.rows())) {
        err << "warning: " << v.rows() << " rows for " << config.slices.slice_count
            << " slices; the objective will be noisy (recommend n >= 10 x slices)\n";
      }
      const auto result = identify(v, config);
      if (!identify_out.empty()) {
        io::write_file(identify_out, io::to_json(result, config).dump(2) + "\n");
      }
      const auto& ib = result.interactions;
      out << "capacity      " << list(result.capacity.display_order()) << '\n';
      out << "interactions  " << list(ib.display_order()) << '\n';
      out << "power indices";
      for (int j = 1; j <= ib.criteria(); ++j) {
        out << "  phi" << j << " = " << std::fixed << std::setprecision(4) << ib[singleton(j)];
      }
      out << '\n';
      for (const auto& [j, k] : pair_list(ib.criteria())) {
        out << "I(" << j << "," << k << ") = " << std::fixed << std::setprecision(4) << ib[pair_of(j, k)]
            << (ib[pair_of(j, k)] < 0 ? "  (redundant)" : ib[pair_of(j, k)] > 0 ? "  (complementary)" : "") << '\n';
      }
      out << "Sobol' before " << list(result.sobol_before, 5) << '\n';
      out << "Sobol' after  " << list(result.sobol_after, 5) << '\n';
      out << "objective     " << std::scientific << std::setprecision(3) << result.objective_trace.front() << " -> "
          << result.objective_trace.back() << " after " << result.iterations << " iterations"
          << (result.converged ? " (converged)" : " (iteration limit)") << '\n';
      return kOk;
    }

    if (experiment_cmd->parsed()) {
      experiment_spec.identification = experiment_flags.config(0);
      experiment_spec.check();
      const double rows = static_cast<double>(std::accumulate(experiment_spec.n_grid.begin(),
                                                              experiment_spec.n_grid.end(), std::size_t{0})) *
                          experiment_spec.runs * static_cast<double>(experiment_spec.rho_values.size());
      if (rows > 5e6) {
        err << "warning: this sweep identifies capacities on " << rows
            << " generated alternatives in total and may take a long time; use --runs/--n-grid/--jobs to scale it\n";
      }
      ExperimentOptions options;
      options.out_dir = experiment_dir;
      options.jobs = experiment_jobs;
      options.resume = experiment_resume;
      const auto summaries = run_experiment(experiment_spec, options);
      for (const auto& summary : summaries) {
        out << "rho = " << summary.rho << " -> " << (std::filesystem::path(experiment_dir) / figure_file_name(summary.rho)).string()
            << '\n';
        out << "       n   phi1     phi2     phi3     I12      I13      I23\n";
        for (const auto& row : summary.rows) {
          out << std::setw(8) << row.n << std::fixed << std::setprecision(4);
          for (std::size_t s = 0; s < 6; ++s) {
            out << ' ' << std::setw(8) << row.mean[s];
          }
          out << '\n';
        }
      }
      return kOk;
    }
  } catch (const InvalidCapacity& e) {
    err << "error: invalid capacity: " << e.what() << '\n';
    return kInvalidCapacity;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace sobolcap::cli
