#include "sobolcap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sobolcap::io {

std::string format_double(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  if (begin < end && text[begin] == '+') {
    ++begin;
  }
  double value = 0.0;
  const auto result = std::from_chars(text.data() + begin, text.data() + end, value);
  if (begin == end || result.ec != std::errc() || result.ptr != text.data() + end) {
    throw ParseError("'" + text + "' is not a decimal number");
  }
  return value;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_started = false;
  char c = 0;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_started = true;
    } else if (c == '\r') {
      // Dropped; '\n' ends the row.
    } else if (c == '\n') {
      if (row_started || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      field.clear();
      row.clear();
      row_started = false;
    } else {
      field += c;
      row_started = true;
    }
  }
  if (quoted) {
    throw ParseError("unterminated quoted CSV field");
  }
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) {
    return text;
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

namespace {

bool is_number(const std::string& text) {
  try {
    parse_double(text);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace

DecisionMatrix read_matrix_csv(std::istream& in, const MatrixReadOptions& options) {
  const auto rows = parse_csv(in);
  if (rows.empty()) {
    throw ParseError("decision matrix CSV is empty");
  }
  if (rows.size() < 2) {
    throw ParseError("decision matrix CSV has a header but no alternatives");
  }
  const auto& header = rows.front();
  bool labelled = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (!rows[r].empty() && !is_number(rows[r][0])) {
      labelled = true;
      break;
    }
  }
  const std::size_t first = labelled ? 1 : 0;
  if (header.size() <= first) {
    throw ParseError("decision matrix CSV header names no criteria");
  }
  const std::size_t m = header.size() - first;
  const std::size_t n = rows.size() - 1;
  std::vector<double> values;
  values.reserve(n * m);
  std::vector<std::string> labels;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw ParseError("CSV line " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    if (labelled) {
      labels.push_back(rows[r][0]);
    }
    for (std::size_t j = first; j < header.size(); ++j) {
      try {
        values.push_back(parse_double(rows[r][j]));
      } catch (const ParseError& e) {
        throw ParseError("CSV line " + std::to_string(r + 1) + ", column " + std::to_string(j + 1) + ": " + e.what());
      }
    }
  }
  if (options.normalize) {
    for (std::size_t j = 0; j < m; ++j) {
      double lo = values[j];
      double hi = values[j];
      for (std::size_t i = 0; i < n; ++i) {
        lo = std::min(lo, values[i * m + j]);
        hi = std::max(hi, values[i * m + j]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        double& x = values[i * m + j];
        x = (hi > lo) ? (x - lo) / (hi - lo) : 0.5;
      }
    }
  }
  DecisionMatrix v(n, m, std::move(values));
  v.set_criterion_names(std::vector<std::string>(header.begin() + static_cast<std::ptrdiff_t>(first), header.end()));
  if (labelled) {
    v.set_labels(std::move(labels));
  }
  return v;
}

DecisionMatrix read_matrix_csv(const std::filesystem::path& path, const MatrixReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  return read_matrix_csv(in, options);
}

void write_matrix_csv(std::ostream& out, const DecisionMatrix& v) {
  const bool labelled = v.labels().has_value();
  if (labelled) {
    out << "label,";
  }
  for (std::size_t j = 0; j < v.criteria(); ++j) {
    out << (j ? "," : "") << csv_field(v.criterion_names()[j]);
  }
  out << '\n';
  for (std::size_t i = 0; i < v.rows(); ++i) {
    if (labelled) {
      out << csv_field((*v.labels())[i]) << ',';
    }
    for (std::size_t j = 0; j < v.criteria(); ++j) {
      out << (j ? "," : "") << format_double(v(i, j));
    }
    out << '\n';
  }
}

namespace {

template <class Tag>
SetFunction<Tag> set_function_from_json(const Json& j, const char* what) {
  try {
    const int m = j.at("m").get<int>();
    if (j.contains("ordering") && j.at("ordering").get<std::string>() != "paper-list") {
      throw ParseError(std::string(what) + " JSON has unsupported ordering '" + j.at("ordering").get<std::string>() +
                       "'");
    }
    const auto values = j.at("values").get<std::vector<double>>();
    return SetFunction<Tag>::from_display_order(CriteriaIndex(m), values);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

}  // namespace

Capacity capacity_from_json(const Json& j) { return set_function_from_json<CapacityTag>(j, "capacity"); }

InteractionVector interaction_from_json(const Json& j) {
  return set_function_from_json<InteractionTag>(j, "interaction");
}

Capacity read_capacity_json(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return capacity_from_json(j);
}

template <class Tag>
void write_set_function_csv(std::ostream& out, const SetFunction<Tag>& f) {
  out << "subset,cardinality,value\n";
  for (Subset s : f.index().display_order()) {
    out << '"' << format_subset(s) << "\"," << cardinality(s) << ',' << format_double(f[s]) << '\n';
  }
}

template void write_set_function_csv(std::ostream&, const Capacity&);
template void write_set_function_csv(std::ostream&, const InteractionVector&);
template void write_set_function_csv(std::ostream&, const FourierVector&);

void write_sobol_csv(std::ostream& out, std::span<const SobolReport> reports) {
  out << "subset,order,raw,normalized,estimator,n\n";
  for (const auto& r : reports) {
    out << '"' << format_subset(r.subset) << "\"," << cardinality(r.subset) << ',' << format_double(r.raw_variance)
        << ',' << (std::isnan(r.normalized) ? std::string("nan") : format_double(r.normalized)) << ','
        << to_string(r.estimator) << ',' << r.sample_size << '\n';
  }
}

std::vector<SobolReport> read_sobol_csv(std::istream& in, int m) {
  const auto rows = parse_csv(in);
  if (rows.empty() || rows.front() != std::vector<std::string>{"subset", "order", "raw", "normalized", "estimator", "n"}) {
    throw ParseError("Sobol' report CSV lacks the expected header");
  }
  std::vector<SobolReport> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 6) {
      throw ParseError("Sobol' report line " + std::to_string(r + 1) + " needs 6 fields");
    }
    SobolReport report;
    report.subset = parse_subset(row[0], m);
    report.raw_variance = parse_double(row[2]);
    report.normalized = row[3] == "nan" ? std::nan("") : parse_double(row[3]);
    report.estimator = estimator_from_string(row[4]);
    report.sample_size = static_cast<std::size_t>(std::stoull(row[5]));
    out.push_back(report);
  }
  return out;
}

Json to_json(const GenSpec& spec) {
  Json j;
  j["n"] = spec.n;
  j["m"] = spec.m;
  Json targets = Json::array();
  for (const auto& t : spec.targets) {
    targets.push_back({{"j", t.j}, {"k", t.k}, {"rho", t.rho}, {"latent_rho", latent_correlation(t.rho)}});
  }
  j["targets"] = targets;
  j["seed"] = spec.seed;
  j["mechanism"] = "gaussian-copula";
  return j;
}

Json to_json(const IdentificationConfig& config, int m) {
  Json j;
  j["singleton_value"] = config.singleton_for(m);
  j["objective_orders"] = config.objective_orders;
  j["slice_count"] = config.slices.slice_count;
  j["min_slice_population"] = config.slices.min_slice_population;
  j["gs_tolerance"] = config.gs_tolerance;
  j["objective_tolerance"] = config.objective_tolerance;
  j["max_outer_iterations"] = config.max_outer_iterations;
  j["normalized"] = config.normalized;
  j["starts"] = config.starts;
  return j;
}

Json to_json(const IdentificationResult& result, const IdentificationConfig& config) {
  Json j;
  j["capacity"] = to_json(result.capacity);
  j["interactions"] = to_json(result.interactions);
  j["sobol_before"] = result.sobol_before;
  j["sobol_after"] = result.sobol_after;
  j["objective_trace"] = result.objective_trace;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["best_start"] = result.best_start;
  j["config"] = to_json(config, result.capacity.criteria());
  j["seed"] = config.rng_seed;
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ParseError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
      throw ParseError("failed writing " + path.string());
    }
  }
  std::filesystem::rename(temp, path);
}

}  // namespace sobolcap::io
