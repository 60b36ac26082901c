#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sobolcap/aggregation.hpp"
#include "sobolcap/capacity.hpp"
#include "sobolcap/datagen.hpp"
#include "sobolcap/identification.hpp"
#include "sobolcap/sobol.hpp"

namespace sobolcap::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Strict decimal parse of a whole field; throws ParseError.
double parse_double(const std::string& text);

/// Splits CSV text into rows of fields (RFC 4180 quoting, CRLF tolerated).
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

struct MatrixReadOptions {
  /// Rescale each column to [0,1] by min-max; a constant column maps to 0.5.
  bool normalize = false;
};

/// Header row of criterion names, then one row per alternative. A first
/// column whose data cells are not all numeric is read as row labels.
DecisionMatrix read_matrix_csv(std::istream& in, const MatrixReadOptions& options = {});
DecisionMatrix read_matrix_csv(const std::filesystem::path& path, const MatrixReadOptions& options = {});
void write_matrix_csv(std::ostream& out, const DecisionMatrix& v);

/// {"m": int, "ordering": "paper-list", "values": [...]} with values in display order.
template <class Tag>
Json to_json(const SetFunction<Tag>& f) {
  Json j;
  j["m"] = f.criteria();
  j["ordering"] = "paper-list";
  j["values"] = f.display_order();
  return j;
}

Capacity capacity_from_json(const Json& j);
InteractionVector interaction_from_json(const Json& j);
Capacity read_capacity_json(const std::filesystem::path& path);

/// One row per subset in display order: subset ("1,3"), cardinality, value.
template <class Tag>
void write_set_function_csv(std::ostream& out, const SetFunction<Tag>& f);

void write_sobol_csv(std::ostream& out, std::span<const SobolReport> reports);
std::vector<SobolReport> read_sobol_csv(std::istream& in, int m);

Json to_json(const GenSpec& spec);
Json to_json(const IdentificationConfig& config, int m);
Json to_json(const IdentificationResult& result, const IdentificationConfig& config);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: temp file then rename.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sobolcap::io
