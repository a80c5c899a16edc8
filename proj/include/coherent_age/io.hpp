#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coherent_age/montecarlo.hpp"
#include "coherent_age/orders.hpp"
#include "coherent_age/verifier.hpp"

namespace coherent_age {

using Json = nlohmann::json;

/// Input schema violation (unknown field, wrong type, invalid parameter).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"family":"lfr","alpha":1.0,"beta":1.0} | {"family":"exp","rate":3.0} | {"family":"weibull","shape":2.0,"scale":1.0}
Distribution distribution_from_json(const Json& j);
Json to_json(const Distribution& d);

// {"copula":"fgm","theta":0.5} | {"copula":"gumbel","theta":2.0} | {"copula":"independence"} | {"copula":"clayton","theta":1.0}
Copula copula_from_json(const Json& j, int dimension);
Json to_json(const Copula& c);

struct SystemSpec {
  Structure structure;
  Copula copula;
  std::optional<Distribution> margin;
};

// {"n":3,"paths":[[1,2],[1,3]],"copula":{...},"margin":{...}}; "k" may replace "paths" for k-out-of-n.
SystemSpec system_from_json(const Json& j);
Json to_json(const SystemSpec& s);

struct GridSpec {
  Grid::Policy policy = Grid::Policy::log_spaced;
  Eigen::Index size = kDefaultGridSize;
  std::optional<double> lower;
  std::optional<double> upper;
  std::vector<double> points;  // custom policy only
};

struct Tolerances {
  double tol = kClosedFormTol;
  double fd_tol = kFiniteDifferenceTol;
  double sign_slack = 1e-8;
  double eps_endpoint = 1e-3;
};

struct OutputSpec {
  std::optional<std::string> csv;
  std::optional<std::string> json;
};

struct SimulationSpec {
  std::int64_t samples = 100000;
  std::uint64_t seed = 20240601;
  int streams = 16;
  int points = 20;
};

/// One reproducible run. Unknown fields anywhere are rejected.
struct RunSpec {
  std::optional<SystemSpec> system1;
  std::optional<SystemSpec> system2;
  std::optional<Relation> relation;
  GridSpec grid;
  Eigen::Index p_grid_size = kDefaultGridSize;
  Tolerances tolerances;
  OutputSpec output;
  std::optional<SimulationSpec> simulation;
  std::string hash;  // FNV-1a of the spec text
};

RunSpec parse_run_spec(std::string_view text);

/// x-grid for a pair of margins following the spec's grid block.
Grid make_grid(const GridSpec& g, const Distribution& x, const Distribution& y);
/// Same, with default bounds taken from the mixture of the two system lifetimes.
Grid make_grid(const GridSpec& g, const SystemModel& first, const SystemModel& second);
/// True when the grid block pins points or bounds, i.e. defaults must not apply.
bool grid_is_explicit(const GridSpec& g);

std::string spec_hash(std::string_view text);

/// 17 significant digits, round-trippable through parse_number.
std::string format_number(double v);
double parse_number(std::string_view s);

/// A CSV table with "# key=value" metadata lines before the header row.
struct CsvTable {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::vector<double> column(const std::string& name) const;
};

std::string write_csv(const CsvTable& t);
CsvTable read_csv(std::string_view text);

CsvTable distortion_table(const Distortion& d, const Grid& pgrid);
CsvTable verdict_table(const std::vector<OrderVerdict>& verdicts);
CsvTable survival_table(const SurvivalComparison& s);

Json to_json(const OrderVerdict& v);
OrderVerdict verdict_from_json(const Json& j);
Json to_json(const ConditionReport& r);
ConditionReport report_from_json(const Json& j);

}  // namespace coherent_age
