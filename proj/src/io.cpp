#include "coherent_age/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace coherent_age {

namespace {

void allow_only(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw SchemaError(where + ": unknown field '" + key + "'");
  }
}

double number_at(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  if (!j.at(key).is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::int64_t integer_at(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  if (!j.at(key).is_number_integer()) throw SchemaError(where + ": field '" + key + "' must be an integer");
  return j.at(key).get<std::int64_t>();
}

std::string string_at(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  if (!j.at(key).is_string()) throw SchemaError(where + ": field '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

// Re-raise construction errors (invalid parameters) as schema errors.
template <typename F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_nan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Holds parse_holds(const std::string& s) {
  for (Holds h : {Holds::yes, Holds::no, Holds::inconclusive})
    if (s == holds_name(h)) return h;
  throw SchemaError("unknown verdict '" + s + "'");
}

const char* conclusion_code(Conclusion c) {
  switch (c) {
    case Conclusion::certified: return "certified";
    case Conclusion::not_certified: return "not_certified";
    case Conclusion::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

// -- distributions / copulas / systems ---------------------------------------

Distribution distribution_from_json(const Json& j) {
  const std::string where = "margin";
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::string family = string_at(j, "family", where);
  return guarded(where, [&] {
    if (family == "exp") {
      allow_only(j, {"family", "rate"}, where);
      return Distribution::exponential(number_at(j, "rate", where));
    }
    if (family == "lfr") {
      allow_only(j, {"family", "alpha", "beta"}, where);
      return Distribution::linear_failure_rate(number_at(j, "alpha", where), number_at(j, "beta", where));
    }
    if (family == "weibull") {
      allow_only(j, {"family", "shape", "scale"}, where);
      return Distribution::weibull(number_at(j, "shape", where), number_at(j, "scale", where));
    }
    throw SchemaError(where + ": unknown family '" + family + "'");
  });
}

Json to_json(const Distribution& d) {
  switch (d.family()) {
    case Family::exponential: return {{"family", "exp"}, {"rate", d.first()}};
    case Family::linear_failure_rate: return {{"family", "lfr"}, {"alpha", d.first()}, {"beta", d.second()}};
    case Family::weibull: return {{"family", "weibull"}, {"shape", d.first()}, {"scale", d.second()}};
  }
  return {};
}

Copula copula_from_json(const Json& j, int dimension) {
  const std::string where = "copula";
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::string family = string_at(j, "copula", where);
  return guarded(where, [&] {
    if (family == "independence") {
      allow_only(j, {"copula"}, where);
      return Copula::independence(dimension);
    }
    allow_only(j, {"copula", "theta"}, where);
    const double theta = number_at(j, "theta", where);
    if (family == "fgm") {
      if (dimension != 3) throw SchemaError(where + ": the FGM copula needs exactly 3 components");
      return Copula::fgm(theta);
    }
    if (family == "gumbel") return Copula::gumbel_hougaard(theta, dimension);
    if (family == "clayton") return Copula::clayton_oakes(theta, dimension);
    throw SchemaError(where + ": unknown copula '" + family + "'");
  });
}

Json to_json(const Copula& c) {
  Json j = {{"copula", copula_name(c.family())}};
  if (c.family() != CopulaFamily::independence) j["theta"] = c.theta();
  return j;
}

SystemSpec system_from_json(const Json& j) {
  const std::string where = "system";
  allow_only(j, {"n", "paths", "k", "copula", "margin"}, where);
  const auto n = integer_at(j, "n", where);
  if (j.contains("paths") == j.contains("k")) throw SchemaError(where + ": give exactly one of 'paths' or 'k'");

  Structure structure = guarded(where, [&] {
    if (j.contains("k")) return Structure::k_out_of_n(static_cast<int>(integer_at(j, "k", where)), static_cast<int>(n));
    const Json& paths = j.at("paths");
    if (!paths.is_array()) throw SchemaError(where + ": 'paths' must be an array of arrays");
    std::vector<std::vector<int>> list;
    for (const auto& p : paths) {
      if (!p.is_array()) throw SchemaError(where + ": 'paths' must be an array of arrays");
      std::vector<int> path;
      for (const auto& idx : p) {
        if (!idx.is_number_integer()) throw SchemaError(where + ": component indices must be integers");
        path.push_back(idx.get<int>());
      }
      list.push_back(std::move(path));
    }
    return Structure(static_cast<int>(n), list);
  });
  if (!j.contains("copula")) throw SchemaError(where + ": missing field 'copula'");
  Copula copula = copula_from_json(j.at("copula"), structure.size());
  std::optional<Distribution> margin;
  if (j.contains("margin")) margin = distribution_from_json(j.at("margin"));
  return {std::move(structure), copula, margin};
}

Json to_json(const SystemSpec& s) {
  Json j = {{"n", s.structure.size()}, {"paths", s.structure.paths()}, {"copula", to_json(s.copula)}};
  if (s.margin) j["margin"] = to_json(*s.margin);
  return j;
}

// -- run spec ----------------------------------------------------------------

RunSpec parse_run_spec(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("spec is not valid JSON: ") + e.what());
  }
  allow_only(j, {"system1", "system2", "relation", "grid", "p_grid", "tolerances", "output", "simulation"}, "spec");

  RunSpec spec;
  spec.hash = spec_hash(text);
  if (j.contains("system1")) spec.system1 = system_from_json(j.at("system1"));
  if (j.contains("system2")) spec.system2 = system_from_json(j.at("system2"));
  if (j.contains("relation"))
    spec.relation = guarded("relation", [&] { return parse_relation(string_at(j, "relation", "spec")); });

  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    allow_only(g, {"policy", "size", "lower", "upper", "points"}, "grid");
    if (g.contains("policy")) {
      const std::string policy = string_at(g, "policy", "grid");
      if (policy == "log") spec.grid.policy = Grid::Policy::log_spaced;
      else if (policy == "linear") spec.grid.policy = Grid::Policy::linear;
      else if (policy == "custom") spec.grid.policy = Grid::Policy::custom;
      else throw SchemaError("grid: unknown policy '" + policy + "'");
    }
    if (g.contains("size")) spec.grid.size = integer_at(g, "size", "grid");
    if (g.contains("lower")) spec.grid.lower = number_at(g, "lower", "grid");
    if (g.contains("upper")) spec.grid.upper = number_at(g, "upper", "grid");
    if (g.contains("points")) {
      if (!g.at("points").is_array()) throw SchemaError("grid: 'points' must be an array");
      for (const auto& v : g.at("points")) {
        if (!v.is_number()) throw SchemaError("grid: 'points' must hold numbers");
        spec.grid.points.push_back(v.get<double>());
      }
    }
    if (spec.grid.policy == Grid::Policy::custom && spec.grid.points.empty())
      throw SchemaError("grid: custom policy needs 'points'");
    if (spec.grid.size < 2) throw SchemaError("grid: size must be >= 2");
  }
  if (j.contains("p_grid")) {
    allow_only(j.at("p_grid"), {"size"}, "p_grid");
    spec.p_grid_size = integer_at(j.at("p_grid"), "size", "p_grid");
    if (spec.p_grid_size < 2) throw SchemaError("p_grid: size must be >= 2");
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    allow_only(t, {"tol", "fd_tol", "sign_slack", "eps_endpoint"}, "tolerances");
    if (t.contains("tol")) spec.tolerances.tol = number_at(t, "tol", "tolerances");
    if (t.contains("fd_tol")) spec.tolerances.fd_tol = number_at(t, "fd_tol", "tolerances");
    if (t.contains("sign_slack")) spec.tolerances.sign_slack = number_at(t, "sign_slack", "tolerances");
    if (t.contains("eps_endpoint")) spec.tolerances.eps_endpoint = number_at(t, "eps_endpoint", "tolerances");
    const double eps = spec.tolerances.eps_endpoint;
    if (!(eps > 0.0 && eps < 0.5)) throw SchemaError("tolerances: eps_endpoint must lie in (0, 0.5)");
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    allow_only(o, {"csv", "json"}, "output");
    if (o.contains("csv")) spec.output.csv = string_at(o, "csv", "output");
    if (o.contains("json")) spec.output.json = string_at(o, "json", "output");
  }
  if (j.contains("simulation")) {
    const Json& s = j.at("simulation");
    allow_only(s, {"samples", "seed", "streams", "points"}, "simulation");
    SimulationSpec sim;
    if (s.contains("samples")) sim.samples = integer_at(s, "samples", "simulation");
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_unsigned()) throw SchemaError("simulation: 'seed' must be a nonnegative integer");
      sim.seed = s.at("seed").get<std::uint64_t>();
    }
    if (s.contains("streams")) sim.streams = static_cast<int>(integer_at(s, "streams", "simulation"));
    if (s.contains("points")) sim.points = static_cast<int>(integer_at(s, "points", "simulation"));
    if (sim.samples < 1 || sim.streams < 1 || sim.points < 1)
      throw SchemaError("simulation: samples, streams and points must be positive");
    spec.simulation = sim;
  }
  return spec;
}

namespace {

Grid custom_grid(const GridSpec& g) {
  return Grid::custom(Eigen::Map<const Eigen::ArrayXd>(g.points.data(), static_cast<Eigen::Index>(g.points.size())));
}

Grid grid_between(const GridSpec& g, const Grid& bounds) {
  const double lo = g.lower.value_or(bounds.points()[0]);
  const double hi = g.upper.value_or(bounds.points()[bounds.size() - 1]);
  return g.policy == Grid::Policy::linear ? Grid::linear(lo, hi, g.size) : Grid::log_spaced(lo, hi, g.size);
}

}  // namespace

Grid make_grid(const GridSpec& g, const Distribution& x, const Distribution& y) {
  return g.policy == Grid::Policy::custom ? custom_grid(g) : grid_between(g, default_grid(x, y, 2));
}

Grid make_grid(const GridSpec& g, const SystemModel& first, const SystemModel& second) {
  return g.policy == Grid::Policy::custom ? custom_grid(g) : grid_between(g, system_grid(first, second, 2));
}

bool grid_is_explicit(const GridSpec& g) {
  return g.policy != Grid::Policy::log_spaced || g.lower.has_value() || g.upper.has_value();
}

std::string spec_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// -- numbers and CSV ---------------------------------------------------------

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end == tmp.c_str() || *end != '\0') throw SchemaError("not a number: '" + tmp + "'");
  return v;
}

std::vector<double> CsvTable::column(const std::string& name) const {
  std::size_t idx = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) idx = i;
  if (idx == columns.size()) throw SchemaError("no column '" + name + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(parse_number(r.at(idx)));
  return out;
}

std::string write_csv(const CsvTable& t) {
  std::string out;
  for (const auto& [k, v] : t.meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

CsvTable read_csv(std::string_view text) {
  CsvTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw SchemaError("malformed metadata line: " + line);
      t.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      t.columns = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != t.columns.size()) throw SchemaError("row width differs from header: " + line);
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw SchemaError("CSV has no header row");
  return t;
}

CsvTable distortion_table(const Distortion& d, const Grid& pgrid) {
  CsvTable t;
  t.columns = {"p", "h", "h_prime", "H", "R"};
  for (double p : pgrid.points()) {
    t.rows.push_back({format_number(p), format_number(distortion_value(d, p)), format_number(distortion_derivative(d, p)),
                      format_number(hazard_transfer(d, p).value), format_number(reversed_transfer(d, p).value)});
  }
  return t;
}

CsvTable verdict_table(const std::vector<OrderVerdict>& verdicts) {
  CsvTable t;
  t.columns = {"relation", "holds", "witness_x", "violation", "skipped_points"};
  for (const auto& v : verdicts)
    t.rows.push_back({relation_name(v.relation), holds_name(v.holds), format_number(v.witness_x),
                      format_number(v.violation), std::to_string(v.skipped)});
  return t;
}

CsvTable survival_table(const SurvivalComparison& s) {
  CsvTable t;
  t.meta["seed"] = std::to_string(s.seed);
  t.meta["samples"] = std::to_string(s.samples);
  t.columns = {"x", "empirical_sf", "analytic_sf", "std_err"};
  for (Eigen::Index i = 0; i < s.x.size(); ++i)
    t.rows.push_back({format_number(s.x[i]), format_number(s.empirical[i]), format_number(s.analytic[i]),
                      format_number(s.std_err[i])});
  return t;
}

// -- reports -----------------------------------------------------------------

Json to_json(const OrderVerdict& v) {
  return {{"relation", relation_name(v.relation)}, {"holds", holds_name(v.holds)},
          {"witness_x", number_or_null(v.witness_x)}, {"violation", number_or_null(v.violation)},
          {"tolerance", v.tolerance}, {"skipped_points", v.skipped}, {"evaluated_points", v.evaluated}};
}

OrderVerdict verdict_from_json(const Json& j) {
  OrderVerdict v;
  v.relation = parse_relation(j.at("relation").get<std::string>());
  v.holds = parse_holds(j.at("holds").get<std::string>());
  v.witness_x = number_or_nan(j.at("witness_x"));
  v.violation = number_or_nan(j.at("violation"));
  v.tolerance = j.at("tolerance").get<double>();
  v.skipped = j.at("skipped_points").get<Eigen::Index>();
  v.evaluated = j.at("evaluated_points").get<Eigen::Index>();
  return v;
}

Json to_json(const ConditionReport& r) {
  Json conditions = Json::array();
  for (const auto& c : r.conditions)
    conditions.push_back({{"name", c.name}, {"statement", c.statement}, {"status", status_name(c.status)},
                          {"boundary", c.boundary}, {"witness", number_or_null(c.witness)},
                          {"violation", number_or_null(c.violation)}, {"detail", c.detail}});
  return {{"theorem", r.theorem},
          {"target", relation_name(r.target)},
          {"conclusion", conclusion_code(r.conclusion)},
          {"summary", conclusion_name(r.conclusion)},
          {"failed", r.failed},
          {"conditions", conditions},
          {"direct", to_json(r.direct)},
          {"consistent", r.consistent()}};
}

ConditionReport report_from_json(const Json& j) {
  ConditionReport r;
  r.theorem = j.at("theorem").get<std::string>();
  r.target = parse_relation(j.at("target").get<std::string>());
  const std::string code = j.at("conclusion").get<std::string>();
  bool known = false;
  for (Conclusion c : {Conclusion::certified, Conclusion::not_certified, Conclusion::inconclusive})
    if (code == conclusion_code(c)) {
      r.conclusion = c;
      known = true;
    }
  if (!known) throw SchemaError("unknown conclusion '" + code + "'");
  r.failed = j.at("failed").get<std::vector<std::string>>();
  for (const auto& c : j.at("conditions")) {
    ConditionEntry e;
    e.name = c.at("name").get<std::string>();
    e.statement = c.at("statement").get<std::string>();
    const std::string status = c.at("status").get<std::string>();
    e.status = status == "pass" ? ConditionStatus::pass
               : status == "fail" ? ConditionStatus::fail
                                  : ConditionStatus::inconclusive;
    e.boundary = c.at("boundary").get<bool>();
    e.witness = number_or_nan(c.at("witness"));
    e.violation = number_or_nan(c.at("violation"));
    e.detail = c.at("detail").get<std::string>();
    r.conditions.push_back(std::move(e));
  }
  r.direct = verdict_from_json(j.at("direct"));
  return r;
}

}  // namespace coherent_age
