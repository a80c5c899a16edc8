// coherent-age: command-line front end.
//
//   coherent-age distortion   SPEC [--system 1|2]
//   coherent-age check-order  SPEC [--systems] [--relation R]
//   coherent-age verify       SPEC
//   coherent-age simulate     SPEC
//   coherent-age corollary    --k K --n N --l L --m M --relation c_star|b_star
//
// Exit codes: 0 pass/certified, 1 usage or schema error, 2 not certified or
// order fails, 3 numerically inconclusive.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coherent_age/io.hpp"

namespace ca = coherent_age;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFails = 2;
constexpr int kExitInconclusive = 3;

constexpr double kMaxStandardizedDeviation = 4.0;

struct Overrides {
  std::optional<long long> grid_size;
  std::optional<double> tol;
  std::optional<unsigned long long> seed;
  std::optional<double> eps_endpoint;
  std::optional<std::string> out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ca::SchemaError("cannot open spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ca::RunSpec load_spec(const std::string& path, const Overrides& o) {
  ca::RunSpec spec = ca::parse_run_spec(read_file(path));
  if (o.grid_size) {
    if (*o.grid_size < 2) throw ca::SchemaError("--grid-size must be >= 2");
    spec.grid.size = *o.grid_size;
    spec.p_grid_size = *o.grid_size;
  }
  if (o.tol) spec.tolerances.tol = *o.tol;
  if (o.eps_endpoint) {
    if (!(*o.eps_endpoint > 0.0 && *o.eps_endpoint < 0.5)) throw ca::SchemaError("--eps-endpoint must lie in (0, 0.5)");
    spec.tolerances.eps_endpoint = *o.eps_endpoint;
  }
  if (o.seed) {
    if (!spec.simulation) spec.simulation = ca::SimulationSpec{};
    spec.simulation->seed = *o.seed;
  }
  return spec;
}

const ca::SystemSpec& need_system(const std::optional<ca::SystemSpec>& s, const char* name) {
  if (!s) throw ca::SchemaError(std::string("spec needs a '") + name + "' block");
  return *s;
}

const ca::Distribution& need_margin(const ca::SystemSpec& s, const char* name) {
  if (!s.margin) throw ca::SchemaError(std::string("'") + name + "' needs a 'margin' block");
  return *s.margin;
}

ca::Relation need_relation(const ca::RunSpec& spec) {
  if (!spec.relation) throw ca::SchemaError("spec needs a 'relation' field (or pass --relation)");
  return *spec.relation;
}

void emit(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ca::SchemaError("cannot write '" + *path + "'");
  out << text;
}

void stamp(ca::CsvTable& t, const ca::RunSpec& spec, const char* command) {
  t.meta["command"] = command;
  t.meta["spec_hash"] = spec.hash;
}

int exit_for(ca::Holds h) {
  switch (h) {
    case ca::Holds::yes: return kExitOk;
    case ca::Holds::no: return kExitFails;
    case ca::Holds::inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int cmd_distortion(const ca::RunSpec& spec, int which, const Overrides& o) {
  const ca::SystemSpec& sys = which == 2 ? need_system(spec.system2, "system2") : need_system(spec.system1, "system1");
  const ca::Distortion h = ca::build_distortion(sys.structure, sys.copula);
  const ca::Grid pgrid = ca::probability_grid(spec.tolerances.eps_endpoint, spec.p_grid_size);

  ca::CsvTable t = ca::distortion_table(h, pgrid);
  stamp(t, spec, "distortion");
  t.meta["system"] = std::to_string(which);

  bool flagged = false;
  for (double p : pgrid.points())
    flagged = flagged || !ca::hazard_transfer(h, p).usable() || !ca::reversed_transfer(h, p).usable();
  emit(ca::write_csv(t), o.out ? o.out : spec.output.csv);
  return flagged ? kExitInconclusive : kExitOk;
}

int cmd_check_order(const ca::RunSpec& spec, bool systems, const Overrides& o) {
  const ca::SystemSpec& s1 = need_system(spec.system1, "system1");
  const ca::SystemSpec& s2 = need_system(spec.system2, "system2");
  const ca::Distribution& x = need_margin(s1, "system1");
  const ca::Distribution& y = need_margin(s2, "system2");
  const ca::Relation relation = need_relation(spec);

  ca::OrderVerdict v;
  if (systems) {
    const ca::SystemModel m1{ca::build_distortion(s1.structure, s1.copula), x};
    const ca::SystemModel m2{ca::build_distortion(s2.structure, s2.copula), y};
    v = ca::system_order_direct(m1, m2, relation, ca::make_grid(spec.grid, m1, m2), spec.tolerances.tol);
  } else {
    v = ca::check_order(x, y, relation, ca::make_grid(spec.grid, x, y), spec.tolerances.tol);
  }
  ca::CsvTable t = ca::verdict_table({v});
  stamp(t, spec, systems ? "check-order --systems" : "check-order");
  emit(ca::write_csv(t), o.out ? o.out : spec.output.csv);
  return exit_for(v.holds);
}

int cmd_verify(const ca::RunSpec& spec, const Overrides& o) {
  const ca::SystemSpec& s1 = need_system(spec.system1, "system1");
  const ca::SystemSpec& s2 = need_system(spec.system2, "system2");
  const ca::SystemModel m1{ca::build_distortion(s1.structure, s1.copula), need_margin(s1, "system1")};
  const ca::SystemModel m2{ca::build_distortion(s2.structure, s2.copula), need_margin(s2, "system2")};
  const ca::Relation relation = need_relation(spec);
  if (relation != ca::Relation::c_star && relation != ca::Relation::b_star)
    throw ca::SchemaError("verify supports relation c_star or b_star only");

  ca::VerifierConfig cfg;
  cfg.eps_endpoint = spec.tolerances.eps_endpoint;
  cfg.p_grid_size = spec.p_grid_size;
  cfg.x_grid_size = spec.grid.size;
  cfg.tol = spec.tolerances.tol;
  cfg.fd_tol = spec.tolerances.fd_tol;
  cfg.sign_slack = spec.tolerances.sign_slack;
  if (ca::grid_is_explicit(spec.grid)) cfg.x_grid = ca::make_grid(spec.grid, m1.margin, m2.margin);

  const ca::ConditionReport r =
      relation == ca::Relation::c_star ? ca::verify_cstar(m1, m2, cfg) : ca::verify_bstar(m1, m2, cfg);
  // header fields first, so the hash sits at the top like the CSV metadata
  nlohmann::ordered_json out;
  out["command"] = "verify";
  out["spec_hash"] = spec.hash;
  out["report"] = nlohmann::ordered_json(ca::to_json(r));
  emit(out.dump(2) + "\n", o.out ? o.out : spec.output.json);
  if (!r.consistent()) {
    std::cerr << "error: certified report disagrees with the direct grid check\n";
    return kExitInconclusive;
  }
  return ca::exit_code(r.conclusion);
}

int cmd_simulate(const ca::RunSpec& spec, const Overrides& o) {
  const ca::SystemSpec& s1 = need_system(spec.system1, "system1");
  const ca::Distribution& margin = need_margin(s1, "system1");
  const ca::SimulationSpec sim = spec.simulation.value_or(ca::SimulationSpec{});

  ca::SimConfig cfg;
  cfg.sample_count = sim.samples;
  cfg.seed = sim.seed;
  cfg.stream_count = sim.streams;

  const ca::Distortion h = ca::build_distortion(s1.structure, s1.copula);
  const Eigen::ArrayXd x = ca::system_quantile_grid(h, margin, sim.points);
  const ca::SurvivalComparison cmp = ca::simulate_system(s1.structure, s1.copula, margin, x, cfg);

  ca::CsvTable t = ca::survival_table(cmp);
  stamp(t, spec, "simulate");
  t.meta["streams"] = std::to_string(sim.streams);
  t.meta["max_abs_standardized"] = ca::format_number(cmp.max_abs_standardized());
  emit(ca::write_csv(t), o.out ? o.out : spec.output.csv);
  return cmp.max_abs_standardized() > kMaxStandardizedDeviation ? kExitInconclusive : kExitOk;
}

int cmd_corollary(int k, int n, int l, int m, const std::string& relation_name) {
  const ca::Relation relation = ca::parse_relation(relation_name);
  const bool holds = ca::corollary_index_check(k, n, l, m, relation);
  std::cout << "k=" << k << " n=" << n << " l=" << l << " m=" << m << " relation=" << relation_name
            << " holds=" << (holds ? "true" : "false") << "\n";
  return holds ? kExitOk : kExitFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify relative-ageing orders between coherent systems with dependent components"};
  app.require_subcommand(1);

  Overrides o;
  std::string spec_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", spec_path, "JSON run specification")->required()->check(CLI::ExistingFile);
    sub->add_option("--grid-size", o.grid_size, "Points in the x-grid and the p-grid");
    sub->add_option("--tol", o.tol, "Tolerance for closed-form monotonicity checks");
    sub->add_option("--seed", o.seed, "Simulation seed");
    sub->add_option("--eps-endpoint", o.eps_endpoint, "p-grid covers [eps, 1 - eps]");
    sub->add_option("-o,--out", o.out, "Write output here instead of the spec's output path or stdout");
  };

  int which = 1;
  auto* distortion = app.add_subcommand("distortion", "Tabulate p, h, h', H, R on the p-grid");
  add_common(distortion);
  distortion->add_option("--system", which, "Which system block to tabulate")->check(CLI::IsMember({1, 2}));

  bool systems = false;
  std::optional<std::string> relation_override;
  auto* check = app.add_subcommand("check-order", "Check an order between the two margins (or systems)");
  add_common(check);
  check->add_flag("--systems", systems, "Compare the system lifetimes instead of the margins");
  check->add_option("--relation", relation_override, "Override the spec's relation");

  auto* verify = app.add_subcommand("verify", "Run the sufficient-condition verifier and emit a JSON report");
  add_common(verify);

  auto* simulate = app.add_subcommand("simulate", "Compare simulated and analytic system survival");
  add_common(simulate);

  int k = 0, n = 0, l = 0, m = 0;
  std::string corollary_relation;
  auto* corollary = app.add_subcommand("corollary", "Index conditions for k-out-of-n versus l-out-of-m");
  corollary->add_option("--k", k)->required();
  corollary->add_option("--n", n)->required();
  corollary->add_option("--l", l)->required();
  corollary->add_option("--m", m)->required();
  corollary->add_option("--relation", corollary_relation)->required()->check(CLI::IsMember({"c_star", "b_star"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (corollary->parsed()) return cmd_corollary(k, n, l, m, corollary_relation);

    ca::RunSpec spec = load_spec(spec_path, o);
    if (distortion->parsed()) return cmd_distortion(spec, which, o);
    if (check->parsed()) {
      if (relation_override) spec.relation = ca::parse_relation(*relation_override);
      return cmd_check_order(spec, systems, o);
    }
    if (verify->parsed()) return cmd_verify(spec, o);
    if (simulate->parsed()) return cmd_simulate(spec, o);
  } catch (const ca::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ca::NumericError& e) {
    std::cerr << "numeric: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconclusive;
  }
  return kExitUsage;
}
