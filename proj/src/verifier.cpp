#include "coherent_age/verifier.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coherent_age {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string digits17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

ConditionStatus from_holds(Holds h) {
  switch (h) {
    case Holds::yes: return ConditionStatus::pass;
    case Holds::no: return ConditionStatus::fail;
    case Holds::inconclusive: return ConditionStatus::inconclusive;
  }
  return ConditionStatus::inconclusive;
}

template <typename F>
Eigen::ArrayXd sample_usable(const Grid& g, F&& f) {
  return g.points().unaryExpr([&f](double p) {
    const Flagged v = f(p);
    return v.usable() ? v.value : kNaN;
  });
}

ConditionEntry ratio_condition(const Distortion& d1, const Distortion& d2, bool hazard_side, const Grid& pgrid,
                               double tol) {
  const auto functional = [hazard_side](const Distortion& d, double p) {
    return hazard_side ? hazard_transfer(d, p) : reversed_transfer(d, p);
  };
  const Eigen::ArrayXd values = sample_usable(pgrid, [&](double p) -> Flagged {
    const Flagged a = functional(d1, p);
    const Flagged b = functional(d2, p);
    if (!a.usable()) return a;
    if (!b.usable()) return b;
    if (std::abs(b.value) < 1e-300) return {kNaN, Flag::indeterminate};
    return {a.value / b.value, Flag::none};
  });
  const Direction dir = hazard_side ? Direction::decreasing : Direction::increasing;
  const MonotoneReport m = check_monotone(values, pgrid, dir, tol);

  ConditionEntry e;
  e.name = "i";
  e.statement = hazard_side ? "H1/H2 is decreasing in p" : "R1/R2 is increasing in p";
  e.status = from_holds(m.holds);
  e.witness = m.witness.x_left;
  e.violation = m.witness.violation;
  e.detail = "skipped " + std::to_string(m.skipped) + " of " + std::to_string(pgrid.size()) + " points";
  return e;
}

// (1-p)H'/H negative and decreasing, or pR'/R positive and decreasing.
ConditionEntry slope_condition(const Distortion& d, const std::string& name, int system, bool hazard_side,
                               const Grid& pgrid, const VerifierConfig& cfg) {
  const Eigen::ArrayXd g = sample_usable(pgrid, [&](double p) {
    return hazard_side ? hazard_transfer_slope(d, p) : reversed_transfer_slope(d, p);
  });
  const std::string which = std::to_string(system);

  ConditionEntry e;
  e.name = name;
  e.statement = hazard_side ? "(1-p)H" + which + "'/H" + which + " is negative and decreasing"
                            : "pR" + which + "'/R" + which + " is positive and decreasing";

  // sign part
  double worst_sign = 0.0;
  double worst_p = 0.0;
  double max_abs = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) continue;
    max_abs = std::max(max_abs, std::abs(g[i]));
    const double wrong = hazard_side ? g[i] : -g[i];
    if (wrong > worst_sign) {
      worst_sign = wrong;
      worst_p = pgrid.points()[i];
    }
  }
  const MonotoneReport m = check_monotone(g, pgrid, Direction::decreasing, cfg.fd_tol);

  if (worst_sign > cfg.sign_slack) {
    e.status = ConditionStatus::fail;
    e.witness = worst_p;
    e.violation = worst_sign;
    e.detail = hazard_side ? "positive value" : "negative value";
  } else if (m.holds == Holds::no) {
    e.status = ConditionStatus::fail;
    e.witness = m.witness.x_left;
    e.violation = m.witness.violation;
    e.detail = "increases between p=" + digits17(m.witness.x_left) + " and p=" + digits17(m.witness.x_right);
  } else {
    e.status = from_holds(m.holds);
    e.boundary = max_abs <= cfg.sign_slack;
    e.detail = e.boundary ? "identically zero within slack" : "";
    if (m.skipped > 0) e.detail += (e.detail.empty() ? "" : "; ") + std::string("skipped ") + std::to_string(m.skipped);
  }
  return e;
}

ConditionEntry margin_condition(const Distribution& x, const Distribution& y, bool hazard_side, const Grid& xgrid,
                                double tol) {
  ConditionEntry e;
  e.name = "iv";
  OrderVerdict ageing;
  OrderVerdict dominance;
  if (hazard_side) {
    e.statement = "X <c_star Y and Y <=st X";
    ageing = check_order(x, y, Relation::c_star, xgrid, tol);
    dominance = check_order(y, x, Relation::st, xgrid, tol);
  } else {
    e.statement = "X <b_star Y and X <=st Y";
    ageing = check_order(x, y, Relation::b_star, xgrid, tol);
    dominance = check_order(x, y, Relation::st, xgrid, tol);
  }
  const OrderVerdict* failing = nullptr;
  if (ageing.holds == Holds::no) failing = &ageing;
  else if (dominance.holds == Holds::no) failing = &dominance;

  if (failing) {
    e.status = ConditionStatus::fail;
    e.witness = failing->witness_x;
    e.violation = failing->violation;
    e.detail = std::string(failing == &ageing ? (hazard_side ? "c_star" : "b_star") : "st") + " part fails";
  } else if (ageing.holds == Holds::inconclusive || dominance.holds == Holds::inconclusive) {
    e.status = ConditionStatus::inconclusive;
    e.detail = "too many flagged grid points";
  } else {
    e.status = ConditionStatus::pass;
  }
  return e;
}

ConditionStatus route_status(std::initializer_list<const ConditionEntry*> members) {
  bool unsure = false;
  for (const ConditionEntry* c : members) {
    if (c->status == ConditionStatus::fail) return ConditionStatus::fail;
    if (c->status == ConditionStatus::inconclusive) unsure = true;
  }
  return unsure ? ConditionStatus::inconclusive : ConditionStatus::pass;
}

ConditionReport assemble(const SystemModel& first, const SystemModel& second, const VerifierConfig& cfg,
                         bool hazard_side) {
  const Grid pgrid = probability_grid(cfg.eps_endpoint, cfg.p_grid_size);
  const Grid xgrid = cfg.x_grid ? *cfg.x_grid : default_grid(first.margin, second.margin, cfg.x_grid_size);

  ConditionReport r;
  r.theorem = hazard_side ? "cstar" : "bstar";
  r.target = hazard_side ? Relation::c_star : Relation::b_star;
  r.conditions.push_back(ratio_condition(first.distortion, second.distortion, hazard_side, pgrid, cfg.tol));
  r.conditions.push_back(slope_condition(first.distortion, "ii", 1, hazard_side, pgrid, cfg));
  r.conditions.push_back(slope_condition(second.distortion, "iii", 2, hazard_side, pgrid, cfg));
  r.conditions.push_back(margin_condition(first.margin, second.margin, hazard_side, xgrid, cfg.tol));

  const auto& c = r.conditions;
  const ConditionStatus a = route_status({&c[0], &c[1], &c[3]});
  const ConditionStatus b = route_status({&c[0], &c[2], &c[3]});
  if (a == ConditionStatus::pass || b == ConditionStatus::pass)
    r.conclusion = Conclusion::certified;
  else if (a == ConditionStatus::inconclusive || b == ConditionStatus::inconclusive)
    r.conclusion = Conclusion::inconclusive;
  else
    r.conclusion = Conclusion::not_certified;

  for (const auto& e : c)
    if (e.status == ConditionStatus::fail) r.failed.push_back(e.name);

  const Grid system_xgrid = cfg.x_grid ? *cfg.x_grid : system_grid(first, second, cfg.x_grid_size);
  r.direct = system_order_direct(first, second, r.target, system_xgrid, cfg.tol);
  return r;
}

}  // namespace

const char* status_name(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::pass: return "pass";
    case ConditionStatus::fail: return "fail";
    case ConditionStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* conclusion_name(Conclusion c) {
  switch (c) {
    case Conclusion::certified: return "certified";
    case Conclusion::not_certified: return "not certified by this route";
    case Conclusion::inconclusive: return "inconclusive";
  }
  return "?";
}

const ConditionEntry& ConditionReport::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw std::out_of_range("no condition named '" + name + "'");
}

ConditionReport verify_cstar(const SystemModel& first, const SystemModel& second, const VerifierConfig& cfg) {
  return assemble(first, second, cfg, true);
}

ConditionReport verify_bstar(const SystemModel& first, const SystemModel& second, const VerifierConfig& cfg) {
  return assemble(first, second, cfg, false);
}

bool corollary_index_check(int k, int n, int l, int m, Relation relation) {
  if (k < 1 || k > n || l < 1 || l > m) throw std::invalid_argument("indices need 1 <= k <= n and 1 <= l <= m");
  switch (relation) {
    case Relation::c_star: return k <= l && m - l <= n - k;
    case Relation::b_star: return l <= k && n - k <= m - l;
    default: throw std::invalid_argument("corollary check supports c_star and b_star only");
  }
}

int exit_code(Conclusion c) {
  switch (c) {
    case Conclusion::certified: return 0;
    case Conclusion::not_certified: return 2;
    case Conclusion::inconclusive: return 3;
  }
  return 3;
}

}  // namespace coherent_age
