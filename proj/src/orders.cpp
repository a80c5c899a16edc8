#include "coherent_age/orders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace coherent_age {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinDenominator = 1e-12;
constexpr double kMaxSkippedFraction = 0.05;

double usable_or_nan(const Flagged& f) { return f.usable() ? f.value : kNaN; }

// a / b, NaN (skipped) where the denominator vanishes or either side is unusable.
Eigen::ArrayXd safe_ratio(const Eigen::ArrayXd& num, const Eigen::ArrayXd& den) {
  Eigen::ArrayXd out(num.size());
  for (Eigen::Index i = 0; i < num.size(); ++i) {
    const bool bad = !std::isfinite(num[i]) || !std::isfinite(den[i]) || std::abs(den[i]) < kMinDenominator;
    out[i] = bad ? kNaN : num[i] / den[i];
  }
  return out;
}

template <typename F>
Eigen::ArrayXd sample(const Grid& g, F&& f) {
  return g.points().unaryExpr([&f](double x) { return static_cast<double>(f(x)); });
}

OrderVerdict from_monotone(Relation r, const MonotoneReport& m) {
  OrderVerdict v;
  v.relation = r;
  v.holds = m.holds;
  v.witness_x = m.witness.x_left;
  v.violation = m.witness.violation;
  v.tolerance = m.tolerance;
  v.skipped = m.skipped;
  v.evaluated = m.evaluated;
  return v;
}

double mixture_quantile(const Distribution& x, const Distribution& y, double level) {
  double lo = std::min(quantile(x, level), quantile(y, level));
  double hi = std::max(quantile(x, level), quantile(y, level));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double m = 0.5 * (cdf(x, mid) + cdf(y, mid));
    (m < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// -- Grid --------------------------------------------------------------------

Grid::Grid(Eigen::ArrayXd points, Policy policy) : points_(std::move(points)), policy_(policy) {
  if (points_.size() == 0) throw std::invalid_argument("grid must contain at least one point");
  if (!(points_[0] > 0.0)) throw std::invalid_argument("grid points must be positive");
  for (Eigen::Index i = 1; i < points_.size(); ++i)
    if (!(points_[i] > points_[i - 1])) throw std::invalid_argument("grid points must be strictly increasing");
  if (!std::isfinite(points_[points_.size() - 1])) throw std::invalid_argument("grid points must be finite");
}

Grid Grid::linear(double lo, double hi, Eigen::Index size) {
  if (size < 2 || !(hi > lo)) throw std::invalid_argument("linear grid needs size >= 2 and hi > lo");
  return Grid(Eigen::ArrayXd::LinSpaced(size, lo, hi), Policy::linear);
}

Grid Grid::log_spaced(double lo, double hi, Eigen::Index size) {
  if (size < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log grid needs size >= 2 and 0 < lo < hi");
  Eigen::ArrayXd pts = Eigen::ArrayXd::LinSpaced(size, std::log(lo), std::log(hi)).exp();
  pts[0] = lo;
  pts[size - 1] = hi;
  return Grid(std::move(pts), Policy::log_spaced);
}

Grid Grid::custom(Eigen::ArrayXd points) { return Grid(std::move(points), Policy::custom); }

Grid default_grid(const Distribution& x, const Distribution& y, Eigen::Index size, double lo_level,
                  double hi_level) {
  return Grid::log_spaced(mixture_quantile(x, y, lo_level), mixture_quantile(x, y, hi_level), size);
}

namespace {

// P(T <= x) = level for a system lifetime T.
double system_quantile(const SystemModel& s, double level) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (distortion_complement(s.distortion, mid) > level ? lo : hi) = mid;
  }
  return quantile_sf(s.margin, std::max(hi, std::numeric_limits<double>::min()));
}

double system_sf(const SystemModel& s, double x) { return distortion_value(s.distortion, sf(s.margin, x)); }

}  // namespace

Grid system_grid(const SystemModel& first, const SystemModel& second, Eigen::Index size, double lo_level,
                 double hi_level) {
  auto mixture = [&](double level) {
    double lo = std::min(system_quantile(first, level), system_quantile(second, level));
    double hi = std::max(system_quantile(first, level), system_quantile(second, level));
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double m = 1.0 - 0.5 * (system_sf(first, mid) + system_sf(second, mid));
      (m < level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return Grid::log_spaced(mixture(lo_level), mixture(hi_level), size);
}

Grid probability_grid(double eps, Eigen::Index size) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("endpoint eps must lie in (0, 0.5)");
  return Grid::linear(eps, 1.0 - eps, size);
}

// -- names -------------------------------------------------------------------

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::st: return "st";
    case Relation::hr: return "hr";
    case Relation::rh: return "rh";
    case Relation::c: return "c";
    case Relation::b: return "b";
    case Relation::c_star: return "c_star";
    case Relation::b_star: return "b_star";
  }
  return "?";
}

Relation parse_relation(std::string_view name) {
  for (Relation r : {Relation::st, Relation::hr, Relation::rh, Relation::c, Relation::b, Relation::c_star,
                     Relation::b_star})
    if (name == relation_name(r)) return r;
  throw std::invalid_argument("unknown relation '" + std::string(name) + "'");
}

const char* holds_name(Holds h) {
  switch (h) {
    case Holds::yes: return "yes";
    case Holds::no: return "no";
    case Holds::inconclusive: return "inconclusive";
  }
  return "?";
}

// -- monotonicity ------------------------------------------------------------

MonotoneReport check_monotone(const Eigen::ArrayXd& values, const Grid& grid, Direction direction, double tol) {
  if (values.size() != grid.size()) throw std::invalid_argument("values and grid differ in length");
  MonotoneReport report;
  report.tolerance = tol;

  const auto& x = grid.points();
  Eigen::Index prev = -1;
  double worst_scaled = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    if (prev >= 0) {
      const double step = values[i] - values[prev];
      const double violation = direction == Direction::increasing ? -step : step;
      const double scale = std::max({1.0, std::abs(values[i]), std::abs(values[prev])});
      // ties (up to rounding) keep the earliest pair
      if (violation > tol * scale && violation / scale > worst_scaled * (1.0 + 1e-9)) {
        worst_scaled = violation / scale;
        report.witness = {x[prev], x[i], violation};
      }
    }
    prev = i;
  }
  if (report.evaluated == 0) throw NumericError("no evaluable grid points left after skipping flagged values");

  if (worst_scaled > 0.0)
    report.holds = Holds::no;
  else if (static_cast<double>(report.skipped) > kMaxSkippedFraction * static_cast<double>(values.size()))
    report.holds = Holds::inconclusive;
  return report;
}

// -- margins -----------------------------------------------------------------

OrderVerdict check_order(const Distribution& x, const Distribution& y, Relation relation, const Grid& grid,
                         double tol) {
  switch (relation) {
    case Relation::st: {
      OrderVerdict v;
      v.relation = relation;
      v.tolerance = tol;
      double worst = 0.0;
      for (double t : grid.points()) {
        const double d = sf(x, t) - sf(y, t);
        ++v.evaluated;
        if (d > tol && d > worst) {
          worst = d;
          v.witness_x = t;
          v.violation = d;
        }
      }
      v.holds = worst > 0.0 ? Holds::no : Holds::yes;
      return v;
    }
    case Relation::hr: {
      auto r = safe_ratio(sample(grid, [&](double t) { return sf(y, t); }),
                          sample(grid, [&](double t) { return sf(x, t); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::increasing, tol));
    }
    case Relation::rh: {
      auto r = safe_ratio(sample(grid, [&](double t) { return cdf(y, t); }),
                          sample(grid, [&](double t) { return cdf(x, t); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::increasing, tol));
    }
    case Relation::c: {
      auto r = safe_ratio(sample(grid, [&](double t) { return hazard(x, t); }),
                          sample(grid, [&](double t) { return hazard(y, t); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::increasing, tol));
    }
    case Relation::b: {
      auto r = safe_ratio(sample(grid, [&](double t) { return usable_or_nan(rev_hazard(x, t)); }),
                          sample(grid, [&](double t) { return usable_or_nan(rev_hazard(y, t)); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::decreasing, tol));
    }
    case Relation::c_star: {
      auto r = safe_ratio(sample(grid, [&](double t) { return usable_or_nan(cum_hazard(x, t)); }),
                          sample(grid, [&](double t) { return usable_or_nan(cum_hazard(y, t)); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::increasing, tol));
    }
    case Relation::b_star: {
      auto r = safe_ratio(sample(grid, [&](double t) { return usable_or_nan(cum_rev_hazard(x, t)); }),
                          sample(grid, [&](double t) { return usable_or_nan(cum_rev_hazard(y, t)); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::decreasing, tol));
    }
  }
  throw std::invalid_argument("unsupported relation");
}

// -- systems -----------------------------------------------------------------

double system_cum_hazard(const SystemModel& s, double x) {
  const double p = sf(s.margin, x);
  const double fail = distortion_complement(s.distortion, p);
  if (fail < 0.5) return -std::log1p(-fail);
  const double h = distortion_value(s.distortion, p);
  return h < kUnderflowFloor ? kNaN : -std::log(h);
}

double system_cum_rev_hazard(const SystemModel& s, double x) {
  const double p = sf(s.margin, x);
  const double h = distortion_value(s.distortion, p);
  if (h < 0.5) return -std::log1p(-h);
  const double fail = distortion_complement(s.distortion, p);
  return fail < kUnderflowFloor ? kNaN : -std::log(fail);
}

OrderVerdict system_order_direct(const SystemModel& first, const SystemModel& second, Relation relation,
                                 const Grid& grid, double tol) {
  switch (relation) {
    case Relation::c_star: {
      auto r = safe_ratio(sample(grid, [&](double t) { return system_cum_hazard(first, t); }),
                          sample(grid, [&](double t) { return system_cum_hazard(second, t); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::increasing, tol));
    }
    case Relation::b_star: {
      auto r = safe_ratio(sample(grid, [&](double t) { return system_cum_rev_hazard(first, t); }),
                          sample(grid, [&](double t) { return system_cum_rev_hazard(second, t); }));
      return from_monotone(relation, check_monotone(r, grid, Direction::decreasing, tol));
    }
    default: throw std::invalid_argument("direct system check supports c_star and b_star only");
  }
}

// -- integral identities -----------------------------------------------------

IdentityReport integral_identity_check(const SystemModel& s, const Grid& grid, double quad_tol) {
  // Integrands may be non-smooth at v = 0 (p^(2^(1/theta)) terms under Gumbel dependence).
  boost::math::quadrature::tanh_sinh<double> quadrature;

  const auto integrate = [&](auto&& f, double upper) {
    double error = 0.0;
    const double value = quadrature.integrate(f, 0.0, upper, quad_tol, &error);
    if (!std::isfinite(value) || error > 100.0 * quad_tol * std::max(1.0, std::abs(value)))
      throw NumericError("quadrature did not converge on [0, " + std::to_string(upper) + "]");
    return value;
  };
  const auto hazard_integrand = [&](double v) {
    return usable_or_nan(hazard_transfer(s.distortion, std::exp(-v)));
  };
  const auto reversed_integrand = [&](double v) {
    return usable_or_nan(reversed_transfer(s.distortion, -std::expm1(-v)));
  };

  IdentityReport report;
  for (double x : grid.points()) {
    const Flagged upper = cum_hazard(s.margin, x);
    const Flagged upper_rev = cum_rev_hazard(s.margin, x);
    const double lhs = system_cum_hazard(s, x);
    const double lhs_rev = system_cum_rev_hazard(s, x);
    if (!upper.usable() || !upper_rev.usable() || !std::isfinite(lhs) || !std::isfinite(lhs_rev)) {
      ++report.skipped;
      continue;
    }
    ++report.points;
    const double gap = std::abs(lhs - integrate(hazard_integrand, upper.value));
    if (gap >= report.max_hazard_discrepancy) {
      report.max_hazard_discrepancy = gap;
      report.worst_x_hazard = x;
    }
    const double gap_rev = std::abs(lhs_rev - integrate(reversed_integrand, upper_rev.value));
    if (gap_rev >= report.max_reversed_discrepancy) {
      report.max_reversed_discrepancy = gap_rev;
      report.worst_x_reversed = x;
    }
  }
  return report;
}

// -- sign changes ------------------------------------------------------------

SignChanges sign_change_count(const Eigen::ArrayXd& values, double tol) {
  SignChanges out;
  for (double v : values) {
    if (!std::isfinite(v) || std::abs(v) <= tol) continue;
    const char s = v > 0.0 ? '+' : '-';
    if (out.pattern.empty() || out.pattern.back() != s) out.pattern.push_back(s);
  }
  if (out.pattern.empty()) {
    out.pattern = "0";
    return out;
  }
  out.count = static_cast<int>(out.pattern.size()) - 1;
  return out;
}

}  // namespace coherent_age
