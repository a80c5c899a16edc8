#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

#include "coherent_age/distributions.hpp"
#include "coherent_age/systems.hpp"

namespace coherent_age {

/// Strictly increasing positive evaluation points.
class Grid {
 public:
  enum class Policy { log_spaced, linear, custom };

  static Grid linear(double lo, double hi, Eigen::Index size);
  static Grid log_spaced(double lo, double hi, Eigen::Index size);
  static Grid custom(Eigen::ArrayXd points);

  [[nodiscard]] const Eigen::ArrayXd& points() const { return points_; }
  [[nodiscard]] Policy policy() const { return policy_; }
  [[nodiscard]] Eigen::Index size() const { return points_.size(); }

 private:
  Grid(Eigen::ArrayXd points, Policy policy);

  Eigen::ArrayXd points_;
  Policy policy_;
};

inline constexpr Eigen::Index kDefaultGridSize = 2001;

/// Log-spaced grid over [q(lo_level), q(hi_level)] of the equal mixture of two margins.
Grid default_grid(const Distribution& x, const Distribution& y, Eigen::Index size = kDefaultGridSize,
                  double lo_level = 1e-3, double hi_level = 0.999);

/// Linear grid on [eps, 1 - eps] for functionals of p.
Grid probability_grid(double eps = 1e-3, Eigen::Index size = kDefaultGridSize);

enum class Relation { st, hr, rh, c, b, c_star, b_star };
enum class Holds { yes, no, inconclusive };
enum class Direction { increasing, decreasing };

const char* relation_name(Relation r);
Relation parse_relation(std::string_view name);
const char* holds_name(Holds h);

/// Worst violating consecutive pair.
struct Witness {
  double x_left = 0.0;
  double x_right = 0.0;
  double violation = 0.0;
};

struct MonotoneReport {
  Holds holds = Holds::yes;
  Witness witness;
  double tolerance = 0.0;
  Eigen::Index skipped = 0;
  Eigen::Index evaluated = 0;
};

/// Non-strict monotonicity of sampled values.
///
/// Non-finite values are skipped. A step is a violation when it goes the wrong
/// way by more than tol * max(1, |f_i|, |f_{i+1}|). More than 5% skipped points
/// makes the report inconclusive unless a violation was already found.
/// Throws NumericError when nothing is left to compare.
MonotoneReport check_monotone(const Eigen::ArrayXd& values, const Grid& grid, Direction direction, double tol);

template <typename F>
MonotoneReport check_monotone_fn(F&& f, const Grid& grid, Direction direction, double tol) {
  Eigen::ArrayXd values = grid.points().unaryExpr([&f](double x) { return static_cast<double>(f(x)); });
  return check_monotone(values, grid, direction, tol);
}

inline constexpr double kClosedFormTol = 1e-9;
inline constexpr double kFiniteDifferenceTol = 1e-6;

/// Outcome of checking X <relation> Y on a grid. A "yes" is a numerical
/// certificate on the sampled points only.
struct OrderVerdict {
  Relation relation = Relation::st;
  Holds holds = Holds::yes;
  double witness_x = 0.0;
  double violation = 0.0;
  double tolerance = 0.0;
  Eigen::Index skipped = 0;
  Eigen::Index evaluated = 0;
};

OrderVerdict check_order(const Distribution& x, const Distribution& y, Relation relation, const Grid& grid,
                         double tol = kClosedFormTol);

/// A coherent system: its dual distortion plus the common component margin.
struct SystemModel {
  Distortion distortion;
  Distribution margin;
};

/// Log-spaced grid over [q(lo_level), q(hi_level)] of the equal mixture of two system lifetimes.
Grid system_grid(const SystemModel& first, const SystemModel& second, Eigen::Index size = kDefaultGridSize,
                 double lo_level = 1e-3, double hi_level = 0.999);

/// -ln h(sf(x)) and -ln(1 - h(sf(x))), NaN where the log argument underflows.
double system_cum_hazard(const SystemModel& s, double x);
double system_cum_rev_hazard(const SystemModel& s, double x);

/// Direct check of tau1 <c_star|b_star> tau2 from the system cumulative (reversed) hazards.
OrderVerdict system_order_direct(const SystemModel& first, const SystemModel& second, Relation relation,
                                 const Grid& grid, double tol = kClosedFormTol);

struct IdentityReport {
  double max_hazard_discrepancy = 0.0;
  double max_reversed_discrepancy = 0.0;
  double worst_x_hazard = 0.0;
  double worst_x_reversed = 0.0;
  Eigen::Index points = 0;
  Eigen::Index skipped = 0;
};

/// Compares -ln h(sf(x)) with the integral of H(e^-v) over [0, cum_hazard(x)], and
/// -ln(1 - h(sf(x))) with the integral of R(1 - e^-v) over [0, cum_rev_hazard(x)].
/// Throws NumericError if the adaptive quadrature misses quad_tol.
IdentityReport integral_identity_check(const SystemModel& s, const Grid& grid, double quad_tol = 1e-10);

struct SignChanges {
  int count = 0;
  std::string pattern;  // e.g. "-+", "+", "0" when every value is within tol of zero
};

SignChanges sign_change_count(const Eigen::ArrayXd& values, double tol = 0.0);

}  // namespace coherent_age
