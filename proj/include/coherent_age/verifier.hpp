#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coherent_age/orders.hpp"

namespace coherent_age {

struct VerifierConfig {
  double eps_endpoint = 1e-3;          // p-grid covers [eps, 1 - eps]
  Eigen::Index p_grid_size = kDefaultGridSize;
  Eigen::Index x_grid_size = kDefaultGridSize;
  double tol = kClosedFormTol;         // ratio and margin checks
  double fd_tol = kFiniteDifferenceTol;  // checks that involve H' or R'
  double sign_slack = 1e-8;            // "negative"/"positive" allow this much of the wrong sign
  std::optional<Grid> x_grid;          // overrides both default x-grids below
  // Defaults: margin checks use the margin-mixture grid, the direct system
  // check uses the system-lifetime mixture grid.
};

enum class ConditionStatus { pass, fail, inconclusive };
enum class Conclusion { certified, not_certified, inconclusive };

const char* status_name(ConditionStatus s);
const char* conclusion_name(Conclusion c);

struct ConditionEntry {
  std::string name;       // "i", "ii", "iii", "iv"
  std::string statement;  // what was checked, in words
  ConditionStatus status = ConditionStatus::pass;
  bool boundary = false;  // passed only because the expression is identically zero within slack
  double witness = 0.0;   // p (conditions i-iii) or x (condition iv) of the worst violation
  double violation = 0.0;
  std::string detail;
};

/// Condition-by-condition outcome of one sufficient-condition route, with the
/// direct grid check of the target order attached for comparison.
struct ConditionReport {
  std::string theorem;  // "cstar" or "bstar"
  Relation target = Relation::c_star;
  std::vector<ConditionEntry> conditions;
  Conclusion conclusion = Conclusion::not_certified;
  std::vector<std::string> failed;  // names of failed conditions
  OrderVerdict direct;

  /// False only for a certified report whose direct check disagrees.
  [[nodiscard]] bool consistent() const {
    return conclusion != Conclusion::certified || direct.holds == Holds::yes;
  }
  [[nodiscard]] const ConditionEntry& condition(const std::string& name) const;
};

/// tau1 <c_star tau2 via: (i) H1/H2 decreasing; (ii)/(iii) (1-p)Hk'/Hk negative
/// and decreasing; (iv) X <c_star Y and Y <=st X. Certified on {i,ii,iv} or {i,iii,iv}.
ConditionReport verify_cstar(const SystemModel& first, const SystemModel& second, const VerifierConfig& cfg = {});

/// tau1 <b_star tau2 via: (i) R1/R2 increasing; (ii)/(iii) p Rk'/Rk positive and
/// decreasing; (iv) X <b_star Y and X <=st Y. Certified on {i,ii,iv} or {i,iii,iv}.
ConditionReport verify_bstar(const SystemModel& first, const SystemModel& second, const VerifierConfig& cfg = {});

/// Index conditions under which k-out-of-n versus l-out-of-m inherits the order:
/// c_star: k <= l and m - l <= n - k;  b_star: l <= k and n - k <= m - l.
bool corollary_index_check(int k, int n, int l, int m, Relation relation);

/// Exit code convention: 0 certified, 2 not certified, 3 inconclusive.
int exit_code(Conclusion c);

}  // namespace coherent_age
