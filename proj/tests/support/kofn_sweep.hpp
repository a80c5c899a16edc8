#pragma once

// Grid sweep of the k-out-of-n functional properties for every index
// combination up to a maximum system size.

#include <string>
#include <vector>

#include "coherent_age/orders.hpp"
#include "coherent_age/systems.hpp"

namespace sweep {

struct Outcome {
  int checks = 0;
  std::vector<std::string> failures;
};

struct Settings {
  int max_size = 6;
  double eps = 1e-3;
  Eigen::Index grid_size = 2001;
  double sign_slack = 1e-8;
  double slope_tol = 1e-6;  // monotonicity of finite-difference slopes
  double ratio_tol = 1e-8;  // monotonicity of H and R ratios
};

inline Eigen::ArrayXd sample(const coherent_age::Grid& g, auto&& f) {
  return g.points().unaryExpr([&](double p) {
    const coherent_age::Flagged v = f(p);
    return v.usable() ? v.value : std::nan("");
  });
}

inline std::string label(int k, int n) { return std::to_string(k) + "|" + std::to_string(n); }

/// (1-p)H'/H <= 0 and nonincreasing; p R'/R >= 0 and nonincreasing.
inline Outcome slopes(const Settings& s) {
  using namespace coherent_age;
  Outcome out;
  const Grid g = probability_grid(s.eps, s.grid_size);
  for (int n = 1; n <= s.max_size; ++n) {
    for (int k = 1; k <= n; ++k) {
      const Distortion h = kofn_distortion(k, n);
      const Eigen::ArrayXd hs = sample(g, [&](double p) { return hazard_transfer_slope(h, p); });
      const Eigen::ArrayXd rs = sample(g, [&](double p) { return reversed_transfer_slope(h, p); });
      out.checks += 4;
      if (!(hs.maxCoeff() <= s.sign_slack)) out.failures.push_back("H slope sign " + label(k, n));
      if (!(rs.minCoeff() >= -s.sign_slack)) out.failures.push_back("R slope sign " + label(k, n));
      if (check_monotone(hs, g, Direction::decreasing, s.slope_tol).holds != Holds::yes)
        out.failures.push_back("H slope monotone " + label(k, n));
      if (check_monotone(rs, g, Direction::decreasing, s.slope_tol).holds != Holds::yes)
        out.failures.push_back("R slope monotone " + label(k, n));
    }
  }
  return out;
}

/// H_{k|n}/H_{l|m} nonincreasing when k <= l and m-l <= n-k;
/// R_{k|n}/R_{l|m} nondecreasing when l <= k and n-k <= m-l.
inline Outcome ratios(const Settings& s) {
  using namespace coherent_age;
  Outcome out;
  const Grid g = probability_grid(s.eps, s.grid_size);
  for (int n = 1; n <= s.max_size; ++n)
    for (int k = 1; k <= n; ++k)
      for (int m = 1; m <= s.max_size; ++m)
        for (int l = 1; l <= m; ++l) {
          const Distortion first = kofn_distortion(k, n);
          const Distortion second = kofn_distortion(l, m);
          const std::string tag = label(k, n) + " vs " + label(l, m);
          if (k <= l && m - l <= n - k) {
            const Eigen::ArrayXd r = sample(g, [&](double p) {
              return Flagged{hazard_transfer(first, p).value / hazard_transfer(second, p).value, Flag::none};
            });
            ++out.checks;
            if (check_monotone(r, g, Direction::decreasing, s.ratio_tol).holds != Holds::yes)
              out.failures.push_back("H ratio " + tag);
          }
          if (l <= k && n - k <= m - l) {
            const Eigen::ArrayXd r = sample(g, [&](double p) {
              return Flagged{reversed_transfer(first, p).value / reversed_transfer(second, p).value, Flag::none};
            });
            ++out.checks;
            if (check_monotone(r, g, Direction::increasing, s.ratio_tol).holds != Holds::yes)
              out.failures.push_back("R ratio " + tag);
          }
        }
  return out;
}

}  // namespace sweep
