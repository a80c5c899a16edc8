#pragma once

// Reference values computed without the library: direct copula formulas,
// brute-force state enumeration and closed-form reliability polynomials.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using CopulaFn = std::function<double(const std::vector<double>&)>;

inline CopulaFn independence() {
  return [](const std::vector<double>& p) {
    double prod = 1.0;
    for (double v : p) prod *= v;
    return prod;
  };
}

inline CopulaFn fgm(double theta) {
  return [theta](const std::vector<double>& p) {
    return p[0] * p[1] * p[2] * (1.0 + theta * (1.0 - p[0]) * (1.0 - p[1]) * (1.0 - p[2]));
  };
}

inline CopulaFn gumbel(double theta) {
  return [theta](const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
      if (v <= 0.0) return 0.0;
      s += std::pow(-std::log(v), theta);
    }
    return std::exp(-std::pow(s, 1.0 / theta));
  };
}

inline CopulaFn clayton(double theta) {
  return [theta](const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
      if (v <= 0.0) return 0.0;
      s += std::pow(v, -theta);
    }
    s -= static_cast<double>(p.size()) - 1.0;
    return std::pow(s, -1.0 / theta);
  };
}

/// P(system works) by enumerating component states. The probability that
/// exactly the components in W work is sum_{T within W^c} (-1)^|T| K(p on W u T, 1 elsewhere).
inline double reliability(int n, const std::vector<std::vector<int>>& paths, const CopulaFn& k, double p) {
  const std::uint32_t full = (1u << n) - 1u;
  auto works = [&](std::uint32_t state) {
    for (const auto& path : paths) {
      bool all = true;
      for (int c : path) all = all && (state >> (c - 1) & 1u);
      if (all) return true;
    }
    return false;
  };
  auto joint = [&](std::uint32_t alive) {
    std::vector<double> args(n);
    for (int i = 0; i < n; ++i) args[i] = (alive >> i & 1u) ? p : 1.0;
    return k(args);
  };
  double total = 0.0;
  for (std::uint32_t w = 0; w <= full; ++w) {
    if (!works(w)) continue;
    const std::uint32_t rest = full & ~w;
    double prob = 0.0;
    for (std::uint32_t t = rest;; t = (t - 1) & rest) {
      const int size = __builtin_popcount(t);
      prob += (size % 2 ? -1.0 : 1.0) * joint(w | t);
      if (t == 0) break;
    }
    total += prob;
  }
  return total;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Reliability of a k-out-of-n system with independent components.
inline double kofn(int k, int n, double p) {
  double s = 0.0;
  for (int j = k; j <= n; ++j) s += binomial(n, j) * std::pow(p, j) * std::pow(1.0 - p, n - j);
  return s;
}

inline double kofn_deriv(int k, int n, double p) {
  // d/dp of the upper binomial tail: n C(n-1, k-1) p^(k-1) (1-p)^(n-k)
  return n * binomial(n - 1, k - 1) * std::pow(p, k - 1) * std::pow(1.0 - p, n - k);
}

// min(X1, max(X2, X3)) under the trivariate FGM copula, against a series of three.
inline double bridge_h(double theta, double p) {
  return 2 * p * p - p * p * p - theta * std::pow(p, 3) * std::pow(1 - p, 3);
}

inline double bridge_hazard_ratio(double theta, double p) {
  const double num = 4 - 3 * (1 + theta) * p + 12 * theta * p * p - 15 * theta * std::pow(p, 3) + 6 * theta * std::pow(p, 4);
  const double den = 6 - 3 * (1 + theta) * p + 9 * theta * p * p - 9 * theta * std::pow(p, 3) + 3 * theta * std::pow(p, 4);
  return num / den;
}

// Gumbel series system: h(p) = p^a with a = m^(1/theta).
inline double power_reversed(double a, double p) {
  return a * (1 - p) * std::pow(p, a - 1) / (1 - std::pow(p, a));
}

inline double power_reversed_ratio(double a, double b, double p) {
  const double d = a - b;
  return a / b * (1 - (1 - std::pow(p, d)) / (1 - std::pow(p, a)));
}

inline double power_reversed_slope(double a, double p) {
  return (a - 1 - a * p + std::pow(p, a)) / (1 - p - std::pow(p, a) + std::pow(p, a + 1));
}

}  // namespace oracle
