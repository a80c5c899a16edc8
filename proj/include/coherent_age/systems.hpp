#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "coherent_age/copulas.hpp"
#include "coherent_age/numeric.hpp"

namespace coherent_age {

/// A coherent structure given by its minimal path sets.
///
/// Component indices are 1-based at the interface and stored as bit masks.
/// Construction rejects non-minimal families, irrelevant components and more
/// than kMaxPaths path sets.
class Structure {
 public:
  static constexpr int kMaxComponents = 30;
  static constexpr int kMaxPaths = 20;

  Structure(int n, const std::vector<std::vector<int>>& paths);

  static Structure series(int n);
  static Structure parallel(int n);
  static Structure k_out_of_n(int k, int n);

  [[nodiscard]] int size() const { return n_; }
  [[nodiscard]] std::span<const std::uint32_t> path_masks() const { return masks_; }
  [[nodiscard]] std::vector<std::vector<int>> paths() const;

  /// Structure function on a component state mask (bit i set = component i+1 works).
  [[nodiscard]] bool works(std::uint32_t state) const;

  /// System lifetime: max over paths of the min lifetime on the path.
  template <typename Derived>
  [[nodiscard]] double lifetime(const Eigen::DenseBase<Derived>& component_lifetimes) const {
    double best = 0.0;
    for (std::uint32_t mask : masks_) {
      double path_min = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i)
        if (mask >> i & 1u) path_min = std::min(path_min, static_cast<double>(component_lifetimes(i)));
      best = std::max(best, path_min);
    }
    return best;
  }

 private:
  int n_;
  std::vector<std::uint32_t> masks_;
};

/// Dual distortion h(p) = sum_j c_j K_j(p), K_j = eval_exchangeable(copula, p, j).
///
/// For the independence and FGM copulas the polynomial part is also kept in
/// Bernstein form, which gives h, 1 - h and h' without cancellation at
/// either end of [0, 1].
class Distortion {
 public:
  Distortion(std::vector<std::int64_t> coefficients, Copula copula);

  [[nodiscard]] const Copula& copula() const { return copula_; }
  [[nodiscard]] int dimension() const { return copula_.dimension(); }
  /// c_0 .. c_n.
  [[nodiscard]] std::span<const std::int64_t> coefficients() const { return coef_; }

  // Bernstein data (polynomial families only).
  [[nodiscard]] bool polynomial() const { return polynomial_; }
  [[nodiscard]] std::span<const std::int64_t> working_counts() const { return working_; }
  [[nodiscard]] std::span<const std::int64_t> failed_counts() const { return failed_; }
  [[nodiscard]] std::span<const std::int64_t> slope_counts() const { return slope_; }

 private:
  std::vector<std::int64_t> coef_;
  Copula copula_;
  bool polynomial_ = false;
  std::vector<std::int64_t> working_;  // h_ind(p) = sum_i working_[i] p^i q^(n-i)
  std::vector<std::int64_t> failed_;   // 1 - h_ind(p) = sum_i failed_[i] p^i q^(n-i)
  std::vector<std::int64_t> slope_;    // h_ind'(p) = sum_i slope_[i] p^i q^(n-1-i)
};

/// Inclusion-exclusion over unions of minimal path sets.
Distortion build_distortion(const Structure& s, const Copula& c);

/// h_{k|n}(p) = sum_{j=k}^n C(n,j) p^j (1-p)^(n-j) under independence.
Distortion kofn_distortion(int k, int n);

double binomial(int n, int k);

// p in [0, 1]; throws std::domain_error otherwise.
double distortion_value(const Distortion& d, double p);
double distortion_complement(const Distortion& d, double p);  // 1 - h(p)
double distortion_derivative(const Distortion& d, double p);  // closed form
/// Central difference with step max(1e-6, 1e-6 min(p, 1-p)); p in (0, 1).
double distortion_derivative_numeric(const Distortion& d, double p);

inline constexpr double kFunctionalEps = 1e-9;
inline constexpr double kSecondLevelStep = 1e-5;

/// p h'(p) / h(p), evaluated at p clamped into [eps, 1 - eps].
Flagged hazard_transfer(const Distortion& d, double p, double eps = kFunctionalEps);
/// (1 - p) h'(p) / (1 - h(p)), evaluated at p clamped into [eps, 1 - eps].
Flagged reversed_transfer(const Distortion& d, double p, double eps = kFunctionalEps);

/// (1 - p) H'(p) / H(p) with H' by central differences of hazard_transfer.
Flagged hazard_transfer_slope(const Distortion& d, double p, double step = kSecondLevelStep);
/// p R'(p) / R(p) with R' by central differences of reversed_transfer.
Flagged reversed_transfer_slope(const Distortion& d, double p, double step = kSecondLevelStep);

}  // namespace coherent_age
