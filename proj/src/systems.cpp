#include "coherent_age/systems.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coherent_age {

namespace {

std::int64_t binomial_int(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void require_unit_interval(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("distortion argument outside [0, 1]");
}

// sum_i w_i p^i q^(degree - i)
template <typename Int>
double bernstein_sum(std::span<const Int> w, int degree, double p) {
  const double q = 1.0 - p;
  double s = 0.0;
  for (int i = 0; i <= degree; ++i) {
    if (w[i] == 0) continue;
    s += static_cast<double>(w[i]) * std::pow(p, i) * std::pow(q, degree - i);
  }
  return s;
}

bool is_polynomial_family(const Copula& c) {
  return c.family() == CopulaFamily::independence || c.family() == CopulaFamily::fgm;
}

// Portion of an FGM distortion beyond its independence part: theta c_3 p^3 q^3.
double fgm_extra(const Distortion& d, double p) {
  if (d.copula().family() != CopulaFamily::fgm) return 0.0;
  const double q = 1.0 - p;
  return d.copula().theta() * static_cast<double>(d.coefficients()[3]) * p * p * p * q * q * q;
}

double fgm_extra_deriv(const Distortion& d, double p) {
  if (d.copula().family() != CopulaFamily::fgm) return 0.0;
  const double q = 1.0 - p;
  return 3.0 * d.copula().theta() * static_cast<double>(d.coefficients()[3]) * p * p * q * q * (q - p);
}

Flagged ratio(double num, double den, bool clamped) {
  if (den < kUnderflowFloor) {
    if (std::abs(num) < kUnderflowFloor)
      return {std::numeric_limits<double>::quiet_NaN(), Flag::indeterminate};
    return {std::numeric_limits<double>::infinity(), Flag::underflow};
  }
  return {num / den, clamped ? Flag::clamped : Flag::none};
}

double clamp_probability(double p, double eps, bool& moved) {
  require_unit_interval(p);
  const double c = std::clamp(p, eps, 1.0 - eps);
  moved = c != p;
  return c;
}

// Central difference of a functional with one Richardson step; the step
// shrinks near the ends of (0, 1).
template <typename Functional>
Flagged log_slope(const Distortion& d, double p, double step, Functional&& g, double weight) {
  require_unit_interval(p);
  const double delta = std::min({step, p / 2.0, (1.0 - p) / 2.0});
  if (!(delta > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), Flag::indeterminate};
  const Flagged mid = g(d, p);
  if (!mid.usable()) return mid;
  if (mid.value == 0.0) return {std::numeric_limits<double>::quiet_NaN(), Flag::indeterminate};
  bool clamped = mid.flag == Flag::clamped;
  double central[2];
  for (int level = 0; level < 2; ++level) {
    const double h = level == 0 ? delta : delta / 2.0;
    const Flagged lo = g(d, p - h);
    const Flagged hi = g(d, p + h);
    if (!lo.usable()) return lo;
    if (!hi.usable()) return hi;
    clamped = clamped || lo.flag == Flag::clamped || hi.flag == Flag::clamped;
    central[level] = (hi.value - lo.value) / (2.0 * h);
  }
  const double derivative = (4.0 * central[1] - central[0]) / 3.0;
  return {weight * derivative / mid.value, clamped ? Flag::clamped : Flag::none};
}

}  // namespace

double binomial(int n, int k) { return static_cast<double>(binomial_int(n, k)); }

// -- Structure ---------------------------------------------------------------

Structure::Structure(int n, const std::vector<std::vector<int>>& paths) : n_(n) {
  if (n < 1 || n > kMaxComponents)
    throw std::invalid_argument("component count must lie in [1, " + std::to_string(kMaxComponents) + "]");
  if (paths.empty()) throw std::invalid_argument("structure needs at least one minimal path set");
  if (static_cast<int>(paths.size()) > kMaxPaths)
    throw std::invalid_argument("structures with more than " + std::to_string(kMaxPaths) +
                                " minimal path sets are not supported");

  for (const auto& path : paths) {
    if (path.empty()) throw std::invalid_argument("minimal path sets must be nonempty");
    std::uint32_t mask = 0;
    for (int idx : path) {
      if (idx < 1 || idx > n) throw std::invalid_argument("component index " + std::to_string(idx) + " out of range");
      const std::uint32_t bit = 1u << (idx - 1);
      if (mask & bit) throw std::invalid_argument("component " + std::to_string(idx) + " repeated in a path set");
      mask |= bit;
    }
    masks_.push_back(mask);
  }

  for (std::size_t a = 0; a < masks_.size(); ++a)
    for (std::size_t b = 0; b < masks_.size(); ++b)
      if (a != b && (masks_[a] & masks_[b]) == masks_[a])
        throw std::invalid_argument("path sets are not minimal: one contains another");

  std::uint32_t covered = 0;
  for (std::uint32_t m : masks_) covered |= m;
  const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1u;
  if (covered != all) throw std::invalid_argument("structure is not coherent: some component is irrelevant");
}

Structure Structure::series(int n) { return k_out_of_n(n, n); }

Structure Structure::parallel(int n) { return k_out_of_n(1, n); }

Structure Structure::k_out_of_n(int k, int n) {
  if (k < 1 || k > n) throw std::invalid_argument("k-out-of-n requires 1 <= k <= n");
  std::vector<std::vector<int>> paths;
  if (n > kMaxComponents || binomial_int(n, k) > kMaxPaths)
    throw std::invalid_argument("k-out-of-n structure has too many minimal path sets");
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (std::popcount(m) != k) continue;
    std::vector<int> path;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1u) path.push_back(i + 1);
    paths.push_back(std::move(path));
  }
  return Structure(n, paths);
}

std::vector<std::vector<int>> Structure::paths() const {
  std::vector<std::vector<int>> out;
  for (std::uint32_t m : masks_) {
    std::vector<int> path;
    for (int i = 0; i < n_; ++i)
      if (m >> i & 1u) path.push_back(i + 1);
    out.push_back(std::move(path));
  }
  return out;
}

bool Structure::works(std::uint32_t state) const {
  for (std::uint32_t m : masks_)
    if ((state & m) == m) return true;
  return false;
}

// -- Distortion --------------------------------------------------------------

Distortion::Distortion(std::vector<std::int64_t> coefficients, Copula copula)
    : coef_(std::move(coefficients)), copula_(copula) {
  const int n = copula_.dimension();
  if (static_cast<int>(coef_.size()) != n + 1)
    throw std::invalid_argument("distortion needs one coefficient per count 0..n");
  if (coef_[0] != 0) throw std::invalid_argument("distortion must vanish at p = 0");
  std::int64_t total = 0;
  for (auto c : coef_) total += c;
  if (total != 1) throw std::invalid_argument("distortion must equal 1 at p = 1");

  polynomial_ = is_polynomial_family(copula_);
  if (!polynomial_) return;

  working_.assign(n + 1, 0);
  failed_.assign(n + 1, 0);
  slope_.assign(n, 0);
  // p^j = sum_{i >= j} C(n-j, i-j) p^i q^(n-i)
  for (int j = 0; j <= n; ++j)
    for (int i = j; i <= n; ++i) working_[i] += coef_[j] * binomial_int(n - j, i - j);
  for (int i = 0; i <= n; ++i) failed_[i] = binomial_int(n, i) - working_[i];
  for (int i = 0; i < n; ++i) slope_[i] = (i + 1) * working_[i + 1] - (n - i) * working_[i];
}

Distortion build_distortion(const Structure& s, const Copula& c) {
  if (c.dimension() != s.size())
    throw std::invalid_argument("copula dimension " + std::to_string(c.dimension()) +
                                " does not match structure size " + std::to_string(s.size()));
  const auto masks = s.path_masks();
  const std::size_t families = std::size_t{1} << masks.size();
  std::vector<std::int64_t> coef(s.size() + 1, 0);
  std::vector<std::uint32_t> unions(families, 0);
  for (std::size_t f = 1; f < families; ++f) {
    const int low = std::countr_zero(f);
    unions[f] = unions[f & (f - 1)] | masks[low];
    const int sign = std::popcount(f) % 2 == 1 ? 1 : -1;
    coef[std::popcount(unions[f])] += sign;
  }
  return Distortion(std::move(coef), c);
}

Distortion kofn_distortion(int k, int n) {
  if (n < 1 || n > Structure::kMaxComponents || k < 1 || k > n)
    throw std::invalid_argument("k-out-of-n requires 1 <= k <= n <= " + std::to_string(Structure::kMaxComponents));
  std::vector<std::int64_t> coef(n + 1, 0);
  // C(n,i) p^i (1-p)^(n-i) = sum_t C(n,i) C(n-i,t) (-1)^t p^(i+t)
  for (int i = k; i <= n; ++i)
    for (int t = 0; t <= n - i; ++t)
      coef[i + t] += (t % 2 == 0 ? 1 : -1) * binomial_int(n, i) * binomial_int(n - i, t);
  return Distortion(std::move(coef), Copula::independence(n));
}

double distortion_value(const Distortion& d, double p) {
  require_unit_interval(p);
  const int n = d.dimension();
  if (d.polynomial()) return bernstein_sum(d.working_counts(), n, p) + fgm_extra(d, p);
  double s = 0.0;
  for (int j = 1; j <= n; ++j)
    if (d.coefficients()[j] != 0) s += static_cast<double>(d.coefficients()[j]) * eval_exchangeable(d.copula(), p, j);
  return std::clamp(s, 0.0, 1.0);
}

double distortion_complement(const Distortion& d, double p) {
  require_unit_interval(p);
  const int n = d.dimension();
  if (d.polynomial()) return bernstein_sum(d.failed_counts(), n, p) - fgm_extra(d, p);
  // sum_j c_j = 1 and c_0 = 0, so 1 - h = sum_j c_j (1 - K_j)
  double s = 0.0;
  for (int j = 1; j <= n; ++j)
    if (d.coefficients()[j] != 0)
      s += static_cast<double>(d.coefficients()[j]) * eval_exchangeable_complement(d.copula(), p, j);
  return std::clamp(s, 0.0, 1.0);
}

double distortion_derivative(const Distortion& d, double p) {
  require_unit_interval(p);
  const int n = d.dimension();
  if (d.polynomial()) return bernstein_sum(d.slope_counts(), n - 1, p) + fgm_extra_deriv(d, p);
  double s = 0.0;
  for (int j = 1; j <= n; ++j)
    if (d.coefficients()[j] != 0)
      s += static_cast<double>(d.coefficients()[j]) * eval_exchangeable_deriv(d.copula(), p, j);
  return s;
}

double distortion_derivative_numeric(const Distortion& d, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("numeric derivative needs p in (0, 1)");
  double delta = std::max(1e-6, 1e-6 * std::min(p, 1.0 - p));
  delta = std::min({delta, p, 1.0 - p});
  return (distortion_value(d, p + delta) - distortion_value(d, p - delta)) / (2.0 * delta);
}

Flagged hazard_transfer(const Distortion& d, double p, double eps) {
  bool moved = false;
  const double pc = clamp_probability(p, eps, moved);
  return ratio(pc * distortion_derivative(d, pc), distortion_value(d, pc), moved);
}

Flagged reversed_transfer(const Distortion& d, double p, double eps) {
  bool moved = false;
  const double pc = clamp_probability(p, eps, moved);
  return ratio((1.0 - pc) * distortion_derivative(d, pc), distortion_complement(d, pc), moved);
}

Flagged hazard_transfer_slope(const Distortion& d, double p, double step) {
  return log_slope(d, p, step, [](const Distortion& dd, double x) { return hazard_transfer(dd, x); }, 1.0 - p);
}

Flagged reversed_transfer_slope(const Distortion& d, double p, double step) {
  return log_slope(d, p, step, [](const Distortion& dd, double x) { return reversed_transfer(dd, x); }, p);
}

}  // namespace coherent_age
