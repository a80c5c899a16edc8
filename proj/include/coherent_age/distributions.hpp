#pragma once

#include <Eigen/Core>

#include "coherent_age/numeric.hpp"

namespace coherent_age {

enum class Family { exponential, linear_failure_rate, weibull };

/// A parametric lifetime law on [0, inf).
///
/// Survival functions:
///   exponential          exp(-rate x)
///   linear_failure_rate  exp(-alpha (x + beta x^2))
///   weibull              exp(-(x / scale)^shape)
///
/// Parameters are validated on construction and never change afterwards.
class Distribution {
 public:
  static Distribution exponential(double rate);
  static Distribution linear_failure_rate(double alpha, double beta);
  static Distribution weibull(double shape, double scale);

  [[nodiscard]] Family family() const { return family_; }

  // exponential: rate; linear_failure_rate: alpha; weibull: shape
  [[nodiscard]] double first() const { return first_; }
  // linear_failure_rate: beta; weibull: scale; exponential: unused (0)
  [[nodiscard]] double second() const { return second_; }

  bool operator==(const Distribution&) const = default;

 private:
  Distribution(Family f, double a, double b) : family_(f), first_(a), second_(b) {}

  Family family_;
  double first_;
  double second_;
};

// Closed forms. x is a lifetime (x >= 0).
double sf(const Distribution& d, double x);
double cdf(const Distribution& d, double x);
double pdf(const Distribution& d, double x);
double hazard(const Distribution& d, double x);

/// f/F. Flagged infinity when F underflows.
Flagged rev_hazard(const Distribution& d, double x);
/// -ln sf. Flagged infinity when sf < kUnderflowFloor.
Flagged cum_hazard(const Distribution& d, double x);
/// -ln cdf. Flagged infinity when cdf < kUnderflowFloor (in particular at x = 0).
Flagged cum_rev_hazard(const Distribution& d, double x);

/// The x with cum_hazard(x) = t, t >= 0.
double inverse_cum_hazard(const Distribution& d, double t);
/// The x with sf(x) = u, u in (0, 1].
double quantile_sf(const Distribution& d, double u);
/// The x with cdf(x) = q, q in [0, 1).
inline double quantile(const Distribution& d, double q) { return inverse_cum_hazard(d, -std::log1p(-q)); }

// Elementwise versions for grid sweeps.
Eigen::ArrayXd sf(const Distribution& d, const Eigen::ArrayXd& x);
Eigen::ArrayXd cdf(const Distribution& d, const Eigen::ArrayXd& x);
Eigen::ArrayXd pdf(const Distribution& d, const Eigen::ArrayXd& x);

const char* family_name(Family f);

}  // namespace coherent_age
