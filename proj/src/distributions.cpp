#include "coherent_age/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coherent_age {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -ln(kUnderflowFloor): past this cumulative hazard sf is treated as underflowed.
const double kMaxCumHazard = -std::log(kUnderflowFloor);

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be a positive finite number");
}

// Closed-form cumulative hazard; every other function is derived from it.
double cum_hazard_raw(const Distribution& d, double x) {
  switch (d.family()) {
    case Family::exponential: return d.first() * x;
    case Family::linear_failure_rate: return d.first() * (x + d.second() * x * x);
    case Family::weibull: return std::pow(x / d.second(), d.first());
  }
  return 0.0;
}

}  // namespace

Distribution Distribution::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return {Family::exponential, rate, 0.0};
}

Distribution Distribution::linear_failure_rate(double alpha, double beta) {
  require_positive(alpha, "linear failure rate alpha");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("linear failure rate beta must be a nonnegative finite number");
  return {Family::linear_failure_rate, alpha, beta};
}

Distribution Distribution::weibull(double shape, double scale) {
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  return {Family::weibull, shape, scale};
}

double sf(const Distribution& d, double x) {
  if (x <= 0.0) return 1.0;
  return std::exp(-cum_hazard_raw(d, x));
}

double cdf(const Distribution& d, double x) {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-cum_hazard_raw(d, x));
}

double hazard(const Distribution& d, double x) {
  switch (d.family()) {
    case Family::exponential: return d.first();
    case Family::linear_failure_rate: return d.first() * (1.0 + 2.0 * d.second() * x);
    case Family::weibull: {
      const double k = d.first();
      const double lambda = d.second();
      if (x <= 0.0) return k < 1.0 ? kInf : (k == 1.0 ? 1.0 / lambda : 0.0);
      return (k / lambda) * std::pow(x / lambda, k - 1.0);
    }
  }
  return 0.0;
}

double pdf(const Distribution& d, double x) {
  if (x < 0.0) return 0.0;
  const double r = hazard(d, x);
  if (std::isinf(r)) return r;
  return r * sf(d, x);
}

Flagged rev_hazard(const Distribution& d, double x) {
  const double F = cdf(d, x);
  if (F < kUnderflowFloor) return {kInf, Flag::underflow};
  // f / F = r / (e^Delta - 1)
  const double t = cum_hazard_raw(d, x);
  return {hazard(d, x) / std::expm1(t), Flag::none};
}

Flagged cum_hazard(const Distribution& d, double x) {
  const double t = x <= 0.0 ? 0.0 : cum_hazard_raw(d, x);
  if (t > kMaxCumHazard) return {kInf, Flag::underflow};
  return {t, Flag::none};
}

Flagged cum_rev_hazard(const Distribution& d, double x) {
  if (x <= 0.0) return {kInf, Flag::underflow};
  const double t = cum_hazard_raw(d, x);
  const double F = -std::expm1(-t);
  if (F < kUnderflowFloor) return {kInf, Flag::underflow};
  // Pick the branch that avoids cancellation in ln F.
  const double value = t > M_LN2 ? -std::log1p(-std::exp(-t)) : -std::log(F);
  return {value, Flag::none};
}

double inverse_cum_hazard(const Distribution& d, double t) {
  if (t < 0.0 || std::isnan(t)) throw std::domain_error("cumulative hazard level must be >= 0");
  if (t == 0.0) return 0.0;
  switch (d.family()) {
    case Family::exponential: return t / d.first();
    case Family::linear_failure_rate: {
      // alpha beta x^2 + alpha x - t = 0, positive root in the cancellation-free form
      const double a = d.first();
      const double b = d.second();
      return 2.0 * t / (a + std::sqrt(a * a + 4.0 * a * b * t));
    }
    case Family::weibull: return d.second() * std::pow(t, 1.0 / d.first());
  }
  return 0.0;
}

double quantile_sf(const Distribution& d, double u) {
  if (!(u > 0.0) || u > 1.0) throw std::domain_error("survival level must lie in (0, 1]");
  return inverse_cum_hazard(d, -std::log(u));
}

Eigen::ArrayXd sf(const Distribution& d, const Eigen::ArrayXd& x) {
  return x.unaryExpr([&d](double v) { return sf(d, v); });
}

Eigen::ArrayXd cdf(const Distribution& d, const Eigen::ArrayXd& x) {
  return x.unaryExpr([&d](double v) { return cdf(d, v); });
}

Eigen::ArrayXd pdf(const Distribution& d, const Eigen::ArrayXd& x) {
  return x.unaryExpr([&d](double v) { return pdf(d, v); });
}

const char* family_name(Family f) {
  switch (f) {
    case Family::exponential: return "exp";
    case Family::linear_failure_rate: return "lfr";
    case Family::weibull: return "weibull";
  }
  return "?";
}

}  // namespace coherent_age
