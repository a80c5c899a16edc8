#include "coherent_age/copulas.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coherent_age {

namespace {

void require_dimension(int dim) {
  if (dim < 1) throw std::invalid_argument("copula dimension must be >= 1");
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("copula argument outside [0, 1]");
}

void require_count(const Copula& c, int j) {
  if (j < 0 || j > c.dimension())
    throw std::invalid_argument("exchangeable count " + std::to_string(j) + " outside [0, " +
                                std::to_string(c.dimension()) + "]");
}

// Clayton-Oakes diagonal section in log form: ln K_j(p) = -log1p(j (p^-theta - 1)) / theta.
double clayton_log_section(double theta, double p, int j) {
  const double s = static_cast<double>(j) * std::expm1(-theta * std::log(p));
  return -std::log1p(s) / theta;
}

}  // namespace

Copula Copula::independence(int dimension) {
  require_dimension(dimension);
  return {CopulaFamily::independence, 0.0, dimension};
}

Copula Copula::fgm(double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) throw std::invalid_argument("FGM theta must lie in [-1, 1]");
  return {CopulaFamily::fgm, theta, 3};
}

Copula Copula::gumbel_hougaard(double theta, int dimension) {
  require_dimension(dimension);
  if (!(theta >= 1.0) || !std::isfinite(theta))
    throw std::invalid_argument("Gumbel-Hougaard theta must be >= 1");
  return {CopulaFamily::gumbel_hougaard, theta, dimension};
}

Copula Copula::clayton_oakes(double theta, int dimension) {
  require_dimension(dimension);
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("Clayton-Oakes theta must be > 0");
  return {CopulaFamily::clayton_oakes, theta, dimension};
}

Copula Copula::with_dimension(int dimension) const {
  switch (family_) {
    case CopulaFamily::independence: return independence(dimension);
    case CopulaFamily::fgm:
      if (dimension != 3) throw std::invalid_argument("FGM copula is defined for three components only");
      return *this;
    case CopulaFamily::gumbel_hougaard: return gumbel_hougaard(theta_, dimension);
    case CopulaFamily::clayton_oakes: return clayton_oakes(theta_, dimension);
  }
  return *this;
}

double eval(const Copula& c, const Eigen::VectorXd& p) {
  if (p.size() != c.dimension())
    throw std::invalid_argument("copula expects " + std::to_string(c.dimension()) + " arguments, got " +
                                std::to_string(p.size()));
  for (double v : p) require_probability(v);
  if ((p.array() == 0.0).any()) return 0.0;

  switch (c.family()) {
    case CopulaFamily::independence: return p.prod();
    case CopulaFamily::fgm: {
      const double perturbation = (1.0 - p.array()).prod();
      return p.prod() * (1.0 + c.theta() * perturbation);
    }
    case CopulaFamily::gumbel_hougaard: {
      double s = 0.0;
      for (double v : p) s += std::pow(-std::log(v), c.theta());
      return std::exp(-std::pow(s, 1.0 / c.theta()));
    }
    case CopulaFamily::clayton_oakes: {
      double s = 0.0;
      for (double v : p) s += std::expm1(-c.theta() * std::log(v));
      return std::exp(-std::log1p(s) / c.theta());
    }
  }
  return 0.0;
}

double eval_exchangeable(const Copula& c, double p, int j) {
  require_count(c, j);
  require_probability(p);
  if (j == 0) return 1.0;
  if (p == 0.0) return 0.0;
  const double lp = std::log(p);
  switch (c.family()) {
    case CopulaFamily::independence: return std::pow(p, j);
    case CopulaFamily::fgm: {
      const double base = std::pow(p, j);
      if (j < 3) return base;
      const double q = 1.0 - p;
      return base * (1.0 + c.theta() * q * q * q);
    }
    case CopulaFamily::gumbel_hougaard: {
      const double a = std::pow(static_cast<double>(j), 1.0 / c.theta());
      return std::exp(a * lp);
    }
    case CopulaFamily::clayton_oakes: return std::exp(clayton_log_section(c.theta(), p, j));
  }
  return 0.0;
}

double eval_exchangeable_complement(const Copula& c, double p, int j) {
  require_count(c, j);
  require_probability(p);
  if (j == 0) return 0.0;
  if (p == 0.0) return 1.0;
  const double lp = std::log(p);
  switch (c.family()) {
    case CopulaFamily::independence: return -std::expm1(j * lp);
    case CopulaFamily::fgm: {
      const double base = -std::expm1(j * lp);
      if (j < 3) return base;
      const double q = 1.0 - p;
      return base - c.theta() * p * p * p * q * q * q;
    }
    case CopulaFamily::gumbel_hougaard: {
      const double a = std::pow(static_cast<double>(j), 1.0 / c.theta());
      return -std::expm1(a * lp);
    }
    case CopulaFamily::clayton_oakes: return -std::expm1(clayton_log_section(c.theta(), p, j));
  }
  return 0.0;
}

double eval_exchangeable_deriv(const Copula& c, double p, int j) {
  require_count(c, j);
  require_probability(p);
  if (j == 0) return 0.0;
  switch (c.family()) {
    case CopulaFamily::independence: return j * std::pow(p, j - 1);
    case CopulaFamily::fgm: {
      const double base = j * std::pow(p, j - 1);
      if (j < 3) return base;
      const double q = 1.0 - p;
      // d/dp theta p^3 q^3 = 3 theta p^2 q^2 (q - p)
      return base + 3.0 * c.theta() * p * p * q * q * (q - p);
    }
    case CopulaFamily::gumbel_hougaard: {
      const double a = std::pow(static_cast<double>(j), 1.0 / c.theta());
      if (p == 0.0) return a == 1.0 ? 1.0 : 0.0;
      return a * std::exp((a - 1.0) * std::log(p));
    }
    case CopulaFamily::clayton_oakes: {
      const double theta = c.theta();
      if (p == 0.0) return std::pow(static_cast<double>(j), -1.0 / theta);
      // j p^(-theta-1) (1 + j (p^-theta - 1))^(-1/theta - 1)
      const double lp = std::log(p);
      const double log_inner = std::log1p(static_cast<double>(j) * std::expm1(-theta * lp));
      if (!std::isfinite(log_inner)) return std::pow(static_cast<double>(j), -1.0 / theta);
      return std::exp(std::log(static_cast<double>(j)) + (-theta - 1.0) * lp + (-1.0 / theta - 1.0) * log_inner);
    }
  }
  return 0.0;
}

const char* copula_name(CopulaFamily f) {
  switch (f) {
    case CopulaFamily::independence: return "independence";
    case CopulaFamily::fgm: return "fgm";
    case CopulaFamily::gumbel_hougaard: return "gumbel";
    case CopulaFamily::clayton_oakes: return "clayton";
  }
  return "?";
}

}  // namespace coherent_age
