#pragma once

#include <Eigen/Core>

namespace coherent_age {

enum class CopulaFamily { independence, fgm, gumbel_hougaard, clayton_oakes };

/// An exchangeable survival copula K on [0,1]^n.
///
///   independence     prod p_i
///   fgm              p1 p2 p3 (1 + theta (1-p1)(1-p2)(1-p3)),  theta in [-1, 1], n = 3
///   gumbel_hougaard  exp(-(sum (-ln p_i)^theta)^(1/theta)),       theta >= 1
///   clayton_oakes    (sum p_i^-theta - (n-1))^(-1/theta),          theta > 0
///
/// Clayton-Oakes uses the standard Archimedean normalisation.
class Copula {
 public:
  static Copula independence(int dimension);
  static Copula fgm(double theta);
  static Copula gumbel_hougaard(double theta, int dimension);
  static Copula clayton_oakes(double theta, int dimension);

  [[nodiscard]] CopulaFamily family() const { return family_; }
  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] int dimension() const { return dimension_; }

  /// Same family and parameter in a different dimension (FGM stays trivariate).
  [[nodiscard]] Copula with_dimension(int dimension) const;

  bool operator==(const Copula&) const = default;

 private:
  Copula(CopulaFamily f, double theta, int dim) : family_(f), theta_(theta), dimension_(dim) {}

  CopulaFamily family_;
  double theta_;
  int dimension_;
};

/// K(p). Throws std::invalid_argument on dimension mismatch or p_i outside [0,1].
double eval(const Copula& c, const Eigen::VectorXd& p);

/// K evaluated with j coordinates at p and the remaining n - j at 1.
double eval_exchangeable(const Copula& c, double p, int j);
/// 1 - eval_exchangeable(c, p, j), computed without cancellation near p = 1.
double eval_exchangeable_complement(const Copula& c, double p, int j);
/// d/dp eval_exchangeable(c, p, j), closed form.
double eval_exchangeable_deriv(const Copula& c, double p, int j);

const char* copula_name(CopulaFamily f);

}  // namespace coherent_age
