#pragma once

#include <string>
#include <vector>

#include "coherent_age/copulas.hpp"
#include "coherent_age/distributions.hpp"
#include "coherent_age/systems.hpp"

namespace corpus {

struct Triple {
  std::string name;
  coherent_age::Structure structure;
  coherent_age::Copula copula;
  coherent_age::Distribution margin;
};

inline coherent_age::Structure bridge3() { return coherent_age::Structure(3, {{1, 2}, {1, 3}}); }

inline coherent_age::Structure bridge5() { return coherent_age::Structure(5, {{1, 4}, {2, 5}, {1, 3, 5}, {2, 3, 4}}); }

/// Twelve (structure, copula, margin) triples covering every copula and
/// margin family, the FGM bridge, the Gumbel series and a five-component bridge.
inline std::vector<Triple> golden() {
  using coherent_age::Copula;
  using coherent_age::Distribution;
  using coherent_age::Structure;
  return {
      {"series3-ind-exp1", Structure::series(3), Copula::independence(3), Distribution::exponential(1.0)},
      {"bridge3-fgm1-lfr11", bridge3(), Copula::fgm(1.0), Distribution::linear_failure_rate(1.0, 1.0)},
      {"series3-gumbel2-exp3", Structure::series(3), Copula::gumbel_hougaard(2.0, 3), Distribution::exponential(3.0)},
      {"series4-gumbel2-exp3", Structure::series(4), Copula::gumbel_hougaard(2.0, 4), Distribution::exponential(3.0)},
      {"2of3-ind-weibull21", Structure::k_out_of_n(2, 3), Copula::independence(3), Distribution::weibull(2.0, 1.0)},
      {"parallel2-gumbel1.5-exp2", Structure::parallel(2), Copula::gumbel_hougaard(1.5, 2), Distribution::exponential(2.0)},
      {"bridge3-fgm-1-exp1", bridge3(), Copula::fgm(-1.0), Distribution::exponential(1.0)},
      {"2of4-clayton2-weibull1.5", Structure::k_out_of_n(2, 4), Copula::clayton_oakes(2.0, 4), Distribution::weibull(1.5, 2.0)},
      {"parallel3-clayton0.5-lfr", Structure::parallel(3), Copula::clayton_oakes(0.5, 3), Distribution::linear_failure_rate(0.5, 2.0)},
      {"bridge5-ind-exp1", bridge5(), Copula::independence(5), Distribution::exponential(1.0)},
      {"2of3-fgm0.5-weibull0.8", Structure::k_out_of_n(2, 3), Copula::fgm(0.5), Distribution::weibull(0.8, 1.0)},
      {"3of5-gumbel3-lfr11", Structure::k_out_of_n(3, 5), Copula::gumbel_hougaard(3.0, 5), Distribution::linear_failure_rate(1.0, 1.0)},
  };
}

}  // namespace corpus
