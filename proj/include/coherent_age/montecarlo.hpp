#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "coherent_age/copulas.hpp"
#include "coherent_age/distributions.hpp"
#include "coherent_age/systems.hpp"

namespace coherent_age {

/// Sample rows are split into stream_count contiguous blocks, each drawn from
/// its own generator seeded from (seed, block index). Output depends only on
/// (sample_count, seed, stream_count), never on the thread count.
struct SimConfig {
  std::int64_t sample_count = 100000;
  std::uint64_t seed = 20240601;
  int stream_count = 16;
  int threads = 0;  // 0: COHERENT_AGE_THREADS, else hardware concurrency
};

using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct CopulaSample {
  SampleMatrix u;               // sample_count x dimension, entries in (0, 1)
  double acceptance_rate = 1.0;  // below 1 only for rejection sampling (FGM)
};

/// Rows U with P(U_1 <= p_1, ..., U_n <= p_n) = K(p). Feeding U_i through the
/// inverse survival function gives lifetimes with survival copula K.
CopulaSample sample_copula(const Copula& c, const SimConfig& cfg);

struct SurvivalComparison {
  Eigen::ArrayXd x;
  Eigen::ArrayXd empirical;
  Eigen::ArrayXd analytic;
  Eigen::ArrayXd std_err;  // sqrt(h (1 - h) / N) from the analytic value
  std::uint64_t seed = 0;
  std::int64_t samples = 0;

  [[nodiscard]] Eigen::ArrayXd standardized() const;
  [[nodiscard]] double max_abs_standardized() const;
};

/// Empirical P(tau > x) from simulated component lifetimes X_i = sf^-1(U_i),
/// beside the analytic h(sf(x)).
SurvivalComparison simulate_system(const Structure& s, const Copula& c, const Distribution& d,
                                   const Eigen::ArrayXd& x, const SimConfig& cfg);

/// Points where the analytic system survival runs linearly from hi_level down to lo_level.
Eigen::ArrayXd system_quantile_grid(const Distortion& h, const Distribution& d, int points = 20,
                                    double lo_level = 0.05, double hi_level = 0.95);

/// Effective worker count: requested if positive, else COHERENT_AGE_THREADS, else hardware.
int resolve_thread_count(int requested);

/// Seed of one substream: SplitMix64 mix of the run seed and the stream index.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace coherent_age
