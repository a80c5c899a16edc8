#include "coherent_age/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace coherent_age {

namespace {

constexpr int kMaxProposalsPerRow = 1000;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Open interval (0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& gen) { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53; }

double exponential1(std::mt19937_64& gen) { return -std::log(uniform01(gen)); }

// Positive stable variate with Laplace transform exp(-t^alpha), 0 < alpha < 1 (Kanter's form of CMS).
double positive_stable(double alpha, std::mt19937_64& gen) {
  const double u = std::numbers::pi * uniform01(gen);
  const double w = exponential1(gen);
  const double a = std::pow(std::pow(std::sin(alpha * u), alpha) * std::pow(std::sin((1.0 - alpha) * u), 1.0 - alpha) /
                                std::sin(u),
                            1.0 / (1.0 - alpha));
  return std::pow(a / w, (1.0 - alpha) / alpha);
}

struct StreamResult {
  std::int64_t proposals = 0;
};

StreamResult fill_rows(const Copula& c, SampleMatrix& out, Eigen::Index begin, Eigen::Index end,
                       std::mt19937_64& gen) {
  StreamResult res;
  const int n = c.dimension();
  const double theta = c.theta();
  for (Eigen::Index r = begin; r < end; ++r) {
    switch (c.family()) {
      case CopulaFamily::independence:
        for (int i = 0; i < n; ++i) out(r, i) = uniform01(gen);
        ++res.proposals;
        break;
      case CopulaFamily::fgm: {
        // density 1 + theta prod(1 - 2u_i) <= 1 + |theta|
        const double bound = 1.0 + std::abs(theta);
        int tries = 0;
        for (;;) {
          ++res.proposals;
          if (++tries > kMaxProposalsPerRow)
            throw NumericError("FGM rejection sampler exceeded " + std::to_string(kMaxProposalsPerRow) +
                               " proposals for one row");
          double prod = 1.0;
          for (int i = 0; i < n; ++i) {
            out(r, i) = uniform01(gen);
            prod *= 1.0 - 2.0 * out(r, i);
          }
          if (uniform01(gen) * bound <= 1.0 + theta * prod) break;
        }
        break;
      }
      case CopulaFamily::gumbel_hougaard: {
        ++res.proposals;
        if (theta == 1.0) {
          for (int i = 0; i < n; ++i) out(r, i) = uniform01(gen);
          break;
        }
        const double alpha = 1.0 / theta;
        const double s = positive_stable(alpha, gen);
        for (int i = 0; i < n; ++i) out(r, i) = std::exp(-std::pow(exponential1(gen) / s, alpha));
        break;
      }
      case CopulaFamily::clayton_oakes: {
        ++res.proposals;
        std::gamma_distribution<double> frailty(1.0 / theta, 1.0);
        const double v = frailty(gen);
        for (int i = 0; i < n; ++i) out(r, i) = std::exp(-std::log1p(exponential1(gen) / v) / theta);
        break;
      }
    }
  }
  return res;
}

void require_config(const SimConfig& cfg) {
  if (cfg.sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
  if (cfg.stream_count < 1) throw std::invalid_argument("stream_count must be >= 1");
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t base = splitmix64(state);
  state = base ^ (stream * 0xD1B54A32D192ED03ull);
  return splitmix64(state);
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COHERENT_AGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

CopulaSample sample_copula(const Copula& c, const SimConfig& cfg) {
  require_config(cfg);
  CopulaSample sample;
  sample.u.resize(cfg.sample_count, c.dimension());

  const int streams = cfg.stream_count;
  std::vector<StreamResult> results(streams);
  std::vector<std::exception_ptr> errors(streams);
  const auto block = [&](int s) {
    const Eigen::Index begin = cfg.sample_count * s / streams;
    const Eigen::Index end = cfg.sample_count * (s + 1) / streams;
    std::mt19937_64 gen(stream_seed(cfg.seed, static_cast<std::uint64_t>(s)));
    try {
      results[s] = fill_rows(c, sample.u, begin, end, gen);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  };

  const int workers = std::min(resolve_thread_count(cfg.threads), streams);
  if (workers <= 1) {
    for (int s = 0; s < streams; ++s) block(s);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int s = w; s < streams; s += workers) block(s);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::int64_t proposals = 0;
  for (const auto& r : results) proposals += r.proposals;
  sample.acceptance_rate = static_cast<double>(cfg.sample_count) / static_cast<double>(proposals);
  return sample;
}

Eigen::ArrayXd SurvivalComparison::standardized() const {
  Eigen::ArrayXd z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double diff = empirical[i] - analytic[i];
    z[i] = std_err[i] > 0.0 ? diff / std_err[i] : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  }
  return z;
}

double SurvivalComparison::max_abs_standardized() const {
  return x.size() == 0 ? 0.0 : standardized().abs().maxCoeff();
}

SurvivalComparison simulate_system(const Structure& s, const Copula& c, const Distribution& d,
                                   const Eigen::ArrayXd& x, const SimConfig& cfg) {
  if (c.dimension() != s.size()) throw std::invalid_argument("copula dimension does not match structure size");
  const Distortion h = build_distortion(s, c);
  const CopulaSample sample = sample_copula(c, cfg);

  std::vector<double> lifetimes(static_cast<std::size_t>(cfg.sample_count));
  Eigen::ArrayXd components(s.size());
  for (Eigen::Index r = 0; r < sample.u.rows(); ++r) {
    for (int i = 0; i < s.size(); ++i) components[i] = quantile_sf(d, sample.u(r, i));
    lifetimes[static_cast<std::size_t>(r)] = s.lifetime(components);
  }
  std::sort(lifetimes.begin(), lifetimes.end());

  SurvivalComparison out;
  out.x = x;
  out.seed = cfg.seed;
  out.samples = cfg.sample_count;
  out.empirical.resize(x.size());
  out.analytic.resize(x.size());
  out.std_err.resize(x.size());
  const double n = static_cast<double>(cfg.sample_count);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto alive = lifetimes.end() - std::upper_bound(lifetimes.begin(), lifetimes.end(), x[i]);
    out.empirical[i] = static_cast<double>(alive) / n;
    out.analytic[i] = distortion_value(h, sf(d, x[i]));
    out.std_err[i] = std::sqrt(out.analytic[i] * (1.0 - out.analytic[i]) / n);
  }
  return out;
}

Eigen::ArrayXd system_quantile_grid(const Distortion& h, const Distribution& d, int points, double lo_level,
                                    double hi_level) {
  if (points < 1 || !(lo_level > 0.0) || !(hi_level < 1.0) || !(lo_level <= hi_level))
    throw std::invalid_argument("quantile grid needs points >= 1 and 0 < lo_level <= hi_level < 1");
  Eigen::ArrayXd levels = Eigen::ArrayXd::Constant(1, hi_level);
  if (points > 1) levels = Eigen::ArrayXd::LinSpaced(points, hi_level, lo_level);
  Eigen::ArrayXd x(points);
  for (int k = 0; k < points; ++k) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (distortion_value(h, mid) < levels[k] ? lo : hi) = mid;
    }
    x[k] = quantile_sf(d, 0.5 * (lo + hi));
  }
  return x;
}

}  // namespace coherent_age
