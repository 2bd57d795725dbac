#ifndef CVQKD_SIMULATOR_HPP
#define CVQKD_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cvqkd/entropy.hpp"
#include "cvqkd/estimation.hpp"

namespace cvqkd {

/// Seeded Monte Carlo description of the normal linear channel model.
/// Identical spec (including seed) gives a bit-identical Dataset.
struct SimSpec {
  enum class Modulation { Gaussian, Qpsk };

  Modulation modulation = Modulation::Gaussian;
  double v_mod = 4.0;  // Gaussian modulation variance, SNU
  double alpha = 0.5;  // QPSK amplitude
  double transmittance = 1.0;
  double excess_noise = 0.0;
  DetectionKind detection = DetectionKind::Homodyne;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Gaussian case: one (x,y) row per measured quadrature, x ~ N(0, V_Mod),
/// y = sqrt(T) x + noise of variance mu + T xi (heterodyne pays one extra
/// vacuum unit). QPSK case: 2-vector rows, labeled component mean
/// 2 sqrt(T) alpha, per-component noise variance 1 + T xi.
Dataset simulate(const SimSpec& spec);

/// Per-point seed for sweeps: seed XOR splitmix64(index).
std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index);

/// Simulates the template at each grid transmittance with derived per-point
/// seeds; output order follows the grid regardless of evaluation order.
std::vector<std::pair<double, Dataset>> sweep(
    const SimSpec& tmpl, const std::vector<double>& t_grid);

/// Row count and empirical first/second moments as JSON.
std::string dataset_summary_json(const Dataset& d);

}  // namespace cvqkd

#endif
