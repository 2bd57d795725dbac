#include "cvqkd/entropy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cvqkd {

namespace {
constexpr double kClampTol = 1e-9;
const double kLn2 = std::log(2.0);
}  // namespace

void ProtocolConfig::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must be in [0,1]");
  }
  if (!(v_mod >= 0.0)) {
    throw std::invalid_argument("modulation variance must be nonnegative");
  }
}

double g(double x) {
  if (x < 1.0 - kClampTol) {
    throw std::domain_error("g(x) requires x >= 1");
  }
  if (x <= 1.0) return 0.0;
  const double e = (x - 1.0) / 2.0;
  if (e < 1e-12) {
    // Series guard: avoids 0*log(0) for near-pure eigenvalues.
    return e * (1.0 - std::log(e)) / kLn2;
  }
  const double a = (x + 1.0) / 2.0;
  return a * std::log2(a) - e * std::log2(e);
}

double gaussian_vn_entropy(const CovarianceMatrix& cm) {
  const auto report = validate_cm(cm);
  if (!report.physical()) {
    throw std::domain_error("covariance matrix is unphysical");
  }
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(cm)) s += g(nu);
  return s;
}

double discrete_entropy(std::vector<double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw std::domain_error("probabilities must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kClampTol) {
    throw std::domain_error("probabilities must sum to 1");
  }
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= (v / sum) * std::log2(v / sum);
  }
  return h;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binary entropy argument must be in [0,1]");
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double bsc_capacity(double p) { return 1.0 - binary_entropy(p); }

double bec_capacity(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::domain_error("erasure probability must be in [0,1]");
  }
  return 1.0 - eps;
}

double awgn_capacity(double snr) {
  if (!(snr >= 0.0)) throw std::domain_error("SNR must be nonnegative");
  return 0.5 * std::log2(1.0 + snr);
}

double gaussian_mutual_info(const ProtocolConfig& cfg, double transmittance,
                            double excess_noise) {
  cfg.validate();
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::invalid_argument("transmittance must be in [0,1]");
  }
  if (!(excess_noise >= 0.0)) {
    throw std::invalid_argument("excess noise must be nonnegative");
  }
  const double mu = cfg.mu();
  const double snr =
      transmittance * cfg.v_mod / (mu + transmittance * excess_noise);
  return (mu / 2.0) * std::log2(1.0 + snr);
}

}  // namespace cvqkd
