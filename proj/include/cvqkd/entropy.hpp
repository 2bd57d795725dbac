#ifndef CVQKD_ENTROPY_HPP
#define CVQKD_ENTROPY_HPP

#include <vector>

#include "cvqkd/covariance.hpp"

namespace cvqkd {

enum class Reconciliation { Direct, Reverse };
enum class DetectionKind { Homodyne, Heterodyne };

/// Protocol-side knobs of a Gaussian-modulated coherent-state link.
struct ProtocolConfig {
  DetectionKind detection = DetectionKind::Homodyne;
  Reconciliation reconciliation = Reconciliation::Reverse;
  double beta = 1.0;   // reconciliation efficiency
  double v_mod = 4.0;  // modulation variance, SNU

  /// Measured quadratures per symbol: 1 for homodyne, 2 for heterodyne.
  int mu() const { return detection == DetectionKind::Homodyne ? 1 : 2; }
  /// Total symmetric state variance V = V_Mod + 1.
  double total_variance() const { return v_mod + 1.0; }
  void validate() const;
};

/// Bosonic entropy g(x) = ((x+1)/2)log2((x+1)/2) - ((x-1)/2)log2((x-1)/2),
/// in bits; g(1) = 0. Values in [1 - 1e-9, 1) are clamped to 1.
double g(double x);

/// Sum of g over the symplectic spectrum of a physical CM, in bits.
double gaussian_vn_entropy(const CovarianceMatrix& cm);

/// Shannon entropy in bits; the vector is renormalized if its sum deviates
/// from 1 by less than 1e-9.
double discrete_entropy(std::vector<double> p);
double binary_entropy(double p);

double bsc_capacity(double p);
double bec_capacity(double eps);
double awgn_capacity(double snr);

/// Eq. form (mu/2) log2(1 + T V_Mod / (mu + T xi)), bits per symbol.
double gaussian_mutual_info(const ProtocolConfig& cfg, double transmittance,
                            double excess_noise);

}  // namespace cvqkd

#endif
