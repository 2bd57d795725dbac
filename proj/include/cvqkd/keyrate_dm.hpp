#ifndef CVQKD_KEYRATE_DM_HPP
#define CVQKD_KEYRATE_DM_HPP

#include <complex>

#include "cvqkd/entropy.hpp"
#include "cvqkd/fock.hpp"
#include "cvqkd/keyrate_gm.hpp"

namespace cvqkd {

/// Quadrature settings for the outcome integrals: the range covers every
/// conditional mean +- range_sigma standard deviations; node counts double
/// until the result is stable to 1e-8.
struct IntegrationSpec {
  double range_sigma = 8.0;
  int nodes = 128;       // initial Gauss-Legendre order (per axis)
  int max_nodes = 8192;  // give up past this and raise an accuracy error
};

struct DmConfig {
  Constellation constellation;
  double transmittance = 1.0;
  double excess_noise = 0.0;  // must be 0 on the Holevo paths (pure loss)
  DetectionKind detection = DetectionKind::Homodyne;
  Reconciliation reconciliation = Reconciliation::Reverse;
  double beta = 1.0;
  IntegrationSpec integration;

  void validate() const;
};

/// Density of Bob's outcome given the sent amplitude. Homodyne: normal in
/// y_q with mean 2 sqrt(T) Re(alpha), variance 1 + T xi (y_p ignored).
/// Heterodyne: POVM-scale complex normal centered at sqrt(T) alpha with
/// per-axis variance (2 + T xi)/4.
double outcome_likelihood(double y_q, double y_p, std::complex<double> alpha,
                          double transmittance, double excess_noise,
                          DetectionKind detection);

/// Eve's Holevo information for the pure-loss channel, evaluated exactly
/// through weighted Gram spectra. Direct reconciliation returns S(rho_E);
/// reverse subtracts the outcome-averaged conditional entropy.
double holevo_dm_direct(const DmConfig& cfg);

/// I(X;Y) = H(X) - integral p(y) H(X|y) dy by the same quadrature scheme;
/// valid for xi >= 0.
double mutual_info_dm(const DmConfig& cfg);

/// Gaussian upper bound on Eve's information: second moments (V, W, Z) of
/// the purified state feed holevo_gm. Cutoff < 0 selects the recommended
/// truncation automatically.
double holevo_dm_extremality(const DmConfig& cfg, int cutoff = -1);

enum class DmBound { Direct, Extremality };

KeyRateResult keyrate_dm(const DmConfig& cfg, DmBound bound);

}  // namespace cvqkd

#endif
