#ifndef CVQKD_KEYRATE_GM_HPP
#define CVQKD_KEYRATE_GM_HPP

#include "cvqkd/covariance.hpp"
#include "cvqkd/entropy.hpp"

namespace cvqkd {

/// Link description: channel transmittance/excess noise plus the receiver's
/// efficiency and electronic noise. In the untrusted model the detector is
/// lumped into the channel: T = eta * t_ch, xi = xi_ch + xi_el.
struct ChannelParams {
  double t_ch = 1.0;   // channel transmittance
  double xi_ch = 0.0;  // channel excess noise, SNU, channel-input referred
  double eta = 1.0;    // detector efficiency
  double xi_el = 0.0;  // electronic noise, SNU
  bool trusted = false;

  double lumped_t() const { return eta * t_ch; }
  double lumped_xi() const { return xi_ch + xi_el; }
  void validate() const;
};

/// Fiber transmittance 10^(-gamma*d/10) for loss gamma in dB/km.
double transmittance_from_distance(double distance_km, double loss_db_per_km);

struct KeyRateResult {
  double mutual_info = 0.0;  // I(X;Y), bits per symbol
  double holevo = 0.0;       // chi(Y;E), bits per symbol
  double keyrate = 0.0;      // beta*I - chi, negative values kept as-is
  bool abort = false;        // set when keyrate <= 0
};

/// Two-mode CM of the entanglement-based state after a thermal-loss channel:
/// [[V I, sqrt(T(V^2-1)) sigma_z], [., (T(V-1)+1+T xi) I]].
CovarianceMatrix channel_cm(double v, double transmittance,
                            double excess_noise);

/// Holevo bound chi(Y;E) = g(nu1) + g(nu2) - g(nu3) for a standard-form
/// two-mode CM, with nu3 = sqrt(a(a - c^2/b)) (homodyne) or a - c^2/(b+1)
/// (heterodyne).
double holevo_gm(const CovarianceMatrix& cm, DetectionKind detection);

/// Devetak-Winter rate with the detector attributed to Eve.
KeyRateResult keyrate_untrusted(const ProtocolConfig& cfg,
                                const ChannelParams& ch);

/// Devetak-Winter rate with calibrated (trusted) detector noise: Eve's CM
/// carries only (t_ch, xi_ch); the conditional symplectic eigenvalues fold
/// in the detector through chi_hom/chi_het.
KeyRateResult keyrate_trusted(const ProtocolConfig& cfg,
                              const ChannelParams& ch);

/// Symmetric-relay MDI closed form log2(16/(e^2 xi (xi-4))) + g(xi/2 - 1).
/// Defined only for xi > 4; smaller values raise a domain error.
double keyrate_mdi_symmetric(double xi_equiv);

/// Rate evaluated directly from a two-mode standard-form CM: I from the
/// measured-quadrature variances (conditioning on Alice's heterodyne side),
/// chi from holevo_gm. Used for worst-case-estimate chains.
KeyRateResult keyrate_from_cm(const ProtocolConfig& cfg,
                              const CovarianceMatrix& cm);

}  // namespace cvqkd

#endif
