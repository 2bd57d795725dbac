#include "cvqkd/keyrate_gm.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {

constexpr double kNuTol = 1e-9;
constexpr double kFormTol = 1e-9;

struct StandardForm {
  double a, b, c;
};

StandardForm extract_standard_form(const CovarianceMatrix& cm) {
  if (cm.modes() != 2) {
    throw std::invalid_argument("expected a two-mode covariance matrix");
  }
  const Eigen::MatrixXd& s = cm.entries();
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  const auto near = [scale](double x, double y) {
    return std::abs(x - y) <= kFormTol * scale;
  };
  const bool ok = near(s(0, 0), s(1, 1)) && near(s(2, 2), s(3, 3)) &&
                  near(s(0, 2), -s(1, 3)) && near(s(0, 1), 0.0) &&
                  near(s(0, 3), 0.0) && near(s(1, 2), 0.0);
  if (!ok) {
    throw std::invalid_argument(
        "covariance matrix is not in symmetric standard form");
  }
  return {s(0, 0), s(2, 2), s(0, 2)};
}

double mutual_info_from_moments(double a, double b_measured, double c,
                                int mu) {
  const double cond = b_measured - c * c / (a + 1.0);
  if (cond <= 0.0) {
    throw std::domain_error("conditional variance is not positive");
  }
  return (mu / 2.0) * std::log2(b_measured / cond);
}

KeyRateResult assemble(double beta, double mutual_info, double holevo) {
  KeyRateResult r;
  r.mutual_info = mutual_info;
  r.holevo = holevo;
  r.keyrate = beta * mutual_info - holevo;
  r.abort = (r.keyrate <= 0.0);
  return r;
}

void require_reverse(const ProtocolConfig& cfg) {
  if (cfg.reconciliation != Reconciliation::Reverse) {
    throw std::invalid_argument(
        "only reverse reconciliation is supported for Gaussian modulation");
  }
}

}  // namespace

void ChannelParams::validate() const {
  if (!(t_ch >= 0.0 && t_ch <= 1.0)) {
    throw std::invalid_argument("channel transmittance must be in [0,1]");
  }
  if (!(xi_ch >= 0.0)) {
    throw std::invalid_argument("channel excess noise must be nonnegative");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("detector efficiency must be in (0,1]");
  }
  if (!(xi_el >= 0.0)) {
    throw std::invalid_argument("electronic noise must be nonnegative");
  }
}

double transmittance_from_distance(double distance_km, double loss_db_per_km) {
  if (!(distance_km >= 0.0) || !(loss_db_per_km >= 0.0)) {
    throw std::invalid_argument("distance and loss must be nonnegative");
  }
  return std::pow(10.0, -loss_db_per_km * distance_km / 10.0);
}

CovarianceMatrix channel_cm(double v, double transmittance,
                            double excess_noise) {
  if (!(v >= 1.0)) {
    throw std::invalid_argument("total variance must be >= 1");
  }
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::invalid_argument("transmittance must be in [0,1]");
  }
  if (!(excess_noise >= 0.0)) {
    throw std::invalid_argument("excess noise must be nonnegative");
  }
  const double t = transmittance;
  const double b = t * (v - 1.0) + 1.0 + t * excess_noise;
  const double c = std::sqrt(t * (v * v - 1.0));
  return CovarianceMatrix::standard_form(v, b, c);
}

double holevo_gm(const CovarianceMatrix& cm, DetectionKind detection) {
  const auto [a, b, c] = extract_standard_form(cm);
  const auto nus = symplectic_eigenvalues(cm);

  double nu3 = 0.0;
  if (detection == DetectionKind::Homodyne) {
    nu3 = std::sqrt(std::max(0.0, a * (a - c * c / b)));
  } else {
    nu3 = a - c * c / (b + 1.0);
  }
  if (nu3 < 1.0 - kNuTol) {
    throw std::domain_error("conditional state is unphysical (nu3 < 1)");
  }
  return g(nus[0]) + g(nus[1]) - g(nu3);
}

KeyRateResult keyrate_untrusted(const ProtocolConfig& cfg,
                                const ChannelParams& ch) {
  cfg.validate();
  ch.validate();
  require_reverse(cfg);
  const double t = ch.lumped_t();
  const double xi = ch.lumped_xi();
  const double mi = gaussian_mutual_info(cfg, t, xi);
  const double chi =
      holevo_gm(channel_cm(cfg.total_variance(), t, xi),
                cfg.detection);
  return assemble(cfg.beta, mi, chi);
}

KeyRateResult keyrate_trusted(const ProtocolConfig& cfg,
                              const ChannelParams& ch) {
  cfg.validate();
  ch.validate();
  require_reverse(cfg);
  if (!(ch.t_ch > 0.0)) {
    throw std::domain_error("trusted model requires t_ch > 0");
  }

  const double v = cfg.total_variance();
  const double t = ch.t_ch;
  const double chi_line = 1.0 / t - 1.0 + ch.xi_ch;
  const double chi_det =
      cfg.detection == DetectionKind::Homodyne
          ? (1.0 - ch.eta + ch.xi_el) / ch.eta
          : (2.0 - ch.eta + 2.0 * ch.xi_el) / ch.eta;
  const double chi = chi_line + chi_det / t;

  // Eve's CM carries channel noise only.
  const double b = t * (v + chi_line);
  const double c2 = t * (v * v - 1.0);
  const CovarianceMatrix eve_cm =
      CovarianceMatrix::standard_form(v, b, std::sqrt(c2));
  const auto nus = symplectic_eigenvalues(eve_cm);

  const double delta = v * v + b * b - 2.0 * c2;
  const double sqrt_gamma = v * b - c2;  // det of the standard form is its square

  double cc = 0.0, dd = 0.0;
  const double denom = t * (v + chi);
  if (cfg.detection == DetectionKind::Homodyne) {
    cc = (chi_det * delta + b + v * sqrt_gamma) / denom;
    dd = sqrt_gamma * (sqrt_gamma * chi_det + v) / denom;
  } else {
    cc = (delta * chi_det * chi_det + sqrt_gamma * sqrt_gamma + 1.0 +
          2.0 * chi_det * (v * sqrt_gamma + b) + 2.0 * c2) /
         (denom * denom);
    const double root = (v + sqrt_gamma * chi_det) / denom;
    dd = root * root;
  }
  const double disc = std::sqrt(std::max(0.0, cc * cc - 4.0 * dd));
  const double nu3 = std::sqrt(std::max(0.0, (cc + disc) / 2.0));
  const double nu4 = std::sqrt(std::max(0.0, (cc - disc) / 2.0));
  if (nu3 < 1.0 - kNuTol || nu4 < 1.0 - kNuTol) {
    throw std::domain_error("conditional symplectic eigenvalue below 1");
  }
  const double holevo = g(nus[0]) + g(nus[1]) - g(nu3) - g(nu4);

  // Bob's measured variance includes the detector beam splitter and the
  // electronic noise; conditioning is on Alice's heterodyne outcome.
  const int mu = cfg.mu();
  const double b_meas =
      ch.eta * t * (v + chi_line) + (mu - ch.eta) + mu * ch.xi_el;
  const double c_meas2 = ch.eta * c2;
  const double mi =
      mutual_info_from_moments(v, b_meas, std::sqrt(c_meas2), mu);

  return assemble(cfg.beta, mi, holevo);
}

double keyrate_mdi_symmetric(double xi_equiv) {
  if (!(xi_equiv > 4.0)) {
    throw std::domain_error(
        "symmetric MDI rate is defined only for xi > 4 (the printed "
        "log argument xi*(xi-4) is nonpositive otherwise)");
  }
  const double e2 = std::exp(2.0);
  return std::log2(16.0 / (e2 * xi_equiv * (xi_equiv - 4.0))) +
         g(xi_equiv / 2.0 - 1.0);
}

KeyRateResult keyrate_from_cm(const ProtocolConfig& cfg,
                              const CovarianceMatrix& cm) {
  cfg.validate();
  require_reverse(cfg);
  const auto [a, b, c] = extract_standard_form(cm);
  const int mu = cfg.mu();
  const double b_meas = b + (mu - 1);  // heterodyne adds one vacuum unit
  const double mi = mutual_info_from_moments(a, b_meas, c, mu);
  const double chi = holevo_gm(cm, cfg.detection);
  return assemble(cfg.beta, mi, chi);
}

}  // namespace cvqkd
