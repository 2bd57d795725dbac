#include "cvqkd.h"

#include <cstring>
#include <new>
#include <string>

#include "cvqkd/errors.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/finitesize.hpp"
#include "cvqkd/fock.hpp"
#include "cvqkd/keyrate_dm.hpp"
#include "cvqkd/keyrate_gm.hpp"
#include "cvqkd/simulator.hpp"

struct cvqkd_constellation {
  cvqkd::Constellation value;
};

struct cvqkd_dataset {
  cvqkd::Dataset value;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
int guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CVQKD_OK;
  } catch (const cvqkd::io_error& e) {
    g_last_error = e.what();
    return CVQKD_ERR_IO;
  } catch (const cvqkd::accuracy_error& e) {
    g_last_error = e.what();
    return CVQKD_ERR_ACCURACY;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return CVQKD_ERR_ARG;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return CVQKD_ERR_DOMAIN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CVQKD_ERR_INTERNAL;
  }
}

int require(bool ok, const char* message) {
  if (!ok) {
    g_last_error = message;
    return CVQKD_ERR_ARG;
  }
  return CVQKD_OK;
}

cvqkd::ProtocolConfig to_protocol(const cvqkd_protocol& p) {
  cvqkd::ProtocolConfig cfg;
  cfg.detection = p.detection == CVQKD_HETERODYNE
                      ? cvqkd::DetectionKind::Heterodyne
                      : cvqkd::DetectionKind::Homodyne;
  cfg.reconciliation = p.reconciliation == CVQKD_DIRECT
                           ? cvqkd::Reconciliation::Direct
                           : cvqkd::Reconciliation::Reverse;
  cfg.beta = p.beta;
  cfg.v_mod = p.v_mod;
  return cfg;
}

void to_rate(const cvqkd::KeyRateResult& r, cvqkd_rate* out) {
  out->mutual_info = r.mutual_info;
  out->holevo = r.holevo;
  out->keyrate = r.keyrate;
  out->abort_flag = r.abort ? 1 : 0;
}

cvqkd::DmConfig to_dm_config(const cvqkd::Constellation& c,
                             const cvqkd_dm_config& raw) {
  cvqkd::DmConfig cfg{c};
  cfg.transmittance = raw.transmittance;
  cfg.excess_noise = raw.excess_noise;
  cfg.detection = raw.detection == CVQKD_HETERODYNE
                      ? cvqkd::DetectionKind::Heterodyne
                      : cvqkd::DetectionKind::Homodyne;
  cfg.reconciliation = raw.reconciliation == CVQKD_DIRECT
                           ? cvqkd::Reconciliation::Direct
                           : cvqkd::Reconciliation::Reverse;
  cfg.beta = raw.beta;
  if (raw.range_sigma > 0.0) cfg.integration.range_sigma = raw.range_sigma;
  if (raw.nodes > 0) cfg.integration.nodes = raw.nodes;
  if (raw.max_nodes > 0) cfg.integration.max_nodes = raw.max_nodes;
  return cfg;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* cvqkd_last_error(void) { return g_last_error.c_str(); }

int cvqkd_keyrate_gm(const cvqkd_protocol* protocol,
                     const cvqkd_channel* channel, cvqkd_rate* out) {
  if (int rc = require(protocol && channel && out, "null pointer argument")) {
    return rc;
  }
  return guard([&] {
    cvqkd::ChannelParams ch;
    ch.t_ch = channel->t_ch;
    ch.xi_ch = channel->xi_ch;
    ch.eta = channel->eta;
    ch.xi_el = channel->xi_el;
    ch.trusted = channel->trusted != 0;
    const auto cfg = to_protocol(*protocol);
    const auto r = ch.trusted ? cvqkd::keyrate_trusted(cfg, ch)
                              : cvqkd::keyrate_untrusted(cfg, ch);
    to_rate(r, out);
  });
}

int cvqkd_keyrate_mdi_symmetric(double xi_equiv, double* out) {
  if (int rc = require(out != nullptr, "null pointer argument")) return rc;
  return guard([&] { *out = cvqkd::keyrate_mdi_symmetric(xi_equiv); });
}

int cvqkd_transmittance_from_distance(double distance_km,
                                      double loss_db_per_km, double* out) {
  if (int rc = require(out != nullptr, "null pointer argument")) return rc;
  return guard([&] {
    *out = cvqkd::transmittance_from_distance(distance_km, loss_db_per_km);
  });
}

int cvqkd_keyrate_from_estimate(const cvqkd_protocol* protocol, double t_min,
                                double sigma2_max, cvqkd_rate* out) {
  if (int rc = require(protocol && out, "null pointer argument")) return rc;
  return guard([&] {
    const auto cfg = to_protocol(*protocol);
    const auto cm = cvqkd::worst_case_cm(t_min, sigma2_max, cfg.v_mod);
    to_rate(cvqkd::keyrate_from_cm(cfg, cm), out);
  });
}

int cvqkd_constellation_bpsk(double alpha, cvqkd_constellation** out) {
  if (int rc = require(out != nullptr, "null pointer argument")) return rc;
  return guard([&] {
    *out = new cvqkd_constellation{cvqkd::Constellation::bpsk(alpha)};
  });
}

int cvqkd_constellation_qpsk(double alpha, cvqkd_constellation** out) {
  if (int rc = require(out != nullptr, "null pointer argument")) return rc;
  return guard([&] {
    *out = new cvqkd_constellation{cvqkd::Constellation::qpsk(alpha)};
  });
}

int cvqkd_constellation_from_json(const char* json,
                                  cvqkd_constellation** out) {
  if (int rc = require(json && out, "null pointer argument")) return rc;
  return guard([&] {
    try {
      *out = new cvqkd_constellation{cvqkd::Constellation::from_json(json)};
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      throw cvqkd::io_error(std::string("constellation JSON: ") + e.what());
    }
  });
}

void cvqkd_constellation_free(cvqkd_constellation* c) { delete c; }

int cvqkd_mutual_info_dm(const cvqkd_constellation* c,
                         const cvqkd_dm_config* config, double* out) {
  if (int rc = require(c && config && out, "null pointer argument")) return rc;
  return guard([&] {
    *out = cvqkd::mutual_info_dm(to_dm_config(c->value, *config));
  });
}

int cvqkd_holevo_dm(const cvqkd_constellation* c,
                    const cvqkd_dm_config* config, int bound, double* out) {
  if (int rc = require(c && config && out, "null pointer argument")) return rc;
  return guard([&] {
    const auto cfg = to_dm_config(c->value, *config);
    *out = bound == CVQKD_BOUND_EXTREMALITY ? cvqkd::holevo_dm_extremality(cfg)
                                            : cvqkd::holevo_dm_direct(cfg);
  });
}

int cvqkd_keyrate_dm(const cvqkd_constellation* c,
                     const cvqkd_dm_config* config, int bound,
                     cvqkd_rate* out) {
  if (int rc = require(c && config && out, "null pointer argument")) return rc;
  return guard([&] {
    const auto cfg = to_dm_config(c->value, *config);
    const auto which = bound == CVQKD_BOUND_EXTREMALITY
                           ? cvqkd::DmBound::Extremality
                           : cvqkd::DmBound::Direct;
    to_rate(cvqkd::keyrate_dm(cfg, which), out);
  });
}

int cvqkd_simulate(const cvqkd_sim_spec* spec, cvqkd_dataset** out) {
  if (int rc = require(spec && out, "null pointer argument")) return rc;
  return guard([&] {
    cvqkd::SimSpec s;
    s.modulation = spec->modulation == CVQKD_MOD_QPSK
                       ? cvqkd::SimSpec::Modulation::Qpsk
                       : cvqkd::SimSpec::Modulation::Gaussian;
    s.v_mod = spec->v_mod;
    s.alpha = spec->alpha;
    s.transmittance = spec->transmittance;
    s.excess_noise = spec->excess_noise;
    s.detection = spec->detection == CVQKD_HETERODYNE
                      ? cvqkd::DetectionKind::Heterodyne
                      : cvqkd::DetectionKind::Homodyne;
    s.rounds = spec->rounds;
    s.seed = spec->seed;
    *out = new cvqkd_dataset{cvqkd::simulate(s)};
  });
}

int cvqkd_dataset_from_csv(const char* text, cvqkd_dataset** out) {
  if (int rc = require(text && out, "null pointer argument")) return rc;
  return guard(
      [&] { *out = new cvqkd_dataset{cvqkd::Dataset::from_csv(text)}; });
}

int cvqkd_dataset_to_csv(const cvqkd_dataset* d, char** out) {
  if (int rc = require(d && out, "null pointer argument")) return rc;
  return guard([&] { *out = copy_string(d->value.to_csv()); });
}

int cvqkd_dataset_summary_json(const cvqkd_dataset* d, char** out) {
  if (int rc = require(d && out, "null pointer argument")) return rc;
  return guard([&] { *out = copy_string(cvqkd::dataset_summary_json(d->value)); });
}

int cvqkd_dataset_rows(const cvqkd_dataset* d, int64_t* out) {
  if (int rc = require(d && out, "null pointer argument")) return rc;
  *out = d->value.rows();
  return CVQKD_OK;
}

void cvqkd_dataset_free(cvqkd_dataset* d) { delete d; }

void cvqkd_string_free(char* s) { delete[] s; }

int cvqkd_estimate_mle(const cvqkd_dataset* d, double v_a, double epsilon_pe,
                       int quantile_convention, cvqkd_estimate* out) {
  if (int rc = require(d && out, "null pointer argument")) return rc;
  return guard([&] {
    const auto [t_hat, sigma2_hat] = cvqkd::mle_fit(d->value);
    const auto convention = quantile_convention == CVQKD_QUANTILE_GAUSSIAN
                                ? cvqkd::QuantileConvention::Gaussian
                                : cvqkd::QuantileConvention::Paper;
    const auto r = cvqkd::worst_case_bounds(t_hat, sigma2_hat,
                                            d->value.rows(), v_a, epsilon_pe,
                                            convention);
    out->t_hat = r.t_hat;
    out->sigma2_hat = r.sigma2_hat;
    out->t_min = r.t_min;
    out->sigma2_max = r.sigma2_max;
    out->epsilon_pe = r.epsilon_pe;
    out->z = r.z;
  });
}

int cvqkd_estimate_qpsk(const cvqkd_dataset* d, double alpha, double* t_hat,
                        double* xi_hat) {
  if (int rc = require(d && t_hat && xi_hat, "null pointer argument")) {
    return rc;
  }
  return guard([&] {
    const auto [t, xi] = cvqkd::qpsk_estimate(d->value, alpha);
    *t_hat = t;
    *xi_hat = xi;
  });
}

int cvqkd_keyrate_finite(double mutual_info, double chi_worst, double beta,
                         const cvqkd_fs_params* params, cvqkd_fs_result* out) {
  if (int rc = require(params && out, "null pointer argument")) return rc;
  return guard([&] {
    cvqkd::FiniteSizeParams fs;
    fs.n_total = params->n_total;
    fs.m_disclosed = params->m_disclosed;
    fs.d_bits = params->d_bits;
    fs.p_ec = params->p_ec;
    fs.eps_bar = params->eps_bar;
    fs.eps_h = params->eps_h;
    fs.eps_cor = params->eps_cor;
    fs.eps_pe = params->eps_pe;
    const auto r = cvqkd::keyrate_finite(mutual_info, chi_worst, beta, fs);
    out->k_eps = r.k_eps;
    out->delta_n = r.delta_n;
    out->eps_total = r.eps_total;
    out->abort_flag = r.abort ? 1 : 0;
  });
}

}  // extern "C"
