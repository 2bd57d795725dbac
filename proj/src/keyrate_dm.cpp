#include "cvqkd/keyrate_dm.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

constexpr double kConvergenceTol = 1e-8;

struct Quadrature {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;
};

// Gauss-Legendre rule by Newton iteration on the Legendre recurrence.
const Quadrature& gauss_legendre(int n) {
  static std::map<int, Quadrature> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.weights[i] = w;
    q.nodes[n - 1 - i] = x;
    q.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(q)).first->second;
}

double gaussian_pdf(double y, double mean, double var) {
  const double d = y - mean;
  return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

// Average over Bob's outcome distribution of entropy(posterior), where the
// posterior over constellation points follows from Bayes at each node.
double averaged_posterior_entropy(
    const DmConfig& cfg,
    const std::function<double(const std::vector<double>&)>& entropy_of) {
  const auto& pts = cfg.constellation.points();
  const int npts = cfg.constellation.size();
  const double t = cfg.transmittance;
  const double sqrt_t = std::sqrt(t);

  const auto eval_posterior = [&](const std::vector<double>& lik) {
    double py = 0.0;
    for (int k = 0; k < npts; ++k) py += pts[k].probability * lik[k];
    if (py <= 0.0) return std::pair<double, double>(0.0, 0.0);
    std::vector<double> post(npts);
    for (int k = 0; k < npts; ++k) post[k] = pts[k].probability * lik[k] / py;
    return std::pair<double, double>(py, entropy_of(post));
  };

  const auto eval_1d = [&](int n) {
    const double var = 1.0 + t * cfg.excess_noise;
    const double sd = std::sqrt(var);
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < npts; ++k) {
      const double mean = 2.0 * sqrt_t * pts[k].amplitude.real();
      lo = std::min(lo, mean - cfg.integration.range_sigma * sd);
      hi = std::max(hi, mean + cfg.integration.range_sigma * sd);
    }
    const auto& q = gauss_legendre(n);
    const double half = (hi - lo) / 2.0, mid = (hi + lo) / 2.0;
    double acc = 0.0;
    std::vector<double> lik(npts);
    for (int i = 0; i < n; ++i) {
      const double y = mid + half * q.nodes[i];
      for (int k = 0; k < npts; ++k) {
        lik[k] =
            gaussian_pdf(y, 2.0 * sqrt_t * pts[k].amplitude.real(), var);
      }
      const auto [py, h] = eval_posterior(lik);
      acc += q.weights[i] * half * py * h;
    }
    return acc;
  };

  const auto eval_2d = [&](int n) {
    const double var = (2.0 + t * cfg.excess_noise) / 4.0;
    const double sd = std::sqrt(var);
    double lo_q = 0.0, hi_q = 0.0, lo_p = 0.0, hi_p = 0.0;
    for (int k = 0; k < npts; ++k) {
      const std::complex<double> mean = sqrt_t * pts[k].amplitude;
      lo_q = std::min(lo_q, mean.real() - cfg.integration.range_sigma * sd);
      hi_q = std::max(hi_q, mean.real() + cfg.integration.range_sigma * sd);
      lo_p = std::min(lo_p, mean.imag() - cfg.integration.range_sigma * sd);
      hi_p = std::max(hi_p, mean.imag() + cfg.integration.range_sigma * sd);
    }
    const auto& q = gauss_legendre(n);
    const double half_q = (hi_q - lo_q) / 2.0, mid_q = (hi_q + lo_q) / 2.0;
    const double half_p = (hi_p - lo_p) / 2.0, mid_p = (hi_p + lo_p) / 2.0;
    double acc = 0.0;
    std::vector<double> lik(npts);
    for (int i = 0; i < n; ++i) {
      const double yq = mid_q + half_q * q.nodes[i];
      for (int j = 0; j < n; ++j) {
        const double yp = mid_p + half_p * q.nodes[j];
        for (int k = 0; k < npts; ++k) {
          const std::complex<double> mean = sqrt_t * pts[k].amplitude;
          lik[k] = gaussian_pdf(yq, mean.real(), var) *
                   gaussian_pdf(yp, mean.imag(), var);
        }
        const auto [py, h] = eval_posterior(lik);
        acc += q.weights[i] * q.weights[j] * half_q * half_p * py * h;
      }
    }
    return acc;
  };

  const auto eval = [&](int n) {
    return cfg.detection == DetectionKind::Homodyne ? eval_1d(n) : eval_2d(n);
  };

  int n = cfg.integration.nodes;
  double prev = eval(n);
  while (2 * n <= cfg.integration.max_nodes) {
    n *= 2;
    const double cur = eval(n);
    if (std::abs(cur - prev) < kConvergenceTol) return cur;
    prev = cur;
  }
  throw accuracy_error("outcome integral did not converge under node doubling");
}

}  // namespace

void DmConfig::validate() const {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::invalid_argument("transmittance must be in [0,1]");
  }
  if (!(excess_noise >= 0.0)) {
    throw std::invalid_argument("excess noise must be nonnegative");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must be in [0,1]");
  }
  if (integration.nodes < 2 || integration.max_nodes < integration.nodes ||
      !(integration.range_sigma > 0.0)) {
    throw std::invalid_argument("invalid integration grid");
  }
}

double outcome_likelihood(double y_q, double y_p, std::complex<double> alpha,
                          double transmittance, double excess_noise,
                          DetectionKind detection) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::invalid_argument("transmittance must be in [0,1]");
  }
  if (!(excess_noise >= 0.0)) {
    throw std::invalid_argument("excess noise must be nonnegative");
  }
  const std::complex<double> mean = std::sqrt(transmittance) * alpha;
  if (detection == DetectionKind::Homodyne) {
    return gaussian_pdf(y_q, 2.0 * mean.real(),
                        1.0 + transmittance * excess_noise);
  }
  const double var = (2.0 + transmittance * excess_noise) / 4.0;
  return gaussian_pdf(y_q, mean.real(), var) *
         gaussian_pdf(y_p, mean.imag(), var);
}

double holevo_dm_direct(const DmConfig& cfg) {
  cfg.validate();
  if (cfg.excess_noise != 0.0) {
    throw std::invalid_argument("direct Holevo evaluation requires pure loss");
  }
  const Constellation eve =
      pure_loss_output(cfg.constellation, cfg.transmittance, ChannelSide::Eve);
  const double s_e = discrete_entropy(gram_spectrum(eve));
  if (cfg.reconciliation == Reconciliation::Direct) {
    return s_e;  // Eve's conditional states are pure given Alice's choice
  }
  const double s_cond = averaged_posterior_entropy(
      cfg, [&eve](const std::vector<double>& post) {
        return discrete_entropy(gram_spectrum(eve, post));
      });
  return s_e - s_cond;
}

double mutual_info_dm(const DmConfig& cfg) {
  cfg.validate();
  const double h_x = discrete_entropy(cfg.constellation.probabilities());
  const double h_cond = averaged_posterior_entropy(
      cfg,
      [](const std::vector<double>& post) { return discrete_entropy(post); });
  return h_x - h_cond;
}

double holevo_dm_extremality(const DmConfig& cfg, int cutoff) {
  cfg.validate();
  if (cfg.excess_noise != 0.0) {
    throw std::invalid_argument("extremality bound requires pure loss");
  }
  if (cutoff < 0) cutoff = recommended_cutoff(cfg.constellation.max_abs2());
  const SecondMoments m =
      purification_cm(cfg.constellation, cfg.transmittance, cutoff);
  const CovarianceMatrix cm = CovarianceMatrix::standard_form(m.v, m.w, m.z);
  return holevo_gm(cm, cfg.detection);
}

KeyRateResult keyrate_dm(const DmConfig& cfg, DmBound bound) {
  const double mi = mutual_info_dm(cfg);
  const double chi = bound == DmBound::Direct ? holevo_dm_direct(cfg)
                                              : holevo_dm_extremality(cfg);
  KeyRateResult r;
  r.mutual_info = mi;
  r.holevo = chi;
  r.keyrate = cfg.beta * mi - chi;
  r.abort = (r.keyrate <= 0.0);
  return r;
}

}  // namespace cvqkd
