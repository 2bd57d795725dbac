#include "cvqkd/finitesize.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {

void check_prob(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must be in (0,1)");
  }
}

}  // namespace

void FiniteSizeParams::validate() const {
  if (!(n_total > 0.0) || !(m_disclosed > 0.0) || !(m_disclosed < n_total)) {
    throw std::invalid_argument("need 0 < m < N");
  }
  if (d_bits < 1) throw std::invalid_argument("d must be >= 1");
  if (!(p_ec >= 0.0 && p_ec <= 1.0)) {
    throw std::invalid_argument("p_ec must be in [0,1]");
  }
  check_prob(eps_bar, "eps_bar");
  check_prob(eps_h, "eps_h");
  check_prob(eps_cor, "eps_cor");
  check_prob(eps_pe, "eps_pe");
}

double aep_penalty(double n, int d_bits, double p_ec, double eps_bar) {
  if (!(n >= 1.0)) throw std::invalid_argument("n must be >= 1");
  if (d_bits < 1) throw std::invalid_argument("d must be >= 1");
  if (!(p_ec > 0.0 && p_ec <= 1.0)) {
    throw std::invalid_argument("p_ec must be in (0,1]");
  }
  check_prob(eps_bar, "eps_bar");
  const double inner =
      std::log2(18.0) - 2.0 * std::log2(p_ec) - 4.0 * std::log2(eps_bar);
  return 4.0 * std::log2(std::sqrt(static_cast<double>(d_bits)) + 2.0) *
         std::sqrt(inner / n);
}

double pa_penalty(double n, double eps_h) {
  if (!(n >= 1.0)) throw std::invalid_argument("n must be >= 1");
  if (!(eps_h > 0.0 && eps_h <= 1.0)) {
    throw std::invalid_argument("eps_h must be in (0,1]");
  }
  return (2.0 / n) * std::log2(1.0 / eps_h);
}

FiniteSizeResult keyrate_finite(double mutual_info, double chi_worst,
                                double beta, const FiniteSizeParams& fs) {
  fs.validate();
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must be in [0,1]");
  }
  const double n = fs.n_key();
  FiniteSizeResult r;
  r.eps_total = fs.eps_pe + fs.eps_cor + fs.eps_h + fs.eps_bar;
  if (fs.p_ec == 0.0) {
    r.k_eps = 0.0;
    r.abort = true;
    return r;
  }
  r.delta_n = aep_penalty(n, fs.d_bits, fs.p_ec, fs.eps_bar) +
              pa_penalty(n, fs.eps_h);
  r.k_eps = (n * fs.p_ec / fs.n_total) *
            (beta * mutual_info - chi_worst - r.delta_n);
  r.abort = (r.k_eps <= 0.0);
  return r;
}

}  // namespace cvqkd
