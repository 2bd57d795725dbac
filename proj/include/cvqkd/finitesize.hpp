#ifndef CVQKD_FINITESIZE_HPP
#define CVQKD_FINITESIZE_HPP

#include <cstdint>

namespace cvqkd {

struct FiniteSizeParams {
  double n_total = 0.0;     // N, total symbols
  double m_disclosed = 0.0; // symbols spent on parameter estimation
  int d_bits = 5;           // discretization bits per quadrature
  double p_ec = 1.0;        // error-correction success probability
  double eps_bar = 1e-10;
  double eps_h = 1e-10;
  double eps_cor = 1e-10;
  double eps_pe = 1e-10;

  double n_key() const { return n_total - m_disclosed; }
  void validate() const;
};

struct FiniteSizeResult {
  double k_eps = 0.0;      // bits per transmitted symbol
  double delta_n = 0.0;    // total finite-size penalty, bits per key symbol
  double eps_total = 0.0;  // eps_pe + eps_cor + eps_h + eps_bar
  bool abort = false;
};

/// Smooth-min-entropy convergence penalty
/// 4 log2(sqrt(d)+2) sqrt(log2(18/(p_ec^2 eps_bar^4)) / n).
double aep_penalty(double n, int d_bits, double p_ec, double eps_bar);

/// Hashing penalty (2/n) log2(1/eps_h).
double pa_penalty(double n, double eps_h);

/// k_eps = (n p_ec / N) (beta I - chi_worst - Delta(n)); chi_worst should
/// come from the worst-case CM so it already carries eps_pe.
FiniteSizeResult keyrate_finite(double mutual_info, double chi_worst,
                                double beta, const FiniteSizeParams& fs);

}  // namespace cvqkd

#endif
