#ifndef CVQKD_ESTIMATION_HPP
#define CVQKD_ESTIMATION_HPP

#include <string>
#include <vector>

#include "cvqkd/covariance.hpp"

namespace cvqkd {

/// Paired transmit/receive samples. Scalar rows hold one value per side;
/// QPSK rows hold a 2-vector label (+-1 on one axis) and a 2-vector outcome.
struct Dataset {
  std::vector<double> xs;  // flattened, `width` values per row
  std::vector<double> ys;
  int width = 1;  // 1 for the scalar model, 2 for QPSK

  int rows() const { return static_cast<int>(xs.size()) / width; }
  void validate() const;

  /// CSV with header `x,y` (width 1) or `x_q,x_p,y_q,y_p` (width 2).
  std::string to_csv() const;
  static Dataset from_csv(const std::string& text);
};

enum class QuantileConvention {
  Paper,     // z = erfinv(1 - eps/2), as printed
  Gaussian,  // z = sqrt(2) * erfinv(1 - eps), the standard normal quantile
};

struct EstimationResult {
  double t_hat = 0.0;
  double sigma2_hat = 0.0;
  double t_min = 0.0;
  double sigma2_max = 0.0;
  double epsilon_pe = 0.0;
  double z = 0.0;
};

/// Inverse error function, Newton-refined to ~1e-15.
double erfinv(double x);

/// Normal-linear-model MLE: t = sum(xy)/sum(x^2), sigma2 = mean((y-tx)^2).
std::pair<double, double> mle_fit(const Dataset& d);

/// Worst-case bounds t_min = t - z*sqrt(sigma2/(m V_A)),
/// sigma2_max = sigma2 + z*sigma2*sqrt(2)/sqrt(m).
EstimationResult worst_case_bounds(
    double t_hat, double sigma2_hat, int m, double v_a, double epsilon_pe,
    QuantileConvention convention = QuantileConvention::Paper);

/// Pessimistic two-mode CM [[(V_A+1)I, t_min*Z*sigma_z],
/// [., (t_min^2 V_A + sigma2_max)I]] with Z = sqrt(V_A^2 + 2 V_A).
CovarianceMatrix worst_case_cm(double t_min, double sigma2_max, double v_a);

/// QPSK moment estimators: c = (1/N) sum x.y (so E[c] = 2 sqrt(T) alpha),
/// sqrt(T) = c/(2 alpha), v = (1/(2N)) sum |y|^2, xi = (v-1-2T alpha^2)/T.
std::pair<double, double> qpsk_estimate(const Dataset& d, double alpha);

}  // namespace cvqkd

#endif
