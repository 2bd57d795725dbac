#include "cvqkd/estimation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

double parse_field(const std::string& field, int line_no) {
  try {
    size_t pos = 0;
    const double v = std::stod(field, &pos);
    while (pos < field.size() && std::isspace(field[pos])) ++pos;
    if (pos != field.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw io_error("CSV line " + std::to_string(line_no) +
                   ": cannot parse value '" + field + "'");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

void Dataset::validate() const {
  if (width != 1 && width != 2) {
    throw std::invalid_argument("dataset width must be 1 or 2");
  }
  if (xs.size() != ys.size() || xs.size() % width != 0) {
    throw std::invalid_argument("dataset columns have mismatched lengths");
  }
  if (rows() < 2) {
    throw std::invalid_argument("dataset needs at least 2 rows");
  }
}

std::string Dataset::to_csv() const {
  validate();
  std::ostringstream out;
  out.precision(12);
  if (width == 1) {
    out << "x,y\n";
    for (int i = 0; i < rows(); ++i) out << xs[i] << "," << ys[i] << "\n";
  } else {
    out << "x_q,x_p,y_q,y_p\n";
    for (int i = 0; i < rows(); ++i) {
      out << xs[2 * i] << "," << xs[2 * i + 1] << "," << ys[2 * i] << ","
          << ys[2 * i + 1] << "\n";
    }
  }
  return out.str();
}

Dataset Dataset::from_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw io_error("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Dataset d;
  if (line == "x,y") {
    d.width = 1;
  } else if (line == "x_q,x_p,y_q,y_p") {
    d.width = 2;
  } else {
    throw io_error("unrecognized CSV header: '" + line + "'");
  }

  int line_no = 1;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != 2 * d.width) {
      throw io_error("CSV line " + std::to_string(line_no) +
                     ": expected " + std::to_string(2 * d.width) + " fields");
    }
    for (int k = 0; k < d.width; ++k) {
      d.xs.push_back(parse_field(fields[k], line_no));
    }
    for (int k = 0; k < d.width; ++k) {
      d.ys.push_back(parse_field(fields[d.width + k], line_no));
    }
  }
  d.validate();
  return d;
}

double erfinv(double x) {
  if (!(x > -1.0 && x < 1.0)) {
    throw std::domain_error("erfinv argument must be in (-1,1)");
  }
  if (x == 0.0) return 0.0;

  // Giles-style rational initial guess, then Newton on std::erf.
  double w = -std::log((1.0 - x) * (1.0 + x));
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  double y = p * x;
  const double two_over_sqrt_pi = 2.0 / std::sqrt(M_PI);
  for (int it = 0; it < 3; ++it) {
    const double err = std::erf(y) - x;
    y -= err / (two_over_sqrt_pi * std::exp(-y * y));
  }
  return y;
}

std::pair<double, double> mle_fit(const Dataset& d) {
  d.validate();
  if (d.width != 1) {
    throw std::invalid_argument("mle_fit expects the scalar (x,y) model");
  }
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < d.xs.size(); ++i) {
    sxx += d.xs[i] * d.xs[i];
    sxy += d.xs[i] * d.ys[i];
  }
  if (sxx <= 0.0) {
    throw std::domain_error("degenerate design: sum of x^2 is zero");
  }
  const double t_hat = sxy / sxx;
  double ss = 0.0;
  for (size_t i = 0; i < d.xs.size(); ++i) {
    const double r = d.ys[i] - t_hat * d.xs[i];
    ss += r * r;
  }
  return {t_hat, ss / d.rows()};
}

EstimationResult worst_case_bounds(double t_hat, double sigma2_hat, int m,
                                   double v_a, double epsilon_pe,
                                   QuantileConvention convention) {
  if (m < 2) throw std::invalid_argument("m must be >= 2");
  if (!(v_a > 0.0)) throw std::invalid_argument("V_A must be positive");
  if (!(sigma2_hat >= 0.0)) {
    throw std::invalid_argument("sigma2_hat must be nonnegative");
  }
  if (!(epsilon_pe > 0.0 && epsilon_pe < 1.0)) {
    throw std::invalid_argument("epsilon_pe must be in (0,1)");
  }
  const double z = convention == QuantileConvention::Paper
                       ? erfinv(1.0 - epsilon_pe / 2.0)
                       : std::sqrt(2.0) * erfinv(1.0 - epsilon_pe);
  EstimationResult r;
  r.t_hat = t_hat;
  r.sigma2_hat = sigma2_hat;
  r.epsilon_pe = epsilon_pe;
  r.z = z;
  r.t_min = t_hat - z * std::sqrt(sigma2_hat / (m * v_a));
  r.sigma2_max = sigma2_hat + z * sigma2_hat * std::sqrt(2.0) / std::sqrt(m);
  return r;
}

CovarianceMatrix worst_case_cm(double t_min, double sigma2_max, double v_a) {
  if (!(v_a > 0.0)) throw std::invalid_argument("V_A must be positive");
  if (!(sigma2_max >= 0.0)) {
    throw std::invalid_argument("sigma2_max must be nonnegative");
  }
  const double z = std::sqrt(v_a * v_a + 2.0 * v_a);
  return CovarianceMatrix::standard_form(
      v_a + 1.0, t_min * t_min * v_a + sigma2_max, t_min * z);
}

std::pair<double, double> qpsk_estimate(const Dataset& d, double alpha) {
  d.validate();
  if (d.width != 2) {
    throw std::invalid_argument("qpsk_estimate expects 2-vector rows");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  for (int i = 0; i < d.rows(); ++i) {
    const double xq = d.xs[2 * i], xp = d.xs[2 * i + 1];
    const bool axis_q = (std::abs(xq) == 1.0 && xp == 0.0);
    const bool axis_p = (xq == 0.0 && std::abs(xp) == 1.0);
    if (!axis_q && !axis_p) {
      throw std::invalid_argument(
          "QPSK labels must be (+-1,0) or (0,+-1)");
    }
  }
  const int n = d.rows();
  double c_hat = 0.0, v_hat = 0.0;
  for (size_t i = 0; i < d.xs.size(); ++i) {
    c_hat += d.xs[i] * d.ys[i];
    v_hat += d.ys[i] * d.ys[i];
  }
  c_hat /= n;
  v_hat /= 2.0 * n;
  const double sqrt_t = c_hat / (2.0 * alpha);
  const double t_hat = sqrt_t * sqrt_t;
  if (!(sqrt_t > 0.0)) {
    throw std::domain_error("QPSK estimation failed: nonpositive T estimate");
  }
  const double xi_hat = (v_hat - 1.0 - 2.0 * t_hat * alpha * alpha) / t_hat;
  return {t_hat, xi_hat};
}

}  // namespace cvqkd
