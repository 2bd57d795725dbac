#ifndef CVQKD_COVARIANCE_HPP
#define CVQKD_COVARIANCE_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace cvqkd {

/// Second-moment description of an m-mode Gaussian state in shot-noise
/// units (vacuum variance = 1). Quadratures are interleaved mode-major:
/// (q1, p1, q2, p2, ...).
class CovarianceMatrix {
 public:
  CovarianceMatrix(int modes, Eigen::MatrixXd entries);

  static CovarianceMatrix vacuum(int modes);
  /// Two-mode standard-form CM [[a I, c sigma_z], [c sigma_z, b I]].
  static CovarianceMatrix standard_form(double a, double b, double c);
  /// Two-mode squeezed vacuum with quadrature variance u = cosh(2s).
  static CovarianceMatrix tmsvs(double u);

  int modes() const { return modes_; }
  int dim() const { return 2 * modes_; }
  const Eigen::MatrixXd& entries() const { return m_; }

  std::string to_json() const;
  static CovarianceMatrix from_json(const std::string& text);

 private:
  int modes_;
  Eigen::MatrixXd m_;
};

/// Affine Gaussian phase-space map: r -> S r + d with S symplectic.
struct SymplecticTransform {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd displacement;

  SymplecticTransform(Eigen::MatrixXd s, Eigen::VectorXd d);
  explicit SymplecticTransform(Eigen::MatrixXd s);

  int modes() const { return static_cast<int>(matrix.rows()) / 2; }
};

struct PhysicalityReport {
  bool is_symmetric = false;
  bool is_positive_definite = false;
  double min_symplectic_eig = 0.0;
  bool physical() const;
};

enum class Detection { HomodyneQ, HomodyneP, Heterodyne };

/// Symplectic form Omega = diag(omega, ..., omega), omega = [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int modes);

PhysicalityReport validate_cm(const CovarianceMatrix& cm);

/// Symplectic eigenvalues (spectrum of |i Omega Sigma|), one per mode,
/// sorted descending. Two-mode inputs use the closed form in terms of the
/// determinant invariants Delta and Gamma.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm);

SymplecticTransform displacement(std::complex<double> alpha);
SymplecticTransform squeeze1(double s);
SymplecticTransform squeeze2(double s);
SymplecticTransform beamsplitter(double transmissivity);
SymplecticTransform rotation(double theta);

/// Sigma' = S Sigma S^T; mean' = S mean + d when a mean is supplied.
CovarianceMatrix apply_symplectic(const CovarianceMatrix& cm,
                                  const SymplecticTransform& t);
std::pair<CovarianceMatrix, Eigen::VectorXd> apply_symplectic(
    const CovarianceMatrix& cm, const SymplecticTransform& t,
    const Eigen::VectorXd& mean);

/// Conditional CM of the leading mode group after a Gaussian measurement of
/// the final (single) mode. Homodyne uses the projector pseudo-inverse on
/// the measured quadrature; heterodyne uses (gamma_B + I)^{-1}.
CovarianceMatrix conditional_cm(const CovarianceMatrix& joint,
                                Detection detection);

}  // namespace cvqkd

#endif
