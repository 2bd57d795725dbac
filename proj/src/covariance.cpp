#include "cvqkd/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace cvqkd {

namespace {

constexpr double kSymmetryTol = 1e-12;    // relative
constexpr double kPhysicalityTol = 1e-9;  // nu >= 1 - tol
constexpr double kSymplecticTol = 1e-10;

void check_square_even(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0) {
    throw std::invalid_argument(
        "covariance matrix must be square with even dimension");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("covariance matrix entries must be finite");
  }
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(int modes, Eigen::MatrixXd entries)
    : modes_(modes), m_(std::move(entries)) {
  check_square_even(m_);
  if (m_.rows() != 2 * modes) {
    throw std::invalid_argument("entries dimension does not match mode count");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if (((m_ - m_.transpose()).cwiseAbs().maxCoeff()) > kSymmetryTol * scale) {
    throw std::invalid_argument("covariance matrix must be symmetric");
  }
  m_ = ((m_ + m_.transpose()) / 2).eval();
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
  return CovarianceMatrix(modes, Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

CovarianceMatrix CovarianceMatrix::standard_form(double a, double b, double c) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = a;
  m(2, 2) = m(3, 3) = b;
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return CovarianceMatrix(2, m);
}

CovarianceMatrix CovarianceMatrix::tmsvs(double u) {
  if (u < 1.0) throw std::domain_error("tmsvs variance must satisfy u >= 1");
  return standard_form(u, u, std::sqrt(u * u - 1.0));
}

std::string CovarianceMatrix::to_json() const {
  nlohmann::json j;
  j["modes"] = modes_;
  std::vector<double> entries(m_.size());
  for (int r = 0; r < m_.rows(); ++r)
    for (int c = 0; c < m_.cols(); ++c) entries[r * m_.cols() + c] = m_(r, c);
  j["entries"] = entries;
  return j.dump();
}

CovarianceMatrix CovarianceMatrix::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int modes = j.at("modes").get<int>();
  const auto entries = j.at("entries").get<std::vector<double>>();
  const int n = 2 * modes;
  if (modes < 1 || static_cast<int>(entries.size()) != n * n) {
    throw std::invalid_argument("covariance JSON has inconsistent dimensions");
  }
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = entries[r * n + c];
  return CovarianceMatrix(modes, std::move(m));
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd s, Eigen::VectorXd d)
    : matrix(std::move(s)), displacement(std::move(d)) {
  check_square_even(matrix);
  if (displacement.size() != matrix.rows()) {
    throw std::invalid_argument("displacement dimension mismatch");
  }
  const Eigen::MatrixXd omega = symplectic_form(modes());
  const double err =
      (matrix * omega * matrix.transpose() - omega).cwiseAbs().maxCoeff();
  if (err > kSymplecticTol * std::max(1.0, matrix.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("matrix is not symplectic");
  }
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd s)
    : SymplecticTransform(
          Eigen::MatrixXd(s),
          Eigen::VectorXd(Eigen::VectorXd::Zero(s.rows()))) {}

bool PhysicalityReport::physical() const {
  return is_symmetric && is_positive_definite &&
         min_symplectic_eig >= 1.0 - kPhysicalityTol;
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

namespace {

// Symplectic spectrum via the antisymmetric square: with A = S^{1/2} Omega
// S^{1/2}, the eigenvalues of the symmetric matrix -A^2 are the nu_k^2, each
// twice. Backward-stable near nu = 1, where the determinant-invariant closed
// forms lose half their digits.
std::vector<double> symplectic_eigenvalues_stable(const Eigen::MatrixXd& sigma,
                                                  int m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::domain_error("covariance matrix is not positive definite");
  }
  const Eigen::MatrixXd root = es.operatorSqrt();
  const Eigen::MatrixXd a = root * symplectic_form(m) * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(-a * a);
  std::vector<double> nus(m);
  for (int k = 0; k < m; ++k) {
    const double sq = (es2.eigenvalues()[2 * m - 1 - 2 * k] +
                       es2.eigenvalues()[2 * m - 2 - 2 * k]) /
                      2.0;
    nus[k] = std::sqrt(std::max(0.0, sq));
  }
  return nus;
}

}  // namespace

PhysicalityReport validate_cm(const CovarianceMatrix& cm) {
  PhysicalityReport report;
  report.is_symmetric = true;  // enforced at construction
  Eigen::LLT<Eigen::MatrixXd> llt(cm.entries());
  report.is_positive_definite = (llt.info() == Eigen::Success);
  if (report.is_positive_definite) {
    const auto nus = symplectic_eigenvalues_stable(cm.entries(), cm.modes());
    report.min_symplectic_eig = nus.back();
  }
  return report;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm) {
  Eigen::LLT<Eigen::MatrixXd> llt(cm.entries());
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("covariance matrix is not positive definite");
  }
  const int m = cm.modes();
  const Eigen::MatrixXd& sigma = cm.entries();

  if (m == 1) {
    return {std::sqrt(sigma.determinant())};
  }
  if (m == 2) {
    // Closed form from the two-mode block determinant invariants.
    const Eigen::Matrix2d ga = sigma.block<2, 2>(0, 0);
    const Eigen::Matrix2d gb = sigma.block<2, 2>(2, 2);
    const Eigen::Matrix2d gab = sigma.block<2, 2>(0, 2);

    // Standard form diag(a,a,b,b) with c sigma_z coupling: the discriminant
    // factors as (a-b)^2 ((a+b)^2 - 4c^2), which avoids the catastrophic
    // cancellation the generic invariant form suffers near a = b.
    const double a = ga(0, 0), b = gb(0, 0), c = gab(0, 0);
    const double scale = sigma.cwiseAbs().maxCoeff();
    const double pat_tol = 1e-13 * scale;
    const bool standard =
        std::abs(ga(1, 1) - a) <= pat_tol && std::abs(ga(0, 1)) <= pat_tol &&
        std::abs(gb(1, 1) - b) <= pat_tol && std::abs(gb(0, 1)) <= pat_tol &&
        std::abs(gab(1, 1) + c) <= pat_tol && std::abs(gab(0, 1)) <= pat_tol &&
        std::abs(gab(1, 0)) <= pat_tol;
    if (standard) {
      const double root =
          std::sqrt(std::max(0.0, (a + b) * (a + b) - 4.0 * c * c));
      const double hi = (root + std::abs(a - b)) / 2.0;
      const double lo = std::max(0.0, (root - std::abs(a - b)) / 2.0);
      return {hi, lo};
    }

    const double delta =
        ga.determinant() + gb.determinant() + 2.0 * gab.determinant();
    const double gamma = sigma.determinant();
    const double disc = std::max(0.0, delta * delta - 4.0 * gamma);
    const double root = std::sqrt(disc);
    const double hi = std::sqrt(std::max(0.0, (delta + root) / 2.0));
    const double lo = std::sqrt(std::max(0.0, (delta - root) / 2.0));
    return {hi, lo};
  }

  return symplectic_eigenvalues_stable(sigma, m);
}

SymplecticTransform displacement(std::complex<double> alpha) {
  Eigen::VectorXd d(2);
  d << 2.0 * alpha.real(), 2.0 * alpha.imag();
  return SymplecticTransform(Eigen::MatrixXd::Identity(2, 2), d);
}

SymplecticTransform squeeze1(double s) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = std::exp(-s);
  m(1, 1) = std::exp(s);
  return SymplecticTransform(m);
}

SymplecticTransform squeeze2(double s) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  const double ch = std::cosh(s), sh = std::sinh(s);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = ch;
  m(0, 2) = m(2, 0) = sh;
  m(1, 3) = m(3, 1) = -sh;
  return SymplecticTransform(m);
}

SymplecticTransform beamsplitter(double transmissivity) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::invalid_argument("beam splitter transmissivity must be in [0,1]");
  }
  const double t = std::sqrt(transmissivity);
  const double r = std::sqrt(1.0 - transmissivity);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m.block<2, 2>(0, 0) = t * Eigen::Matrix2d::Identity();
  m.block<2, 2>(0, 2) = r * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2, 0) = -r * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2, 2) = t * Eigen::Matrix2d::Identity();
  return SymplecticTransform(m);
}

SymplecticTransform rotation(double theta) {
  Eigen::MatrixXd m(2, 2);
  m << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return SymplecticTransform(m);
}

CovarianceMatrix apply_symplectic(const CovarianceMatrix& cm,
                                  const SymplecticTransform& t) {
  if (t.matrix.rows() != cm.dim()) {
    throw std::invalid_argument("transform and CM dimensions disagree");
  }
  Eigen::MatrixXd out = t.matrix * cm.entries() * t.matrix.transpose();
  out = ((out + out.transpose()) / 2).eval();
  return CovarianceMatrix(cm.modes(), std::move(out));
}

std::pair<CovarianceMatrix, Eigen::VectorXd> apply_symplectic(
    const CovarianceMatrix& cm, const SymplecticTransform& t,
    const Eigen::VectorXd& mean) {
  if (mean.size() != cm.dim()) {
    throw std::invalid_argument("mean vector dimension mismatch");
  }
  Eigen::VectorXd new_mean = t.matrix * mean + t.displacement;
  return {apply_symplectic(cm, t), std::move(new_mean)};
}

CovarianceMatrix conditional_cm(const CovarianceMatrix& joint,
                                Detection detection) {
  if (joint.modes() < 2) {
    throw std::invalid_argument("conditional CM needs at least two modes");
  }
  const int na = joint.dim() - 2;  // kept block; measured mode is last
  const Eigen::MatrixXd& sigma = joint.entries();
  const Eigen::MatrixXd ga = sigma.topLeftCorner(na, na);
  const Eigen::Matrix2d gb = sigma.bottomRightCorner<2, 2>();
  const Eigen::MatrixXd gab = sigma.topRightCorner(na, 2);

  Eigen::Matrix2d inv = Eigen::Matrix2d::Zero();
  switch (detection) {
    case Detection::HomodyneQ:
    case Detection::HomodyneP: {
      const int slot = (detection == Detection::HomodyneQ) ? 0 : 1;
      const double var = gb(slot, slot);
      if (var <= 1e-12) {
        throw std::domain_error("measured quadrature variance is singular");
      }
      inv(slot, slot) = 1.0 / var;
      break;
    }
    case Detection::Heterodyne: {
      inv = (gb + Eigen::Matrix2d::Identity()).inverse();
      break;
    }
  }
  Eigen::MatrixXd out = ga - gab * inv * gab.transpose();
  out = ((out + out.transpose()) / 2).eval();
  return CovarianceMatrix(joint.modes() - 1, std::move(out));
}

}  // namespace cvqkd
