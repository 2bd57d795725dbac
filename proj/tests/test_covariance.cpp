#include <cmath>
#include <random>

#include "cvqkd/covariance.hpp"
#include "doctest.h"

using namespace cvqkd;

namespace {

// Random symplectic built from layers of rotations, squeezers, and
// adjacent-pair beam splitters embedded in m modes.
Eigen::MatrixXd embed_pair(const Eigen::MatrixXd& s4, int i, int j, int m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * m, 2 * m);
  const int bi = 2 * i, bj = 2 * j;
  out.block<2, 2>(bi, bi) = s4.block<2, 2>(0, 0);
  out.block<2, 2>(bi, bj) = s4.block<2, 2>(0, 2);
  out.block<2, 2>(bj, bi) = s4.block<2, 2>(2, 0);
  out.block<2, 2>(bj, bj) = s4.block<2, 2>(2, 2);
  return out;
}

Eigen::MatrixXd embed_single(const Eigen::MatrixXd& s2, int i, int m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * m, 2 * m);
  out.block<2, 2>(2 * i, 2 * i) = s2;
  return out;
}

Eigen::MatrixXd random_symplectic(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> squeeze(-0.8, 0.8);
  std::uniform_real_distribution<double> trans(0.1, 0.9);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * m, 2 * m);
  for (int layer = 0; layer < 2; ++layer) {
    for (int i = 0; i < m; ++i) {
      s = embed_single(rotation(angle(rng)).matrix, i, m) * s;
      s = embed_single(squeeze1(squeeze(rng)).matrix, i, m) * s;
    }
    for (int i = 0; i + 1 < m; ++i) {
      s = embed_pair(beamsplitter(trans(rng)).matrix, i, i + 1, m) * s;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("vacuum and sub-vacuum physicality") {
  const auto vac = CovarianceMatrix::vacuum(1);
  const auto r = validate_cm(vac);
  CHECK(r.physical());
  CHECK(r.min_symplectic_eig == doctest::Approx(1.0).epsilon(1e-12));

  CovarianceMatrix half(1, 0.5 * Eigen::MatrixXd::Identity(2, 2));
  const auto r2 = validate_cm(half);
  CHECK_FALSE(r2.physical());
  CHECK(r2.min_symplectic_eig == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("two-mode squeezed vacuum is pure") {
  const auto cm = CovarianceMatrix::tmsvs(std::cosh(1.0));
  const auto r = validate_cm(cm);
  CHECK(r.physical());
  CHECK(r.min_symplectic_eig == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("symplectic eigenvalues, closed cases") {
  CovarianceMatrix thermal(1, 3.0 * Eigen::MatrixXd::Identity(2, 2));
  const auto nu1 = symplectic_eigenvalues(thermal);
  REQUIRE(nu1.size() == 1);
  CHECK(nu1[0] == doctest::Approx(3.0).epsilon(1e-12));

  const auto nus = symplectic_eigenvalues(CovarianceMatrix::standard_form(2, 3, 0));
  REQUIRE(nus.size() == 2);
  CHECK(nus[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(nus[1] == doctest::Approx(2.0).epsilon(1e-12));

  const double s = 0.7;
  const auto pure = symplectic_eigenvalues(CovarianceMatrix::standard_form(
      std::cosh(2 * s), std::cosh(2 * s), std::sinh(2 * s)));
  CHECK(pure[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pure[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenvalue computation rejects non-positive-definite input") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(symplectic_eigenvalues(CovarianceMatrix(1, m)),
                  std::domain_error);
}

TEST_CASE("gaussian unitary generators") {
  CHECK((beamsplitter(1.0).matrix - Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK((squeeze1(0.0).matrix - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  const auto rot = rotation(M_PI / 2).matrix;
  CHECK(rot(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rot(0, 1) == doctest::Approx(1.0));
  CHECK(rot(1, 0) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(beamsplitter(1.5), std::invalid_argument);
}

TEST_CASE("apply_symplectic") {
  const auto vac = CovarianceMatrix::vacuum(1);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  const auto [cm, new_mean] =
      apply_symplectic(vac, displacement({1.0, 2.0}), mean);
  CHECK((cm.entries() - vac.entries()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(new_mean(0) == doctest::Approx(2.0));
  CHECK(new_mean(1) == doctest::Approx(4.0));

  const auto two_vac = CovarianceMatrix::vacuum(2);
  const auto mixed = apply_symplectic(two_vac, beamsplitter(0.5));
  CHECK((mixed.entries() - Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  const auto squeezed = apply_symplectic(vac, squeeze1(0.5));
  CHECK(squeezed.entries()(0, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK(squeezed.entries()(1, 1) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("conditional covariance after measurement") {
  SUBCASE("uncorrelated modes are untouched") {
    const auto joint = CovarianceMatrix::standard_form(2.0, 3.0, 0.0);
    const auto after = conditional_cm(joint, Detection::HomodyneQ);
    CHECK(after.entries()(0, 0) == doctest::Approx(2.0));
    CHECK(after.entries()(1, 1) == doctest::Approx(2.0));
  }
  SUBCASE("conditioned TMSVS stays pure under homodyne") {
    for (double v : {1.0, 1.5, 3.0, 10.0}) {
      const auto joint = CovarianceMatrix::tmsvs(v);
      const auto after = conditional_cm(joint, Detection::HomodyneQ);
      const auto nus = symplectic_eigenvalues(after);
      CHECK(nus[0] == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("heterodyne Schur complement, a=5 b=5 c=sqrt(24)") {
    const auto joint =
        CovarianceMatrix::standard_form(5.0, 5.0, std::sqrt(24.0));
    const auto after = conditional_cm(joint, Detection::Heterodyne);
    const auto nus = symplectic_eigenvalues(after);
    CHECK(nus[0] == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("planted symplectic spectra are recovered") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> thermal(1.0, 6.0);
  std::uniform_int_distribution<int> modes(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = modes(rng);
    std::vector<double> planted(m);
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int k = 0; k < m; ++k) {
      planted[k] = thermal(rng);
      diag(2 * k, 2 * k) = diag(2 * k + 1, 2 * k + 1) = planted[k];
    }
    std::sort(planted.begin(), planted.end(), std::greater<>());
    const Eigen::MatrixXd s = random_symplectic(m, rng);
    CovarianceMatrix cm(m, s * diag * s.transpose());

    const auto r = validate_cm(cm);
    CHECK(r.physical());
    const auto nus = symplectic_eigenvalues(cm);
    for (int k = 0; k < m; ++k) {
      CHECK(nus[k] == doctest::Approx(planted[k]).epsilon(1e-8));
    }

    if (m >= 2) {
      const auto after = conditional_cm(cm, trial % 2 == 0
                                                ? Detection::HomodyneQ
                                                : Detection::Heterodyne);
      CHECK(validate_cm(after).physical());
    }
  }
}

TEST_CASE("two-mode purity means det = 1 and Delta = 2") {
  const auto pure = CovarianceMatrix::tmsvs(std::cosh(1.2));
  const Eigen::MatrixXd& s = pure.entries();
  const double delta = s.block<2, 2>(0, 0).determinant() +
                       s.block<2, 2>(2, 2).determinant() +
                       2.0 * s.block<2, 2>(0, 2).determinant();
  CHECK(s.determinant() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(delta == doctest::Approx(2.0).epsilon(1e-8));

  const auto mixed = CovarianceMatrix::standard_form(2.0, 2.0, 1.0);
  const auto nus = symplectic_eigenvalues(mixed);
  CHECK(nus[0] > 1.0 + 1e-8);
  CHECK(mixed.entries().determinant() > 1.0 + 1e-8);
}

TEST_CASE("apply_symplectic preserves physicality") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cm = CovarianceMatrix::tmsvs(1.0 + 0.1 * trial);
    SymplecticTransform t(random_symplectic(2, rng));
    CHECK(validate_cm(apply_symplectic(cm, t)).physical());
  }
}

TEST_CASE("JSON round trip") {
  const auto cm = CovarianceMatrix::standard_form(5.0, 3.025, std::sqrt(12.0));
  const auto back = CovarianceMatrix::from_json(cm.to_json());
  CHECK(back.modes() == 2);
  CHECK((back.entries() - cm.entries()).cwiseAbs().maxCoeff() <
        1e-12 * cm.entries().cwiseAbs().maxCoeff());
}

TEST_CASE("constructor rejections") {
  CHECK_THROWS_AS(CovarianceMatrix(1, Eigen::MatrixXd::Identity(3, 3)),
                  std::invalid_argument);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(CovarianceMatrix(1, asym), std::invalid_argument);
  CHECK_THROWS_AS(
      SymplecticTransform(2.0 * Eigen::MatrixXd::Identity(2, 2)),
      std::invalid_argument);
}
