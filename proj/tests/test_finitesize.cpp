#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "cvqkd/finitesize.hpp"
#include "doctest.h"

using namespace cvqkd;

TEST_CASE("penalty terms against frozen high-precision values") {
  CHECK(aep_penalty(1e8, 5, 0.95, 1e-10) ==
        doctest::Approx(0.0097580108579224).epsilon(1e-12));
  CHECK(pa_penalty(1e9, 1e-10) ==
        doctest::Approx(6.64385618977472e-8).epsilon(1e-12));
}

TEST_CASE("penalties shrink with block size") {
  double prev_aep = 1e9, prev_pa = 1e9;
  for (double n : {1e6, 1e8, 1e10, 1e12}) {
    const double a = aep_penalty(n, 5, 0.95, 1e-10);
    const double p = pa_penalty(n, 1e-10);
    CHECK(a > 0.0);
    CHECK(a < prev_aep);
    CHECK(p > 0.0);
    CHECK(p < prev_pa);
    prev_aep = a;
    prev_pa = p;
  }
}

TEST_CASE("penalty grows with discretization depth and stricter epsilon") {
  CHECK(aep_penalty(1e9, 8, 0.95, 1e-10) > aep_penalty(1e9, 5, 0.95, 1e-10));
  CHECK(aep_penalty(1e9, 5, 0.95, 1e-12) > aep_penalty(1e9, 5, 0.95, 1e-10));
}

TEST_CASE("composed finite-size rate against frozen values") {
  // V_Mod=4, T=0.4, xi=0.03, beta=0.95, heterodyne asymptotic pieces
  // evaluated independently at 30 digits, then composed.
  const double mutual_info = 0.844167587675331;
  const double chi = 0.633195481482589;
  FiniteSizeParams fs;
  fs.n_total = 1e9;
  fs.m_disclosed = 5e8;
  fs.d_bits = 5;
  fs.p_ec = 0.95;
  fs.eps_bar = fs.eps_h = fs.eps_cor = fs.eps_pe = 1e-10;
  const auto r = keyrate_finite(mutual_info, chi, 0.95, fs);
  CHECK(r.delta_n == doctest::Approx(0.00436404799782290).epsilon(1e-12));
  CHECK(r.k_eps == doctest::Approx(0.0780898474352975).epsilon(1e-12));
  CHECK(r.eps_total == doctest::Approx(4e-10).epsilon(1e-14));
  CHECK_FALSE(r.abort);
}

TEST_CASE("finite-size rate converges to the asymptotic rate") {
  const double mutual_info = 0.844167587675331;
  const double chi = 0.633195481482589;
  const double asymptotic = 0.95 * mutual_info - chi;
  FiniteSizeParams fs;
  fs.p_ec = 1.0;
  fs.eps_bar = fs.eps_h = fs.eps_cor = fs.eps_pe = 1e-10;

  double prev = -1e9;
  for (double n : {1e8, 1e10, 1e12}) {
    fs.n_total = n;
    fs.m_disclosed = n / 1000.0;
    const auto r = keyrate_finite(mutual_info, chi, 0.95, fs);
    CHECK(r.k_eps > prev);
    prev = r.k_eps;
  }
  // normalize away the key fraction: what remains is beta I - chi - Delta(n)
  const double prefactor = fs.n_key() * fs.p_ec / fs.n_total;
  const auto r = keyrate_finite(mutual_info, chi, 0.95, fs);
  CHECK(std::abs(r.k_eps / prefactor - asymptotic) / asymptotic < 0.01);
}

TEST_CASE("failed error correction yields no key") {
  FiniteSizeParams fs;
  fs.n_total = 1e9;
  fs.m_disclosed = 5e8;
  fs.p_ec = 0.0;
  const auto r = keyrate_finite(0.8, 0.6, 0.95, fs);
  CHECK(r.k_eps == 0.0);
  CHECK(r.abort);
}

TEST_CASE("negative finite rate flags abort") {
  FiniteSizeParams fs;
  fs.n_total = 1e5;  // far too short a block
  fs.m_disclosed = 5e4;
  fs.p_ec = 0.95;
  const auto r = keyrate_finite(0.65, 0.62, 0.95, fs);
  CHECK(r.k_eps < 0.0);
  CHECK(r.abort);
}

TEST_CASE("parameter validation") {
  FiniteSizeParams fs;
  fs.n_total = 1e6;
  fs.m_disclosed = 2e6;  // more disclosed than sent
  CHECK_THROWS_AS(fs.validate(), std::invalid_argument);
  fs = FiniteSizeParams{};
  fs.n_total = 1e6;
  fs.eps_h = 0.0;
  CHECK_THROWS_AS(fs.validate(), std::invalid_argument);
  fs = FiniteSizeParams{};
  fs.n_total = 1e6;
  fs.p_ec = 1.5;
  CHECK_THROWS_AS(fs.validate(), std::invalid_argument);
}
