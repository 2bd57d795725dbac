#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>

#include "cvqkd.h"
#include "doctest.h"

TEST_CASE("gaussian-modulation rate through the C API") {
  cvqkd_protocol p{CVQKD_HETERODYNE, CVQKD_REVERSE, 0.95, 4.0};
  double t = 0.0;
  REQUIRE(cvqkd_transmittance_from_distance(10.0, 0.2, &t) == CVQKD_OK);
  CHECK(t == doctest::Approx(std::pow(10.0, -0.2)).epsilon(1e-14));

  cvqkd_channel ch{t, 0.05, 0.6, 0.0, 0};
  cvqkd_rate r;
  REQUIRE(cvqkd_keyrate_gm(&p, &ch, &r) == CVQKD_OK);
  CHECK(r.mutual_info == doctest::Approx(0.807396198519).epsilon(1e-9));
  CHECK(r.holevo == doctest::Approx(0.644901762272).epsilon(1e-9));
  CHECK(r.keyrate == doctest::Approx(0.122124626321).epsilon(1e-9));
  CHECK(r.abort_flag == 0);

  cvqkd_channel trusted{t, 0.02, 0.6, 0.03, 1};
  REQUIRE(cvqkd_keyrate_gm(&p, &trusted, &r) == CVQKD_OK);
  CHECK(r.keyrate == doctest::Approx(0.244466230192).epsilon(1e-9));
}

TEST_CASE("MDI closed form and domain mapping") {
  double k = 0.0;
  REQUIRE(cvqkd_keyrate_mdi_symmetric(6.0, &k) == CVQKD_OK);
  CHECK(k == doctest::Approx(-1.09290883141734872).epsilon(1e-12));

  CHECK(cvqkd_keyrate_mdi_symmetric(2.0, &k) == CVQKD_ERR_DOMAIN);
  CHECK(std::strlen(cvqkd_last_error()) > 0);
}

TEST_CASE("null-pointer arguments map to ARG") {
  double out = 0.0;
  CHECK(cvqkd_keyrate_mdi_symmetric(6.0, nullptr) == CVQKD_ERR_ARG);
  CHECK(cvqkd_keyrate_gm(nullptr, nullptr, nullptr) == CVQKD_ERR_ARG);
  CHECK(cvqkd_mutual_info_dm(nullptr, nullptr, &out) == CVQKD_ERR_ARG);
}

TEST_CASE("invalid parameters map to ARG with a message") {
  cvqkd_protocol p{CVQKD_HETERODYNE, CVQKD_REVERSE, 0.95, 4.0};
  cvqkd_channel ch{-0.5, 0.05, 0.6, 0.0, 0};
  cvqkd_rate r;
  CHECK(cvqkd_keyrate_gm(&p, &ch, &r) == CVQKD_ERR_ARG);
  CHECK(std::strlen(cvqkd_last_error()) > 0);
}

TEST_CASE("worst-case estimate chain") {
  cvqkd_protocol p{CVQKD_HETERODYNE, CVQKD_REVERSE, 0.95, 4.0};
  cvqkd_rate worst, truth;
  REQUIRE(cvqkd_keyrate_from_estimate(&p, 0.69, 1.03, &worst) == CVQKD_OK);
  cvqkd_channel ch{0.5, 0.05, 1.0, 0.0, 0};
  REQUIRE(cvqkd_keyrate_gm(&p, &ch, &truth) == CVQKD_OK);
  CHECK(worst.keyrate < truth.keyrate);
}

TEST_CASE("discrete modulation through the C API") {
  cvqkd_constellation* c = nullptr;
  REQUIRE(cvqkd_constellation_bpsk(0.15, &c) == CVQKD_OK);
  REQUIRE(c != nullptr);

  cvqkd_dm_config cfg{0.5, 0.0, CVQKD_HOMODYNE, CVQKD_REVERSE, 0.95,
                      0.0, 0,   0};
  double mi = 0.0, chi_direct = 0.0, chi_g = 0.0;
  REQUIRE(cvqkd_mutual_info_dm(c, &cfg, &mi) == CVQKD_OK);
  CHECK(mi > 0.0);
  REQUIRE(cvqkd_holevo_dm(c, &cfg, CVQKD_BOUND_DIRECT, &chi_direct) ==
          CVQKD_OK);
  REQUIRE(cvqkd_holevo_dm(c, &cfg, CVQKD_BOUND_EXTREMALITY, &chi_g) ==
          CVQKD_OK);
  CHECK(chi_g >= chi_direct - 1e-9);

  cvqkd_rate r;
  REQUIRE(cvqkd_keyrate_dm(c, &cfg, CVQKD_BOUND_DIRECT, &r) == CVQKD_OK);
  CHECK(r.keyrate == doctest::Approx(0.95 * mi - chi_direct).epsilon(1e-10));

  // excess noise is rejected on the Holevo path
  cfg.excess_noise = 0.01;
  CHECK(cvqkd_holevo_dm(c, &cfg, CVQKD_BOUND_DIRECT, &chi_direct) ==
        CVQKD_ERR_ARG);

  cvqkd_constellation_free(c);
}

TEST_CASE("constellation JSON parsing errors map to IO") {
  cvqkd_constellation* c = nullptr;
  CHECK(cvqkd_constellation_from_json("{broken", &c) == CVQKD_ERR_IO);
  CHECK(c == nullptr);
}

TEST_CASE("simulate, serialize, estimate round trip") {
  cvqkd_sim_spec spec{CVQKD_MOD_GAUSSIAN, 4.0, 0.5, 0.49, 0.05,
                      CVQKD_HOMODYNE,     200000, 42};
  cvqkd_dataset* d = nullptr;
  REQUIRE(cvqkd_simulate(&spec, &d) == CVQKD_OK);
  int64_t rows = 0;
  REQUIRE(cvqkd_dataset_rows(d, &rows) == CVQKD_OK);
  CHECK(rows == 200000);

  char* csv = nullptr;
  REQUIRE(cvqkd_dataset_to_csv(d, &csv) == CVQKD_OK);
  cvqkd_dataset* back = nullptr;
  REQUIRE(cvqkd_dataset_from_csv(csv, &back) == CVQKD_OK);
  int64_t back_rows = 0;
  cvqkd_dataset_rows(back, &back_rows);
  CHECK(back_rows == rows);
  cvqkd_string_free(csv);

  char* json = nullptr;
  REQUIRE(cvqkd_dataset_summary_json(d, &json) == CVQKD_OK);
  CHECK(std::string(json).find("\"rows\"") != std::string::npos);
  cvqkd_string_free(json);

  cvqkd_estimate est;
  REQUIRE(cvqkd_estimate_mle(d, 4.0, 1e-10, CVQKD_QUANTILE_PAPER, &est) ==
          CVQKD_OK);
  CHECK(std::abs(est.t_hat - std::sqrt(0.49)) < 0.01);
  CHECK(est.t_min < est.t_hat);
  CHECK(est.sigma2_max > est.sigma2_hat);

  cvqkd_dataset_free(back);
  cvqkd_dataset_free(d);
}

TEST_CASE("QPSK estimation through the C API") {
  cvqkd_sim_spec spec{CVQKD_MOD_QPSK, 4.0, 0.5, 0.5, 0.1,
                      CVQKD_HETERODYNE, 500000, 7};
  cvqkd_dataset* d = nullptr;
  REQUIRE(cvqkd_simulate(&spec, &d) == CVQKD_OK);
  double t = 0.0, xi = 0.0;
  REQUIRE(cvqkd_estimate_qpsk(d, 0.5, &t, &xi) == CVQKD_OK);
  CHECK(std::abs(t - 0.5) < 0.01);
  CHECK(std::abs(xi - 0.1) < 0.02);
  cvqkd_dataset_free(d);
}

TEST_CASE("bad CSV maps to IO") {
  cvqkd_dataset* d = nullptr;
  CHECK(cvqkd_dataset_from_csv("bogus,header\n1,2\n", &d) == CVQKD_ERR_IO);
  CHECK(d == nullptr);
  CHECK(std::strlen(cvqkd_last_error()) > 0);
}

TEST_CASE("finite-size rate through the C API") {
  cvqkd_fs_params fs{1e9, 5e8, 5, 0.95, 1e-10, 1e-10, 1e-10, 1e-10};
  cvqkd_fs_result r;
  REQUIRE(cvqkd_keyrate_finite(0.844167587675331, 0.633195481482589, 0.95,
                               &fs, &r) == CVQKD_OK);
  CHECK(r.delta_n == doctest::Approx(0.00436404799782290).epsilon(1e-12));
  CHECK(r.k_eps == doctest::Approx(0.0780898474352975).epsilon(1e-12));
  CHECK(r.abort_flag == 0);

  fs.m_disclosed = 2e9;  // more than sent
  CHECK(cvqkd_keyrate_finite(0.8, 0.6, 0.95, &fs, &r) == CVQKD_ERR_ARG);
}
