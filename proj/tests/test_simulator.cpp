#include <cmath>
#include <numeric>

#include "cvqkd/estimation.hpp"
#include "cvqkd/simulator.hpp"
#include "doctest.h"

using namespace cvqkd;

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / v.size();
}

}  // namespace

TEST_CASE("bit-exact determinism") {
  SimSpec spec;
  spec.v_mod = 4.0;
  spec.transmittance = 0.6;
  spec.excess_noise = 0.03;
  spec.rounds = 5000;
  spec.seed = 99;
  const auto a = simulate(spec);
  const auto b = simulate(spec);
  CHECK(a.xs == b.xs);
  CHECK(a.ys == b.ys);

  spec.seed = 100;
  const auto c = simulate(spec);
  CHECK(a.xs != c.xs);
}

TEST_CASE("identity channel leaves one unit of shot noise") {
  SimSpec spec;
  spec.v_mod = 4.0;
  spec.transmittance = 1.0;
  spec.excess_noise = 0.0;
  spec.rounds = 200000;
  spec.seed = 5;
  const auto d = simulate(spec);
  std::vector<double> residual(d.rows());
  for (int i = 0; i < d.rows(); ++i) residual[i] = d.ys[i] - d.xs[i];
  const double se = std::sqrt(2.0 / d.rows());
  CHECK(std::abs(variance(residual) - 1.0) < 4.0 * se);
  CHECK(std::abs(mean(residual)) < 4.0 / std::sqrt(1.0 * d.rows()));
}

TEST_CASE("empirical moments match the channel model") {
  SimSpec spec;
  spec.v_mod = 4.0;
  spec.transmittance = 0.5;
  spec.excess_noise = 0.1;
  spec.rounds = 1000000;
  spec.seed = 17;

  SUBCASE("homodyne") {
    const auto d = simulate(spec);
    CHECK(d.rows() == 1000000);
    const double vy = 0.5 * 4.0 + 1.0 + 0.5 * 0.1;
    CHECK(std::abs(variance(d.xs) - 4.0) < 4.0 * 4.0 * std::sqrt(2.0 / 1e6));
    CHECK(std::abs(variance(d.ys) - vy) < 4.0 * vy * std::sqrt(2.0 / 1e6));
    double cov = 0.0;
    for (int i = 0; i < d.rows(); ++i) cov += d.xs[i] * d.ys[i];
    cov /= d.rows();
    const double cov_true = std::sqrt(0.5) * 4.0;
    CHECK(std::abs(cov - cov_true) < 4.0 * 0.01);
  }

  SUBCASE("heterodyne pays exactly one extra vacuum unit") {
    spec.detection = DetectionKind::Heterodyne;
    const auto d = simulate(spec);
    CHECK(d.rows() == 2000000);  // two quadrature rows per round
    const double vy = 0.5 * 4.0 + 2.0 + 0.5 * 0.1;
    CHECK(std::abs(variance(d.ys) - vy) < 4.0 * vy * std::sqrt(2.0 / 2e6));
  }
}

TEST_CASE("closed loop with the MLE recovers the channel") {
  SimSpec spec;
  spec.v_mod = 4.0;
  spec.transmittance = 0.49;
  spec.excess_noise = 0.05;
  spec.rounds = 1000000;
  spec.seed = 31;
  const auto d = simulate(spec);
  const auto [t, s2] = mle_fit(d);
  CHECK(std::abs(t * t - 0.49) < 0.005);
  CHECK(std::abs(s2 - (1.0 + 0.49 * 0.05)) < 0.01);
}

TEST_CASE("QPSK rows carry unit labels and scaled means") {
  SimSpec spec;
  spec.modulation = SimSpec::Modulation::Qpsk;
  spec.alpha = 0.5;
  spec.transmittance = 0.64;
  spec.excess_noise = 0.0;
  spec.rounds = 200000;
  spec.seed = 8;
  const auto d = simulate(spec);
  CHECK(d.width == 2);
  CHECK(d.rows() == 200000);

  int label_counts[4] = {0, 0, 0, 0};
  double labeled_sum = 0.0;
  for (int i = 0; i < d.rows(); ++i) {
    const double xq = d.xs[2 * i], xp = d.xs[2 * i + 1];
    const bool on_q = std::abs(xq) == 1.0 && xp == 0.0;
    const bool on_p = xq == 0.0 && std::abs(xp) == 1.0;
    CHECK((on_q || on_p));
    if (on_q)
      ++label_counts[xq > 0 ? 0 : 1];
    else
      ++label_counts[xp > 0 ? 2 : 3];
    labeled_sum += xq * d.ys[2 * i] + xp * d.ys[2 * i + 1];
  }
  // symbols roughly uniform
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(label_counts[k] / 5e4 - 1.0) < 0.05);
  }
  // labeled-component mean is 2 sqrt(T) alpha
  const double m = labeled_sum / d.rows();
  CHECK(std::abs(m - 2.0 * 0.8 * 0.5) < 0.01);
}

TEST_CASE("sweep derives per-point seeds and is order independent") {
  SimSpec tmpl;
  tmpl.v_mod = 4.0;
  tmpl.excess_noise = 0.02;
  tmpl.rounds = 1000;
  tmpl.seed = 12345;

  const std::vector<double> grid = {0.9, 0.5, 0.2};
  const auto out = sweep(tmpl, grid);
  REQUIRE(out.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(out[k].first == grid[k]);
    SimSpec single = tmpl;
    single.transmittance = grid[k];
    single.seed = derived_seed(tmpl.seed, k);
    const auto ref = simulate(single);
    CHECK(out[k].second.xs == ref.xs);
    CHECK(out[k].second.ys == ref.ys);
  }

  // distinct points use distinct streams
  CHECK(out[0].second.xs != out[1].second.xs);
  CHECK(derived_seed(12345, 0) != derived_seed(12345, 1));
}

TEST_CASE("summary JSON reports rows and moments") {
  SimSpec spec;
  spec.rounds = 1000;
  spec.seed = 3;
  spec.transmittance = 0.5;
  const auto d = simulate(spec);
  const auto json = dataset_summary_json(d);
  CHECK(json.find("\"rows\"") != std::string::npos);
  CHECK(json.find("1000") != std::string::npos);
  CHECK(json.find("\"width\"") != std::string::npos);
}

TEST_CASE("spec validation") {
  SimSpec spec;
  spec.rounds = 1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.rounds = 100;
  spec.transmittance = 1.2;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = SimSpec{};
  spec.rounds = 100;
  spec.v_mod = -1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = SimSpec{};
  spec.rounds = 100;
  spec.modulation = SimSpec::Modulation::Qpsk;
  spec.alpha = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
