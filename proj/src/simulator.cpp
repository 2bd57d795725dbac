#include "cvqkd/simulator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace cvqkd {

namespace {

// Explicit Box-Muller on top of mt19937_64 so the sample stream is
// bit-identical across platforms (std::normal_distribution is not).
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  double uniform_open() {
    // (0,1]: never feeds log() a zero.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

void SimSpec::validate() const {
  if (rounds < 2) throw std::invalid_argument("rounds must be >= 2");
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::invalid_argument("transmittance must be in [0,1]");
  }
  if (!(excess_noise >= 0.0)) {
    throw std::invalid_argument("excess noise must be nonnegative");
  }
  if (modulation == Modulation::Gaussian && !(v_mod > 0.0)) {
    throw std::invalid_argument("modulation variance must be positive");
  }
  if (modulation == Modulation::Qpsk && !(alpha > 0.0)) {
    throw std::invalid_argument("alpha must be positive");
  }
}

Dataset simulate(const SimSpec& spec) {
  spec.validate();
  GaussianSource rng(spec.seed);
  const double sqrt_t = std::sqrt(spec.transmittance);
  Dataset d;

  if (spec.modulation == SimSpec::Modulation::Gaussian) {
    const int mu = spec.detection == DetectionKind::Homodyne ? 1 : 2;
    const double noise_sd =
        std::sqrt(mu + spec.transmittance * spec.excess_noise);
    const double mod_sd = std::sqrt(spec.v_mod);
    const std::uint64_t samples = spec.rounds * mu;
    d.width = 1;
    d.xs.reserve(samples);
    d.ys.reserve(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
      const double x = mod_sd * rng.next();
      d.xs.push_back(x);
      d.ys.push_back(sqrt_t * x + noise_sd * rng.next());
    }
  } else {
    const double mean = 2.0 * sqrt_t * spec.alpha;
    const double noise_sd =
        std::sqrt(1.0 + spec.transmittance * spec.excess_noise);
    d.width = 2;
    d.xs.reserve(2 * spec.rounds);
    d.ys.reserve(2 * spec.rounds);
    for (std::uint64_t i = 0; i < spec.rounds; ++i) {
      const unsigned symbol = static_cast<unsigned>(rng.raw() & 3u);
      // symbols 0..3 -> labels (1,0), (-1,0), (0,1), (0,-1)
      const double sign = (symbol & 1u) ? -1.0 : 1.0;
      const bool q_axis = symbol < 2u;
      const double xq = q_axis ? sign : 0.0;
      const double xp = q_axis ? 0.0 : sign;
      d.xs.push_back(xq);
      d.xs.push_back(xp);
      d.ys.push_back(mean * xq + noise_sd * rng.next());
      d.ys.push_back(mean * xp + noise_sd * rng.next());
    }
  }
  return d;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer on the index, XORed into the base seed.
  std::uint64_t z = index + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return seed ^ z;
}

std::vector<std::pair<double, Dataset>> sweep(
    const SimSpec& tmpl, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("empty sweep grid");
  std::vector<std::pair<double, Dataset>> out;
  out.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    SimSpec point = tmpl;
    point.transmittance = t_grid[i];
    point.seed = derived_seed(tmpl.seed, i);
    out.emplace_back(t_grid[i], simulate(point));
  }
  return out;
}

std::string dataset_summary_json(const Dataset& d) {
  d.validate();
  const auto moments = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= v.size();
    return std::pair<double, double>(mean, var);
  };
  const auto [mx, vx] = moments(d.xs);
  const auto [my, vy] = moments(d.ys);
  double cov = 0.0;
  for (size_t i = 0; i < d.xs.size(); ++i) cov += (d.xs[i] - mx) * (d.ys[i] - my);
  cov /= d.xs.size();

  nlohmann::json j;
  j["rows"] = d.rows();
  j["width"] = d.width;
  j["mean_x"] = mx;
  j["mean_y"] = my;
  j["var_x"] = vx;
  j["var_y"] = vy;
  j["cov_xy"] = cov;
  return j.dump();
}

}  // namespace cvqkd
