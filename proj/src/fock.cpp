#include "cvqkd/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "cvqkd/errors.hpp"
#include "json.hpp"

namespace cvqkd {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kTailTol = 1e-12;
constexpr double kTraceTol = 1e-9;
constexpr double kMomentStabilityTol = 1e-8;

std::complex<double> coherent_overlap(std::complex<double> a,
                                      std::complex<double> b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

Eigen::MatrixXcd quadrature_q(int dim) {
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double s = std::sqrt(n + 1.0);
    q(n, n + 1) = s;
    q(n + 1, n) = s;
  }
  return q;
}

Eigen::MatrixXcd quadrature_p(int dim) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  const std::complex<double> i(0.0, 1.0);
  for (int n = 0; n + 1 < dim; ++n) {
    const double s = std::sqrt(n + 1.0);
    p(n, n + 1) = -i * s;
    p(n + 1, n) = i * s;
  }
  return p;
}

// Applies a single-mode operator to one mode of a three-mode state vector
// indexed as (a*dim + b)*dim + c.
Eigen::VectorXcd apply_mode_op(const Eigen::VectorXcd& state,
                               const Eigen::MatrixXcd& op, int mode, int dim) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.size());
  const auto idx = [dim](int a, int b, int c) {
    return (a * dim + b) * dim + c;
  };
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        const std::complex<double> amp = state[idx(a, b, c)];
        if (amp == std::complex<double>(0.0, 0.0)) continue;
        switch (mode) {
          case 0:
            for (int r = 0; r < dim; ++r) {
              if (op(r, a) != 0.0) out[idx(r, b, c)] += op(r, a) * amp;
            }
            break;
          case 1:
            for (int r = 0; r < dim; ++r) {
              if (op(r, b) != 0.0) out[idx(a, r, c)] += op(r, b) * amp;
            }
            break;
          default:
            for (int r = 0; r < dim; ++r) {
              if (op(r, c) != 0.0) out[idx(a, b, r)] += op(r, c) * amp;
            }
            break;
        }
      }
  return out;
}

SecondMoments moments_at_cutoff(const Constellation& c, double transmittance,
                                int cutoff) {
  const int dim = cutoff + 1;
  const FockOperator tau = constellation_state(c, cutoff);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(tau);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("constellation state diagonalization failed");
  }
  // Canonical purification |Phi> = sum_j sqrt(l_j) conj(e_j) (x) e_j, i.e.
  // the matrix conj(sqrt(tau)); Tr_A |Phi><Phi| = tau on the sent mode.
  Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXcd phi =
      (es.eigenvectors() * evals.cwiseSqrt().asDiagonal() *
       es.eigenvectors().adjoint())
          .conjugate();

  // Three-mode state: Alice (0), transmitted mode (1), vacuum ancilla (2).
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim * dim * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) state[(a * dim + b) * dim] = phi(a, b);

  // Beam-splitter dilation on (transmitted, ancilla).
  const Eigen::MatrixXcd bs = beamsplitter_unitary(transmittance, cutoff);
  Eigen::Map<Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                           Eigen::Dynamic, Eigen::RowMajor>>
      as_matrix(state.data(), dim, dim * dim);
  as_matrix = (as_matrix * bs.transpose()).eval();

  const Eigen::MatrixXcd q = quadrature_q(dim);
  const Eigen::MatrixXcd p = quadrature_p(dim);
  const Eigen::VectorXcd qa = apply_mode_op(state, q, 0, dim);
  const Eigen::VectorXcd pa = apply_mode_op(state, p, 0, dim);
  const Eigen::VectorXcd qb = apply_mode_op(state, q, 1, dim);
  const Eigen::VectorXcd pb = apply_mode_op(state, p, 1, dim);

  SecondMoments m;
  m.v = 0.5 * (qa.squaredNorm() + pa.squaredNorm());
  m.w = 0.5 * (qb.squaredNorm() + pb.squaredNorm());
  m.z = 0.5 * (qa.dot(qb).real() - pa.dot(pb).real());
  return m;
}

}  // namespace

Constellation::Constellation(std::vector<ConstellationPoint> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("constellation needs at least 2 points");
  }
  double sum = 0.0;
  for (const auto& pt : points_) {
    if (pt.probability < 0.0) {
      throw std::invalid_argument("constellation probabilities must be >= 0");
    }
    sum += pt.probability;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw std::invalid_argument("constellation probabilities must sum to 1");
  }
}

Constellation Constellation::bpsk(double alpha) {
  return Constellation({{{alpha, 0.0}, 0.5, "0"}, {{-alpha, 0.0}, 0.5, "1"}});
}

Constellation Constellation::qpsk(double alpha) {
  return Constellation({{{alpha, 0.0}, 0.25, "q+"},
                        {{-alpha, 0.0}, 0.25, "q-"},
                        {{0.0, alpha}, 0.25, "p+"},
                        {{0.0, -alpha}, 0.25, "p-"}});
}

Constellation Constellation::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<ConstellationPoint> pts;
  for (const auto& item : j) {
    ConstellationPoint pt;
    pt.amplitude = {item.at("re").get<double>(), item.at("im").get<double>()};
    pt.probability = item.at("p").get<double>();
    if (item.contains("label")) pt.label = item["label"].get<std::string>();
    pts.push_back(std::move(pt));
  }
  return Constellation(std::move(pts));
}

std::string Constellation::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& pt : points_) {
    j.push_back({{"re", pt.amplitude.real()},
                 {"im", pt.amplitude.imag()},
                 {"p", pt.probability},
                 {"label", pt.label}});
  }
  return j.dump();
}

std::vector<double> Constellation::probabilities() const {
  std::vector<double> p(points_.size());
  for (size_t k = 0; k < points_.size(); ++k) p[k] = points_[k].probability;
  return p;
}

double Constellation::max_abs2() const {
  double m = 0.0;
  for (const auto& pt : points_) m = std::max(m, std::norm(pt.amplitude));
  return m;
}

double Constellation::mean_photon_number() const {
  double n = 0.0;
  for (const auto& pt : points_) n += pt.probability * std::norm(pt.amplitude);
  return n;
}

int recommended_cutoff(double max_abs2) {
  return static_cast<int>(
             std::ceil(max_abs2 + 10.0 * std::sqrt(max_abs2 + 1.0))) +
         5;
}

FockVector coherent_vector(std::complex<double> alpha, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  const double n_bar = std::norm(alpha);
  FockVector v(cutoff + 1);
  v[0] = std::exp(-0.5 * n_bar);
  for (int n = 1; n <= cutoff; ++n) v[n] = v[n - 1] * alpha / std::sqrt(n);
  if (1.0 - v.squaredNorm() > kTailTol) {
    throw std::domain_error("coherent-state truncation tail exceeds 1e-12");
  }
  return v;
}

FockOperator constellation_state(const Constellation& c, int cutoff) {
  const int dim = cutoff + 1;
  FockOperator tau = FockOperator::Zero(dim, dim);
  for (const auto& pt : c.points()) {
    const FockVector v = coherent_vector(pt.amplitude, cutoff);
    tau.noalias() += pt.probability * (v * v.adjoint());
  }
  if (1.0 - tau.trace().real() > kTraceTol) {
    throw std::domain_error("constellation state truncation error > 1e-9");
  }
  return tau;
}

std::vector<double> gram_spectrum(const Constellation& c) {
  return gram_spectrum(c, c.probabilities());
}

std::vector<double> gram_spectrum(const Constellation& c,
                                  const std::vector<double>& weights) {
  const int n = c.size();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("weight count does not match constellation");
  }
  Eigen::MatrixXcd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gram(i, j) = std::sqrt(weights[i] * weights[j]) *
                   coherent_overlap(c.point(i).amplitude, c.point(j).amplitude);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  std::vector<double> spec(n);
  for (int k = 0; k < n; ++k) spec[k] = std::max(0.0, es.eigenvalues()[k]);
  std::sort(spec.begin(), spec.end(), std::greater<>());
  return spec;
}

Constellation pure_loss_output(const Constellation& c, double transmittance,
                               ChannelSide side) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::invalid_argument("transmittance must be in [0,1]");
  }
  const double scale = (side == ChannelSide::Bob)
                           ? std::sqrt(transmittance)
                           : std::sqrt(1.0 - transmittance);
  auto pts = c.points();
  for (auto& pt : pts) pt.amplitude *= scale;
  return Constellation(std::move(pts));
}

Eigen::MatrixXcd beamsplitter_unitary(double transmissivity, int cutoff) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::invalid_argument("transmissivity must be in [0,1]");
  }
  const int dim = cutoff + 1;
  const int joint = dim * dim;

  // The generator K = a^dag b - a b^dag is theta-independent; cache the
  // eigendecomposition of H = iK per cutoff and reuse for every angle.
  struct Decomposition {
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;
  };
  static std::map<int, Decomposition> cache;
  static std::mutex cache_mutex;

  const Decomposition* decomp = nullptr;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(cutoff);
    if (it == cache.end()) {
      Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(joint, joint);
      const std::complex<double> i(0.0, 1.0);
      for (int na = 0; na < dim; ++na)
        for (int nb = 0; nb < dim; ++nb) {
          if (na + 1 < dim && nb > 0) {
            const double amp = std::sqrt((na + 1.0) * nb);
            h((na + 1) * dim + (nb - 1), na * dim + nb) += i * amp;
          }
          if (na > 0 && nb + 1 < dim) {
            const double amp = std::sqrt(na * (nb + 1.0));
            h((na - 1) * dim + (nb + 1), na * dim + nb) -= i * amp;
          }
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      it = cache.emplace(cutoff, Decomposition{es.eigenvectors(),
                                               es.eigenvalues()})
               .first;
    }
    decomp = &it->second;
  }

  const double theta = std::acos(std::sqrt(transmissivity));
  Eigen::VectorXcd phases(joint);
  const std::complex<double> i(0.0, 1.0);
  for (int k = 0; k < joint; ++k) {
    phases[k] = std::exp(-i * theta * decomp->values[k]);
  }
  return decomp->vectors * phases.asDiagonal() * decomp->vectors.adjoint();
}

SecondMoments purification_cm(const Constellation& c, double transmittance,
                              int cutoff) {
  const SecondMoments base = moments_at_cutoff(c, transmittance, cutoff);
  const SecondMoments refined = moments_at_cutoff(c, transmittance, cutoff + 5);
  const double shift = std::max({std::abs(base.v - refined.v),
                                 std::abs(base.w - refined.w),
                                 std::abs(base.z - refined.z)});
  if (shift > kMomentStabilityTol) {
    throw accuracy_error("purification moments not cutoff-stable");
  }
  return base;
}

}  // namespace cvqkd
