#ifndef CVQKD_FOCK_HPP
#define CVQKD_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace cvqkd {

/// Finite set of coherent amplitudes with preparation probabilities.
struct ConstellationPoint {
  std::complex<double> amplitude;
  double probability = 0.0;
  std::string label;
};

class Constellation {
 public:
  explicit Constellation(std::vector<ConstellationPoint> points);

  static Constellation bpsk(double alpha);
  /// Axis-aligned QPSK: {alpha, -alpha, i alpha, -i alpha}, equiprobable.
  static Constellation qpsk(double alpha);
  static Constellation from_json(const std::string& text);
  std::string to_json() const;

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<ConstellationPoint>& points() const { return points_; }
  const ConstellationPoint& point(int k) const { return points_[k]; }
  std::vector<double> probabilities() const;
  double max_abs2() const;
  double mean_photon_number() const;

 private:
  std::vector<ConstellationPoint> points_;
};

using FockVector = Eigen::VectorXcd;    // length cutoff + 1
using FockOperator = Eigen::MatrixXcd;  // (cutoff + 1)^2

/// Symmetrized two-mode second moments (V, W, Z), SNU.
struct SecondMoments {
  double v = 1.0;
  double w = 1.0;
  double z = 0.0;
};

/// Poisson-tail-safe truncation level for amplitudes up to sqrt(max_abs2).
int recommended_cutoff(double max_abs2);

/// Coherent-state expansion e^{-|a|^2/2} a^n / sqrt(n!) up to the cutoff.
/// Throws when the truncated tail mass exceeds 1e-12.
FockVector coherent_vector(std::complex<double> alpha, int cutoff);

/// Average state tau = sum_k p_k |a_k><a_k| in the truncated Fock space.
FockOperator constellation_state(const Constellation& c, int cutoff);

/// Exact spectrum of tau via the weighted Gram matrix
/// sqrt(p_i p_j) <a_i|a_j>; cutoff-free.
std::vector<double> gram_spectrum(const Constellation& c);
/// Same with per-point weights replacing the stored probabilities.
std::vector<double> gram_spectrum(const Constellation& c,
                                  const std::vector<double>& weights);

enum class ChannelSide { Bob, Eve };

/// Pure-loss image of a constellation: amplitudes scaled by sqrt(T) (Bob)
/// or sqrt(1-T) (Eve); probabilities unchanged.
Constellation pure_loss_output(const Constellation& c, double transmittance,
                               ChannelSide side);

/// Two-mode beam-splitter unitary on the truncated joint Fock space,
/// exp(theta (a^dag b - a b^dag)) with T = cos^2(theta).
Eigen::MatrixXcd beamsplitter_unitary(double transmissivity, int cutoff);

/// (V, W, Z) of the purified constellation state after a pure-loss channel,
/// evaluated through the beam-splitter dilation with a vacuum ancilla.
/// Re-evaluates at cutoff + 5 and throws if the moments shift by > 1e-8.
SecondMoments purification_cm(const Constellation& c, double transmittance,
                              int cutoff);

}  // namespace cvqkd

#endif
