#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "senseopt/kernels/rng.hpp"

namespace senseopt {

/// 1-K-1 feed-forward network: logistic sigmoid hidden layer, tanh output.
/// Learns the scaled cost surface phi(x) = 1/R(x) from (x, phi) pairs.
struct MffNetwork {
  int k = 9;
  std::vector<double> w1;  // hidden input weights, size k
  std::vector<double> b1;  // hidden biases, size k
  std::vector<double> w2;  // output weights, size k
  double b2 = 0.0;
  double input_scale = 10.0;   // tau (s) -> network input x = tau * input_scale
  double target_scale = 1.0;   // phi -> training target phi * target_scale

  /// Fresh network with weights uniform in [-0.5, 0.5].
  static MffNetwork init(int k, double slot_t, std::uint64_t seed);
};

/// Teacher patterns (x, raw phi), capacity-bounded with most-recent-wins
/// eviction. Raw phi is stored; scaling happens at training time so a
/// growing phi reference rescales the whole buffer implicitly.
class TrainingBuffer {
 public:
  explicit TrainingBuffer(std::size_t capacity);

  void push(double x, double phi);
  std::size_t size() const { return pairs_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return pairs_.empty(); }
  const std::vector<std::pair<double, double>>& pairs() const { return pairs_; }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;  // ring position once full
  std::vector<std::pair<double, double>> pairs_;
};

/// Network output (scaled cost estimate) at input x.
double forward(const MffNetwork& net, double x);

/// Output plus hidden activations, for the sensitivity rule and tests.
struct ForwardTrace {
  double phi_hat;
  std::vector<double> hidden;
};
ForwardTrace forward_full(const MffNetwork& net, double x);

/// Input sensitivity d a1(2) / d a1(0):
/// (1 - out^2) * sum_k w2_k * h_k (1 - h_k) * w1_k.
double sensitivity(const MffNetwork& net, double x);

/// Gradient of the single-pattern squared error 1/2 (out - target)^2 with
/// respect to all weights and biases. Layout: w1[0..k), b1[0..k),
/// w2[0..k), b2 — 3k+1 entries.
std::vector<double> loss_gradient(const MffNetwork& net, double x,
                                  double target);

/// Stochastic gradient descent over the buffer: `epochs` shuffled passes,
/// plain fixed-rate updates. Returns the post-training error
/// d = 1/2 sum_m (out_m - target_m)^2 in scaled units.
double train_step(MffNetwork& net, const TrainingBuffer& buffer,
                  double learning_rate, int epochs,
                  kernels::Xoshiro256pp& rng);

inline double scale_in(const MffNetwork& net, double tau) {
  return tau * net.input_scale;
}
inline double scale_out(const MffNetwork& net, double phi) {
  return phi * net.target_scale;
}
inline double scale_out_inverse(const MffNetwork& net, double phi_hat) {
  return phi_hat / net.target_scale;
}

/// Text snapshot of weights, biases and scalers (round-trips exactly).
void save_network(std::ostream& os, const MffNetwork& net);
MffNetwork load_network(std::istream& is);

}  // namespace senseopt
