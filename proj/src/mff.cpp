#include "senseopt/mff.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace senseopt {

namespace {

constexpr int kMaxHidden = 256;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

void check_net(const MffNetwork& net) {
  require(net.k >= 1 && net.k <= kMaxHidden, "MffNetwork: bad hidden count");
  require(net.w1.size() == static_cast<std::size_t>(net.k) &&
              net.b1.size() == static_cast<std::size_t>(net.k) &&
              net.w2.size() == static_cast<std::size_t>(net.k),
          "MffNetwork: weight vectors must have k entries");
  require(net.target_scale > 0.0, "MffNetwork: target_scale must be positive");
}

void check_input(double x) {
  require(std::isfinite(x), "MffNetwork: input must be finite");
}

}  // namespace

MffNetwork MffNetwork::init(int k, double slot_t, std::uint64_t seed) {
  require(k >= 1 && k <= kMaxHidden, "MffNetwork::init: bad hidden count");
  require(slot_t > 0.0, "MffNetwork::init: slot_t must be positive");
  MffNetwork net;
  net.k = k;
  net.input_scale = 1.0 / slot_t;
  net.target_scale = 1.0;
  net.w1.resize(static_cast<std::size_t>(k));
  net.b1.resize(static_cast<std::size_t>(k));
  net.w2.resize(static_cast<std::size_t>(k));
  kernels::Xoshiro256pp rng(seed);
  auto u = [&rng] { return rng.uniform01() - 0.5; };
  for (int i = 0; i < k; ++i) {
    net.w1[static_cast<std::size_t>(i)] = u();
    net.b1[static_cast<std::size_t>(i)] = u();
    net.w2[static_cast<std::size_t>(i)] = u();
  }
  net.b2 = u();
  return net;
}

TrainingBuffer::TrainingBuffer(std::size_t capacity) : capacity_(capacity) {
  require(capacity >= 1, "TrainingBuffer: capacity must be >= 1");
  pairs_.reserve(capacity);
}

void TrainingBuffer::push(double x, double phi) {
  if (pairs_.size() < capacity_) {
    pairs_.emplace_back(x, phi);
  } else {
    pairs_[next_] = {x, phi};
    next_ = (next_ + 1) % capacity_;
  }
}

double forward(const MffNetwork& net, double x) {
  check_net(net);
  check_input(x);
  double acc = net.b2;
  for (int i = 0; i < net.k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    acc += net.w2[s] * sigmoid(net.w1[s] * x + net.b1[s]);
  }
  return std::tanh(acc);
}

ForwardTrace forward_full(const MffNetwork& net, double x) {
  check_net(net);
  check_input(x);
  ForwardTrace tr;
  tr.hidden.resize(static_cast<std::size_t>(net.k));
  double acc = net.b2;
  for (int i = 0; i < net.k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    tr.hidden[s] = sigmoid(net.w1[s] * x + net.b1[s]);
    acc += net.w2[s] * tr.hidden[s];
  }
  tr.phi_hat = std::tanh(acc);
  return tr;
}

double sensitivity(const MffNetwork& net, double x) {
  check_net(net);
  check_input(x);
  double hidden[kMaxHidden];
  double acc = net.b2;
  for (int i = 0; i < net.k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    hidden[i] = sigmoid(net.w1[s] * x + net.b1[s]);
    acc += net.w2[s] * hidden[i];
  }
  const double out = std::tanh(acc);
  double sum = 0.0;
  for (int i = 0; i < net.k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    sum += net.w2[s] * hidden[i] * (1.0 - hidden[i]) * net.w1[s];
  }
  return (1.0 - out * out) * sum;
}

std::vector<double> loss_gradient(const MffNetwork& net, double x,
                                  double target) {
  const ForwardTrace tr = forward_full(net, x);
  const double delta2 = (tr.phi_hat - target) * (1.0 - tr.phi_hat * tr.phi_hat);
  std::vector<double> g(static_cast<std::size_t>(3 * net.k) + 1);
  for (int i = 0; i < net.k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    const double h = tr.hidden[s];
    const double delta1 = delta2 * net.w2[s] * h * (1.0 - h);
    g[s] = delta1 * x;                                    // dL/dw1
    g[static_cast<std::size_t>(net.k) + s] = delta1;      // dL/db1
    g[static_cast<std::size_t>(2 * net.k) + s] = delta2 * h;  // dL/dw2
  }
  g.back() = delta2;  // dL/db2
  return g;
}

double train_step(MffNetwork& net, const TrainingBuffer& buffer,
                  double learning_rate, int epochs,
                  kernels::Xoshiro256pp& rng) {
  check_net(net);
  require(!buffer.empty(), "train_step: empty buffer");
  require(learning_rate > 0.0, "train_step: learning_rate must be positive");
  require(epochs >= 1, "train_step: epochs must be >= 1");

  const auto& pats = buffer.pairs();
  std::vector<std::size_t> order(pats.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  double hidden[kMaxHidden];
  for (int ep = 0; ep < epochs; ++ep) {
    // Fisher-Yates shuffle per epoch.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j =
          static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i)));
      std::swap(order[i - 1], order[j]);
    }
    for (const std::size_t idx : order) {
      const double x = pats[idx].first;
      const double target = pats[idx].second * net.target_scale;

      double acc = net.b2;
      for (int i = 0; i < net.k; ++i) {
        const auto s = static_cast<std::size_t>(i);
        hidden[i] = sigmoid(net.w1[s] * x + net.b1[s]);
        acc += net.w2[s] * hidden[i];
      }
      const double out = std::tanh(acc);
      const double delta2 = (out - target) * (1.0 - out * out);
      for (int i = 0; i < net.k; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const double h = hidden[i];
        const double delta1 = delta2 * net.w2[s] * h * (1.0 - h);
        net.w2[s] -= learning_rate * delta2 * h;
        net.w1[s] -= learning_rate * delta1 * x;
        net.b1[s] -= learning_rate * delta1;
      }
      net.b2 -= learning_rate * delta2;
    }
  }

  double d = 0.0;
  for (const auto& [x, phi] : pats) {
    const double e = forward(net, x) - phi * net.target_scale;
    d += 0.5 * e * e;
  }
  return d;
}

void save_network(std::ostream& os, const MffNetwork& net) {
  os.precision(17);
  os << "mff-network v1\n";
  os << "k " << net.k << "\n";
  os << "input_scale " << net.input_scale << "\n";
  os << "target_scale " << net.target_scale << "\n";
  os << "w1";
  for (double v : net.w1) os << " " << v;
  os << "\nb1";
  for (double v : net.b1) os << " " << v;
  os << "\nw2";
  for (double v : net.w2) os << " " << v;
  os << "\nb2 " << net.b2 << "\n";
}

MffNetwork load_network(std::istream& is) {
  std::string word, version;
  is >> word >> version;
  if (word != "mff-network" || version != "v1")
    throw std::invalid_argument("load_network: bad header");
  MffNetwork net;
  auto read_tag = [&is](const char* tag) {
    std::string t;
    is >> t;
    if (t != tag) throw std::invalid_argument("load_network: bad field order");
  };
  read_tag("k");
  is >> net.k;
  require(net.k >= 1 && net.k <= kMaxHidden, "load_network: bad hidden count");
  read_tag("input_scale");
  is >> net.input_scale;
  read_tag("target_scale");
  is >> net.target_scale;
  net.w1.resize(static_cast<std::size_t>(net.k));
  net.b1.resize(static_cast<std::size_t>(net.k));
  net.w2.resize(static_cast<std::size_t>(net.k));
  read_tag("w1");
  for (double& v : net.w1) is >> v;
  read_tag("b1");
  for (double& v : net.b1) is >> v;
  read_tag("w2");
  for (double& v : net.w2) is >> v;
  read_tag("b2");
  is >> net.b2;
  if (!is) throw std::invalid_argument("load_network: truncated snapshot");
  return net;
}

}  // namespace senseopt
