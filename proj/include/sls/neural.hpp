// Copyright 2026 The sls-rl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense Q-network family with hand-written backpropagation and Adam.
//
//   Standard: in -> H -> H -> A          (relu, relu, linear)
//   Dueling:  in -> H -> H trunk, value head H -> 1, advantage head H -> A,
//             Q(s,a) = V(s) + A(s,a) - mean_a A(s,a)
//
// Everything is templated on the scalar type: training runs in float, the
// gradient checks instantiate double.

#ifndef SLS_NEURAL_HPP_
#define SLS_NEURAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sls/rng.hpp"

namespace sls {

enum class Architecture : std::uint32_t { kStandard = 0, kDueling = 1 };

constexpr std::string_view ArchitectureName(Architecture a) {
  return a == Architecture::kStandard ? "standard" : "dueling";
}

// Row-major dense matrix.
template <typename Scalar>
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<Scalar> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c) {}

  Scalar& operator()(int r, int c) { return data[std::size_t(r) * cols + c]; }
  Scalar operator()(int r, int c) const {
    return data[std::size_t(r) * cols + c];
  }
  std::span<Scalar> row(int r) {
    return {data.data() + std::size_t(r) * cols, std::size_t(cols)};
  }
  std::span<const Scalar> row(int r) const {
    return {data.data() + std::size_t(r) * cols, std::size_t(cols)};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// Fully connected layer; weights are out x in so each output is a
// contiguous dot product.
template <typename Scalar>
struct Dense {
  int in = 0;
  int out = 0;
  std::vector<Scalar> weight;  // out * in
  std::vector<Scalar> bias;    // out

  Dense() = default;
  Dense(int in_features, int out_features)
      : in(in_features),
        out(out_features),
        weight(std::size_t(in_features) * out_features),
        bias(out_features) {}

  friend bool operator==(const Dense&, const Dense&) = default;
};

template <typename Scalar>
struct Network {
  Architecture arch = Architecture::kStandard;
  int input_size = 0;
  int hidden = 64;
  int n_actions = 10;
  // Standard: {hidden1, hidden2, output}
  // Dueling:  {hidden1, hidden2, value, advantage}
  std::vector<Dense<Scalar>> layers;

  std::size_t ParameterCount() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weight.size() + l.bias.size();
    return n;
  }

  template <typename F>
  void ForEachParameterArray(F&& f) {
    for (auto& l : layers) {
      f(std::span<Scalar>(l.weight));
      f(std::span<Scalar>(l.bias));
    }
  }
  template <typename F>
  void ForEachParameterArray(F&& f) const {
    for (const auto& l : layers) {
      f(std::span<const Scalar>(l.weight));
      f(std::span<const Scalar>(l.bias));
    }
  }

  friend bool operator==(const Network&, const Network&) = default;
};

// Same topology, every parameter zero. Also used as the gradient container.
template <typename Scalar>
Network<Scalar> ZerosLike(const Network<Scalar>& net) {
  Network<Scalar> z;
  z.arch = net.arch;
  z.input_size = net.input_size;
  z.hidden = net.hidden;
  z.n_actions = net.n_actions;
  for (const auto& l : net.layers) z.layers.emplace_back(l.in, l.out);
  return z;
}

template <typename Scalar>
Network<Scalar> MakeNetwork(Architecture arch, int input_size, int hidden,
                            int n_actions) {
  if (input_size < 1 || hidden < 1 || n_actions < 1) {
    throw std::invalid_argument("network dimensions must be positive");
  }
  Network<Scalar> net;
  net.arch = arch;
  net.input_size = input_size;
  net.hidden = hidden;
  net.n_actions = n_actions;
  net.layers.emplace_back(input_size, hidden);
  net.layers.emplace_back(hidden, hidden);
  if (arch == Architecture::kStandard) {
    net.layers.emplace_back(hidden, n_actions);
  } else {
    net.layers.emplace_back(hidden, 1);
    net.layers.emplace_back(hidden, n_actions);
  }
  return net;
}

// Uniform fan-based initialization, bound sqrt(6 / (fan_in + fan_out)),
// zero biases.
template <typename Scalar = float>
Network<Scalar> InitNetwork(Architecture arch, int input_size,
                            std::uint64_t seed, int hidden = 64,
                            int n_actions = 10) {
  auto net = MakeNetwork<Scalar>(arch, input_size, hidden, n_actions);
  SplitMix64 rng(seed);
  for (auto& l : net.layers) {
    const double bound = std::sqrt(6.0 / double(l.in + l.out));
    for (auto& w : l.weight) {
      w = static_cast<Scalar>((2.0 * UniformUnit(rng) - 1.0) * bound);
    }
  }
  return net;
}

template <typename To, typename From>
Network<To> CastNetwork(const Network<From>& src) {
  Network<To> dst = MakeNetwork<To>(src.arch, src.input_size, src.hidden,
                                    src.n_actions);
  for (std::size_t i = 0; i < src.layers.size(); ++i) {
    std::transform(src.layers[i].weight.begin(), src.layers[i].weight.end(),
                   dst.layers[i].weight.begin(),
                   [](From v) { return static_cast<To>(v); });
    std::transform(src.layers[i].bias.begin(), src.layers[i].bias.end(),
                   dst.layers[i].bias.begin(),
                   [](From v) { return static_cast<To>(v); });
  }
  return dst;
}

// Hard copy used for target-network synchronization.
template <typename Scalar>
Network<Scalar> CopyParams(const Network<Scalar>& src) {
  return src;
}

namespace internal {

// y[b] = W x[b] + bias for each row of x.
template <typename Scalar>
void AffineForward(const Dense<Scalar>& layer, const Matrix<Scalar>& x,
                   Matrix<Scalar>& y) {
  y = Matrix<Scalar>(x.rows, layer.out);
  for (int b = 0; b < x.rows; ++b) {
    const Scalar* xr = x.row(b).data();
    for (int j = 0; j < layer.out; ++j) {
      const Scalar* w = layer.weight.data() + std::size_t(j) * layer.in;
      Scalar acc = layer.bias[j];
      for (int i = 0; i < layer.in; ++i) acc += w[i] * xr[i];
      y(b, j) = acc;
    }
  }
}

template <typename Scalar>
void ReluInPlace(Matrix<Scalar>& m) {
  for (auto& v : m.data) v = v > Scalar(0) ? v : Scalar(0);
}

// Accumulates weight/bias gradients for y = W x + b given dL/dy, and
// optionally writes dL/dx.
template <typename Scalar>
void AffineBackward(const Dense<Scalar>& layer, const Matrix<Scalar>& x,
                    const Matrix<Scalar>& dy, Dense<Scalar>& grad,
                    Matrix<Scalar>* dx) {
  if (dx != nullptr) *dx = Matrix<Scalar>(x.rows, layer.in);
  for (int b = 0; b < x.rows; ++b) {
    const Scalar* xr = x.row(b).data();
    for (int j = 0; j < layer.out; ++j) {
      const Scalar g = dy(b, j);
      if (g == Scalar(0)) continue;
      grad.bias[j] += g;
      Scalar* gw = grad.weight.data() + std::size_t(j) * layer.in;
      for (int i = 0; i < layer.in; ++i) gw[i] += g * xr[i];
      if (dx != nullptr) {
        const Scalar* w = layer.weight.data() + std::size_t(j) * layer.in;
        Scalar* dxr = dx->row(b).data();
        for (int i = 0; i < layer.in; ++i) dxr[i] += g * w[i];
      }
    }
  }
}

}  // namespace internal

// Intermediate activations kept for the backward pass.
template <typename Scalar>
struct ForwardCache {
  Matrix<Scalar> input;
  Matrix<Scalar> h1;  // post-relu
  Matrix<Scalar> h2;  // post-relu
  Matrix<Scalar> value;      // dueling only, B x 1
  Matrix<Scalar> advantage;  // dueling only, B x A
  Matrix<Scalar> q;
};

template <typename Scalar>
void ForwardWithCache(const Network<Scalar>& net, Matrix<Scalar> input,
                      ForwardCache<Scalar>& cache) {
  if (input.cols != net.input_size) {
    throw std::invalid_argument("input width " + std::to_string(input.cols) +
                                " does not match network input " +
                                std::to_string(net.input_size));
  }
  cache.input = std::move(input);
  internal::AffineForward(net.layers[0], cache.input, cache.h1);
  internal::ReluInPlace(cache.h1);
  internal::AffineForward(net.layers[1], cache.h1, cache.h2);
  internal::ReluInPlace(cache.h2);
  if (net.arch == Architecture::kStandard) {
    internal::AffineForward(net.layers[2], cache.h2, cache.q);
    return;
  }
  internal::AffineForward(net.layers[2], cache.h2, cache.value);
  internal::AffineForward(net.layers[3], cache.h2, cache.advantage);
  const int batch = cache.input.rows;
  const int actions = net.n_actions;
  cache.q = Matrix<Scalar>(batch, actions);
  for (int b = 0; b < batch; ++b) {
    Scalar mean = 0;
    for (int a = 0; a < actions; ++a) mean += cache.advantage(b, a);
    mean /= Scalar(actions);
    for (int a = 0; a < actions; ++a) {
      cache.q(b, a) = cache.value(b, 0) + cache.advantage(b, a) - mean;
    }
  }
}

// Q-values for a batch of observations (B x input_size) -> B x n_actions.
template <typename Scalar>
Matrix<Scalar> Forward(const Network<Scalar>& net, Matrix<Scalar> input) {
  ForwardCache<Scalar> cache;
  ForwardWithCache(net, std::move(input), cache);
  return std::move(cache.q);
}

template <typename Scalar>
std::vector<Scalar> ForwardOne(const Network<Scalar>& net,
                               std::span<const Scalar> obs) {
  Matrix<Scalar> x(1, static_cast<int>(obs.size()));
  std::copy(obs.begin(), obs.end(), x.data.begin());
  return std::move(Forward(net, std::move(x)).data);
}

// Minibatch for the Q-regression loss.
template <typename Scalar>
struct Batch {
  Matrix<Scalar> inputs;      // B x input_size
  std::vector<int> actions;   // B
  std::vector<Scalar> targets;  // B

  int size() const { return inputs.rows; }

  void Validate(int n_actions) const {
    const auto b = static_cast<std::size_t>(inputs.rows);
    if (actions.size() != b || targets.size() != b) {
      throw std::invalid_argument("batch fields have inconsistent sizes");
    }
    for (int a : actions) {
      if (a < 0 || a >= n_actions) {
        throw std::invalid_argument("batch action index out of range");
      }
    }
  }
};

template <typename Scalar>
struct LossAndGradients {
  Scalar loss = 0;
  Network<Scalar> grads;
};

// Loss = (1/B) sum_i (Q(s_i, a_i) - y_i)^2. Only the taken action's output
// receives gradient.
template <typename Scalar>
Scalar Loss(const Network<Scalar>& net, const Batch<Scalar>& batch) {
  batch.Validate(net.n_actions);
  auto q = Forward(net, batch.inputs);
  Scalar loss = 0;
  for (int b = 0; b < batch.size(); ++b) {
    const Scalar d = q(b, batch.actions[b]) - batch.targets[b];
    loss += d * d;
  }
  return loss / Scalar(batch.size());
}

template <typename Scalar>
LossAndGradients<Scalar> Backward(const Network<Scalar>& net,
                                  const Batch<Scalar>& batch) {
  batch.Validate(net.n_actions);
  ForwardCache<Scalar> cache;
  ForwardWithCache(net, batch.inputs, cache);
  const int n = batch.size();
  const int actions = net.n_actions;

  LossAndGradients<Scalar> out{Scalar(0), ZerosLike(net)};
  Matrix<Scalar> dq(n, actions);
  for (int b = 0; b < n; ++b) {
    const int a = batch.actions[b];
    const Scalar d = cache.q(b, a) - batch.targets[b];
    out.loss += d * d;
    dq(b, a) = Scalar(2) * d / Scalar(n);
  }
  out.loss /= Scalar(n);

  Matrix<Scalar> dh2;
  if (net.arch == Architecture::kStandard) {
    internal::AffineBackward(net.layers[2], cache.h2, dq, out.grads.layers[2],
                             &dh2);
  } else {
    Matrix<Scalar> dv(n, 1);
    Matrix<Scalar> da(n, actions);
    for (int b = 0; b < n; ++b) {
      Scalar sum = 0;
      for (int a = 0; a < actions; ++a) sum += dq(b, a);
      dv(b, 0) = sum;
      for (int a = 0; a < actions; ++a) {
        da(b, a) = dq(b, a) - sum / Scalar(actions);
      }
    }
    Matrix<Scalar> dh2_value;
    internal::AffineBackward(net.layers[2], cache.h2, dv, out.grads.layers[2],
                             &dh2_value);
    internal::AffineBackward(net.layers[3], cache.h2, da, out.grads.layers[3],
                             &dh2);
    for (std::size_t i = 0; i < dh2.data.size(); ++i) {
      dh2.data[i] += dh2_value.data[i];
    }
  }
  for (std::size_t i = 0; i < dh2.data.size(); ++i) {
    if (cache.h2.data[i] <= Scalar(0)) dh2.data[i] = 0;
  }
  Matrix<Scalar> dh1;
  internal::AffineBackward(net.layers[1], cache.h1, dh2, out.grads.layers[1],
                           &dh1);
  for (std::size_t i = 0; i < dh1.data.size(); ++i) {
    if (cache.h1.data[i] <= Scalar(0)) dh1.data[i] = 0;
  }
  internal::AffineBackward(net.layers[0], cache.input, dh1,
                           out.grads.layers[0], static_cast<Matrix<Scalar>*>(nullptr));
  return out;
}

struct AdamHyperParams {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const AdamHyperParams&,
                         const AdamHyperParams&) = default;
};

template <typename Scalar>
struct AdamState {
  AdamHyperParams hp;
  std::int64_t step = 0;
  Network<Scalar> m;
  Network<Scalar> v;

  AdamState() = default;
  AdamState(const Network<Scalar>& like, AdamHyperParams params)
      : hp(params), m(ZerosLike(like)), v(ZerosLike(like)) {}

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

template <typename Scalar>
bool SameShape(const Network<Scalar>& a, const Network<Scalar>& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (a.layers[i].in != b.layers[i].in ||
        a.layers[i].out != b.layers[i].out) {
      return false;
    }
  }
  return true;
}

// Bias-corrected Adam update, in place.
template <typename Scalar>
void AdamStep(Network<Scalar>& params, const Network<Scalar>& grads,
              AdamState<Scalar>& state) {
  if (!SameShape(params, grads) || !SameShape(params, state.m) ||
      !SameShape(params, state.v)) {
    throw std::invalid_argument("adam: parameter/gradient shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const Scalar b1 = static_cast<Scalar>(state.hp.beta1);
  const Scalar b2 = static_cast<Scalar>(state.hp.beta2);
  const Scalar c1 = static_cast<Scalar>(1.0 - std::pow(state.hp.beta1, t));
  const Scalar c2 = static_cast<Scalar>(1.0 - std::pow(state.hp.beta2, t));
  const Scalar lr = static_cast<Scalar>(state.hp.lr);
  const Scalar eps = static_cast<Scalar>(state.hp.epsilon);

  auto update = [&](std::vector<Scalar>& p, const std::vector<Scalar>& g,
                    std::vector<Scalar>& m, std::vector<Scalar>& v) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (Scalar(1) - b1) * g[i];
      v[i] = b2 * v[i] + (Scalar(1) - b2) * g[i] * g[i];
      const Scalar m_hat = m[i] / c1;
      const Scalar v_hat = v[i] / c2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weight, grads.layers[l].weight,
           state.m.layers[l].weight, state.v.layers[l].weight);
    update(params.layers[l].bias, grads.layers[l].bias,
           state.m.layers[l].bias, state.v.layers[l].bias);
  }
}

template <typename Scalar>
bool AllFinite(const Network<Scalar>& net) {
  bool ok = true;
  net.ForEachParameterArray([&](std::span<const Scalar> xs) {
    for (Scalar x : xs) ok = ok && std::isfinite(x);
  });
  return ok;
}

// FNV-1a over the raw parameter bytes; used to detect any parameter change.
template <typename Scalar>
std::uint64_t ParameterHash(const Network<Scalar>& net) {
  std::uint64_t h = 1469598103934665603ULL;
  net.ForEachParameterArray([&](std::span<const Scalar> xs) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(xs.data());
    for (std::size_t i = 0; i < xs.size_bytes(); ++i) {
      h = (h ^ bytes[i]) * 1099511628211ULL;
    }
  });
  return h;
}

}  // namespace sls

#endif  // SLS_NEURAL_HPP_
