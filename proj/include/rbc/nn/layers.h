#ifndef RBC_NN_LAYERS_H_
#define RBC_NN_LAYERS_H_

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rbc/errors.h"

namespace rbc::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;

  Parameter() = default;
  Parameter(std::string n, int rows, int cols)
      : name(std::move(n)),
        value(Matrix<T>::Zero(rows, cols)),
        grad(Matrix<T>::Zero(rows, cols)) {}
  void ZeroGrad() { grad.setZero(); }
};

// A batch of binary inputs: for each sample, the flat indices
// (channel * height * width + position) of its ones.
struct SparseBatch {
  int channels = 0;
  int positions = 64;
  std::vector<std::vector<int>> active;

  int samples() const { return static_cast<int>(active.size()); }
};

// Activations are stored channel-major: rows are channels, and column
// n * positions + p holds position p of sample n.
template <typename T>
Matrix<T> DenseFromSparse(const SparseBatch& x) {
  Matrix<T> out = Matrix<T>::Zero(x.channels, x.positions * x.samples());
  for (int n = 0; n < x.samples(); ++n) {
    for (int idx : x.active[n]) {
      out(idx / x.positions, n * x.positions + idx % x.positions) = T(1);
    }
  }
  return out;
}

// 2-D convolution, stride 1, kernel 1x1 or 3x3 with zero padding that keeps
// the spatial size.
template <typename T>
class Conv2d {
 public:
  struct Cache {
    Matrix<T> cols;
    Eigen::SparseMatrix<T> sparse_cols;
    bool sparse = false;
    int samples = 0;
  };

  Conv2d() = default;
  Conv2d(const std::string& name, int in, int out, int kernel, int height = 8,
         int width = 8)
      : in_(in), out_(out), kernel_(kernel), height_(height), width_(width),
        weight(name + ".weight", out, in * kernel * kernel),
        bias(name + ".bias", out, 1) {
    if (kernel != 1 && kernel != 3) throw InvalidInput("conv kernel must be 1 or 3");
  }

  template <typename Rng>
  void InitHeUniform(Rng& rng) {
    const double bound = std::sqrt(6.0 / (in_ * kernel_ * kernel_));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int i = 0; i < weight.value.size(); ++i) weight.value.data()[i] = T(dist(rng));
    bias.value.setZero();
  }

  int in() const { return in_; }
  int out() const { return out_; }
  int positions() const { return height_ * width_; }

  Matrix<T> Forward(const Matrix<T>& x, Cache* cache) const {
    CheckInput(x.rows(), x.cols());
    const int samples = static_cast<int>(x.cols()) / positions();
    Matrix<T> y;
    if (kernel_ == 1) {
      y = weight.value * x;
      if (cache) cache->cols = x;
    } else {
      Matrix<T> cols = Im2Col(x, samples);
      y = weight.value * cols;
      if (cache) cache->cols = std::move(cols);
    }
    y.colwise() += bias.value.col(0);
    if (cache) {
      cache->sparse = false;
      cache->samples = samples;
    }
    return y;
  }

  // Input gradients are not produced for sparse (data) inputs.
  Matrix<T> ForwardSparse(const SparseBatch& x, Cache* cache) const {
    if (x.channels != in_ || x.positions != positions()) {
      throw InvalidInput("conv input has " + std::to_string(x.channels) +
                         " channels, expected " + std::to_string(in_));
    }
    Eigen::SparseMatrix<T> cols = SparseIm2Col(x);
    Matrix<T> y = weight.value * cols;
    y.colwise() += bias.value.col(0);
    if (cache) {
      cache->sparse = true;
      cache->samples = x.samples();
      cache->sparse_cols = std::move(cols);
    }
    return y;
  }

  // Accumulates parameter gradients; returns the input gradient (empty for
  // sparse inputs).
  Matrix<T> Backward(const Cache& cache, const Matrix<T>& dy) {
    bias.grad.col(0) += dy.rowwise().sum();
    if (cache.sparse) {
      weight.grad += dy * cache.sparse_cols.transpose();
      return Matrix<T>();
    }
    weight.grad += dy * cache.cols.transpose();
    Matrix<T> dcols = weight.value.transpose() * dy;
    if (kernel_ == 1) return dcols;
    return Col2Im(dcols, cache.samples);
  }

  std::vector<Parameter<T>*> Params() { return {&weight, &bias}; }

 private:
  void CheckInput(Eigen::Index rows, Eigen::Index cols) const {
    if (rows != in_ || cols % positions() != 0) {
      throw InvalidInput("conv input shape mismatch: " + std::to_string(rows) +
                         " rows, expected " + std::to_string(in_));
    }
  }

  // Row c * 9 + k of the column matrix holds input channel c shifted by
  // kernel offset k = ky * 3 + kx.
  Matrix<T> Im2Col(const Matrix<T>& x, int samples) const {
    const int hw = positions();
    Matrix<T> cols = Matrix<T>::Zero(in_ * 9, hw * samples);
    for (int n = 0; n < samples; ++n) {
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const int k = ky * 3 + kx;
          for (int y = 0; y < height_; ++y) {
            const int sy = y + ky - 1;
            if (sy < 0 || sy >= height_) continue;
            for (int xx = 0; xx < width_; ++xx) {
              const int sx = xx + kx - 1;
              if (sx < 0 || sx >= width_) continue;
              const int dst = n * hw + y * width_ + xx;
              const int src = n * hw + sy * width_ + sx;
              for (int c = 0; c < in_; ++c) cols(c * 9 + k, dst) = x(c, src);
            }
          }
        }
      }
    }
    return cols;
  }

  Matrix<T> Col2Im(const Matrix<T>& dcols, int samples) const {
    const int hw = positions();
    Matrix<T> dx = Matrix<T>::Zero(in_, hw * samples);
    for (int n = 0; n < samples; ++n) {
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const int k = ky * 3 + kx;
          for (int y = 0; y < height_; ++y) {
            const int sy = y + ky - 1;
            if (sy < 0 || sy >= height_) continue;
            for (int xx = 0; xx < width_; ++xx) {
              const int sx = xx + kx - 1;
              if (sx < 0 || sx >= width_) continue;
              const int dst = n * hw + y * width_ + xx;
              const int src = n * hw + sy * width_ + sx;
              for (int c = 0; c < in_; ++c) dx(c, src) += dcols(c * 9 + k, dst);
            }
          }
        }
      }
    }
    return dx;
  }

  Eigen::SparseMatrix<T> SparseIm2Col(const SparseBatch& x) const {
    const int hw = positions();
    const int taps = kernel_ * kernel_;
    std::vector<Eigen::Triplet<T>> entries;
    size_t nnz = 0;
    for (const auto& a : x.active) nnz += a.size();
    entries.reserve(nnz * taps);
    for (int n = 0; n < x.samples(); ++n) {
      for (int idx : x.active[n]) {
        const int c = idx / hw, p = idx % hw;
        if (kernel_ == 1) {
          entries.emplace_back(c, n * hw + p, T(1));
          continue;
        }
        const int py = p / width_, px = p % width_;
        // Input p feeds output q through kernel offset (ky, kx) when
        // q + (ky - 1, kx - 1) == p.
        for (int ky = 0; ky < 3; ++ky) {
          const int qy = py - ky + 1;
          if (qy < 0 || qy >= height_) continue;
          for (int kx = 0; kx < 3; ++kx) {
            const int qx = px - kx + 1;
            if (qx < 0 || qx >= width_) continue;
            entries.emplace_back(c * 9 + ky * 3 + kx, n * hw + qy * width_ + qx, T(1));
          }
        }
      }
    }
    Eigen::SparseMatrix<T> cols(in_ * taps, hw * x.samples());
    cols.setFromTriplets(entries.begin(), entries.end());
    return cols;
  }

  int in_ = 0, out_ = 0, kernel_ = 3, height_ = 8, width_ = 8;

 public:
  Parameter<T> weight;
  Parameter<T> bias;
};

// Fully connected layer on column vectors (one column per sample).
template <typename T>
class Linear {
 public:
  struct Cache {
    Matrix<T> x;
  };

  Linear() = default;
  Linear(const std::string& name, int in, int out)
      : weight(name + ".weight", out, in), bias(name + ".bias", out, 1) {}

  template <typename Rng>
  void InitUniform(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(weight.value.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int i = 0; i < weight.value.size(); ++i) weight.value.data()[i] = T(dist(rng));
    for (int i = 0; i < bias.value.size(); ++i) bias.value.data()[i] = T(dist(rng));
  }

  Matrix<T> Forward(const Matrix<T>& x, Cache* cache) const {
    if (x.rows() != weight.value.cols()) {
      throw InvalidInput("linear input shape mismatch");
    }
    Matrix<T> y = weight.value * x;
    y.colwise() += bias.value.col(0);
    if (cache) cache->x = x;
    return y;
  }

  Matrix<T> Backward(const Cache& cache, const Matrix<T>& dy) {
    weight.grad += dy * cache.x.transpose();
    bias.grad.col(0) += dy.rowwise().sum();
    return weight.value.transpose() * dy;
  }

  std::vector<Parameter<T>*> Params() { return {&weight, &bias}; }

  Parameter<T> weight;
  Parameter<T> bias;
};

// Element-wise activations. Backward takes the forward output.
template <typename T>
Matrix<T> Elu(const Matrix<T>& x) {
  return x.unaryExpr([](T v) { return v > T(0) ? v : std::expm1(v); });
}
template <typename T>
Matrix<T> EluBackward(const Matrix<T>& y, const Matrix<T>& dy) {
  return dy.binaryExpr(y, [](T g, T out) { return out > T(0) ? g : g * (out + T(1)); });
}

template <typename T>
Matrix<T> Tanh(const Matrix<T>& x) {
  return x.array().tanh().matrix();
}
template <typename T>
Matrix<T> TanhBackward(const Matrix<T>& y, const Matrix<T>& dy) {
  return (dy.array() * (T(1) - y.array().square())).matrix();
}

// y = x + f(x); the gradient reaches x through both branches.
template <typename T>
Matrix<T> SkipAdd(const Matrix<T>& x, const Matrix<T>& fx) {
  return x + fx;
}

// (channels x positions*N) -> (channels*positions x N), feature index
// c * positions + p.
template <typename T>
Matrix<T> Flatten(const Matrix<T>& x, int positions) {
  const int channels = static_cast<int>(x.rows());
  const int samples = static_cast<int>(x.cols()) / positions;
  Matrix<T> out(channels * positions, samples);
  for (int n = 0; n < samples; ++n) {
    for (int c = 0; c < channels; ++c) {
      for (int p = 0; p < positions; ++p) out(c * positions + p, n) = x(c, n * positions + p);
    }
  }
  return out;
}

template <typename T>
Matrix<T> Unflatten(const Matrix<T>& x, int channels, int positions) {
  const int samples = static_cast<int>(x.cols());
  Matrix<T> out(channels, positions * samples);
  for (int n = 0; n < samples; ++n) {
    for (int c = 0; c < channels; ++c) {
      for (int p = 0; p < positions; ++p) out(c, n * positions + p) = x(c * positions + p, n);
    }
  }
  return out;
}

template <typename T>
T Sigmoid(T z) {
  return z >= T(0) ? T(1) / (T(1) + std::exp(-z)) : std::exp(z) / (T(1) + std::exp(z));
}

// Binary cross-entropy on a logit: softplus(z) - label * z.
template <typename T>
T BceWithLogit(T z, T label, T* dz) {
  const T softplus = z > T(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  if (dz) *dz = Sigmoid(z) - label;
  return softplus - label * z;
}

}  // namespace rbc::nn

#endif  // RBC_NN_LAYERS_H_
