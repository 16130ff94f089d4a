#ifndef RBC_NN_MODELS_H_
#define RBC_NN_MODELS_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rbc/nn/layers.h"

namespace rbc::nn {

struct NetworkConfig {
  int encoder_layers = 5;
  int encoder_filters = 64;
  int trunk_layers = 10;
  int trunk_filters = 128;  // also the encoders' output channels
  int embedding_dim = 512;
  double margin = 1.0;

  static NetworkConfig Paper() { return {}; }
  // Desk-scale preset: 2 encoder layers of 8 filters, 3 trunk layers of 16
  // filters, 32-dimensional embedding.
  static NetworkConfig Desk() { return {2, 8, 3, 16, 32, 1.0}; }
  static NetworkConfig FromPreset(const std::string& name) {
    if (name == "paper") return Paper();
    if (name == "desk") return Desk();
    throw InvalidInput("unknown network preset '" + name + "' (paper|desk)");
  }

  void Validate() const {
    if (encoder_layers < 1 || encoder_filters < 1 || trunk_layers < 1 ||
        trunk_filters < 1 || embedding_dim < 1 || !(margin > 0)) {
      throw InvalidInput("network config values must be positive");
    }
  }
  bool operator==(const NetworkConfig&) const = default;
};

// Plain ELU conv stack: in -> filters -> ... -> out channels.
template <typename T>
class Encoder {
 public:
  struct Cache {
    std::vector<typename Conv2d<T>::Cache> conv;
    std::vector<Matrix<T>> act;
  };

  Encoder() = default;
  Encoder(const std::string& name, int in_channels, int layers, int filters,
          int out_channels) {
    for (int i = 0; i < layers; ++i) {
      const int in = i == 0 ? in_channels : filters;
      const int out = i == layers - 1 ? out_channels : filters;
      convs_.emplace_back(name + ".conv" + std::to_string(i), in, out, 3);
    }
  }

  template <typename Rng>
  void Init(Rng& rng) {
    for (auto& c : convs_) c.InitHeUniform(rng);
  }

  int in_channels() const { return convs_.front().in(); }

  Matrix<T> Forward(const SparseBatch& x, Cache* cache) const {
    typename Conv2d<T>::Cache c0;
    Matrix<T> h = Elu<T>(convs_[0].ForwardSparse(x, cache ? &c0 : nullptr));
    if (cache) {
      cache->conv.clear();
      cache->act.clear();
      cache->conv.push_back(std::move(c0));
      cache->act.push_back(h);
    }
    for (size_t i = 1; i < convs_.size(); ++i) {
      typename Conv2d<T>::Cache ci;
      h = Elu<T>(convs_[i].Forward(h, cache ? &ci : nullptr));
      if (cache) {
        cache->conv.push_back(std::move(ci));
        cache->act.push_back(h);
      }
    }
    return h;
  }

  void Backward(const Cache& cache, Matrix<T> grad) {
    for (size_t i = convs_.size(); i-- > 0;) {
      grad = EluBackward<T>(cache.act[i], grad);
      grad = convs_[i].Backward(cache.conv[i], grad);
    }
  }

  void CollectParams(std::vector<Parameter<T>*>& out) {
    for (auto& c : convs_) {
      for (auto* p : c.Params()) out.push_back(p);
    }
  }

 private:
  std::vector<Conv2d<T>> convs_;
};

// Residual ELU conv tower (identity skip every two layers), then a 3x3 and a
// 1x1 conv collapsing to one plane, then a fully-connected output layer.
template <typename T>
class Trunk {
 public:
  struct Cache {
    std::vector<typename Conv2d<T>::Cache> conv;
    std::vector<Matrix<T>> elu_out;  // per tower layer, before the skip add
    typename Conv2d<T>::Cache head3, head1;
    Matrix<T> head3_out, head1_out;
    typename Linear<T>::Cache fc;
    Matrix<T> out;
  };

  Trunk() = default;
  Trunk(const std::string& name, int channels, int layers, int output_dim,
        bool tanh_output)
      : channels_(channels), tanh_output_(tanh_output),
        head3_(name + ".head3", channels, channels, 3),
        head1_(name + ".head1", channels, 1, 1),
        fc_(name + ".fc", 64, output_dim) {
    for (int i = 0; i < layers; ++i) {
      tower_.emplace_back(name + ".conv" + std::to_string(i), channels, channels, 3);
    }
  }

  template <typename Rng>
  void Init(Rng& rng) {
    for (auto& c : tower_) c.InitHeUniform(rng);
    head3_.InitHeUniform(rng);
    head1_.InitHeUniform(rng);
    fc_.InitUniform(rng);
  }

  int channels() const { return channels_; }

  // x: channels x 64N features -> output_dim x N.
  Matrix<T> Forward(const Matrix<T>& x, Cache* cache) const {
    if (cache) {
      cache->conv.assign(tower_.size(), {});
      cache->elu_out.assign(tower_.size(), {});
    }
    std::vector<Matrix<T>> hs(tower_.size());
    Matrix<T> block_in = x;
    const Matrix<T>* h = &x;
    for (size_t i = 0; i < tower_.size(); ++i) {
      Matrix<T> e = Elu<T>(tower_[i].Forward(*h, cache ? &cache->conv[i] : nullptr));
      if (cache) cache->elu_out[i] = e;
      if (i % 2 == 1) {
        hs[i] = SkipAdd<T>(block_in, e);
        block_in = hs[i];
      } else {
        hs[i] = std::move(e);
      }
      h = &hs[i];
    }
    Matrix<T> z3 = Elu<T>(head3_.Forward(*h, cache ? &cache->head3 : nullptr));
    Matrix<T> z1 = Elu<T>(head1_.Forward(z3, cache ? &cache->head1 : nullptr));
    Matrix<T> o = fc_.Forward(Flatten<T>(z1, 64), cache ? &cache->fc : nullptr);
    if (tanh_output_) o = Tanh<T>(o);
    if (cache) {
      cache->head3_out = std::move(z3);
      cache->head1_out = std::move(z1);
      cache->out = o;
    }
    return o;
  }

  Matrix<T> Backward(const Cache& cache, const Matrix<T>& dy) {
    Matrix<T> g = tanh_output_ ? TanhBackward<T>(cache.out, dy) : dy;
    g = fc_.Backward(cache.fc, g);
    g = Unflatten<T>(g, 1, 64);
    g = head1_.Backward(cache.head1, EluBackward<T>(cache.head1_out, g));
    g = head3_.Backward(cache.head3, EluBackward<T>(cache.head3_out, g));

    // grads[i + 1] is the gradient w.r.t. h_i; grads[0] w.r.t. the input.
    const size_t n = tower_.size();
    std::vector<Matrix<T>> grads(n + 1);
    grads[n] = std::move(g);
    for (size_t i = n; i-- > 0;) {
      const Matrix<T>& gh = grads[i + 1];
      if (i % 2 == 1) {
        // h_i = e_i + h_{i-2}; h_{-1} is the input.
        AddTo(grads[i - 1], gh);
      }
      Matrix<T> ge = EluBackward<T>(cache.elu_out[i], gh);
      AddTo(grads[i], tower_[i].Backward(cache.conv[i], ge));
    }
    return grads[0];
  }

  void CollectParams(std::vector<Parameter<T>*>& out) {
    for (auto& c : tower_) {
      for (auto* p : c.Params()) out.push_back(p);
    }
    for (auto* p : head3_.Params()) out.push_back(p);
    for (auto* p : head1_.Params()) out.push_back(p);
    for (auto* p : fc_.Params()) out.push_back(p);
  }

 private:
  static void AddTo(Matrix<T>& acc, const Matrix<T>& g) {
    if (acc.size() == 0) {
      acc = g;
    } else {
      acc += g;
    }
  }

  int channels_ = 0;
  bool tanh_output_ = true;
  std::vector<Conv2d<T>> tower_;
  Conv2d<T> head3_, head1_;
  Linear<T> fc_;
};

// Two encoders feeding one shared trunk; embeddings lie in (-1, 1)^D.
template <typename T>
class SiameseNet {
 public:
  SiameseNet() = default;
  SiameseNet(const NetworkConfig& cfg, int history_channels, int board_channels)
      : history_encoder(std::string("history_encoder"), history_channels,
                        cfg.encoder_layers, cfg.encoder_filters, cfg.trunk_filters),
        board_encoder(std::string("board_encoder"), board_channels,
                      cfg.encoder_layers, cfg.encoder_filters, cfg.trunk_filters),
        trunk(std::string("trunk"), cfg.trunk_filters, cfg.trunk_layers,
              cfg.embedding_dim, true) {
    cfg.Validate();
  }

  void Init(uint64_t seed) {
    std::mt19937_64 rng(seed);
    history_encoder.Init(rng);
    board_encoder.Init(rng);
    trunk.Init(rng);
  }

  Matrix<T> EmbedHistories(const SparseBatch& x) const {
    return trunk.Forward(history_encoder.Forward(x, nullptr), nullptr);
  }
  Matrix<T> EmbedBoards(const SparseBatch& x) const {
    return trunk.Forward(board_encoder.Forward(x, nullptr), nullptr);
  }

  std::vector<Parameter<T>*> Params() {
    std::vector<Parameter<T>*> out;
    history_encoder.CollectParams(out);
    board_encoder.CollectParams(out);
    trunk.CollectParams(out);
    return out;
  }

  Encoder<T> history_encoder;
  Encoder<T> board_encoder;
  Trunk<T> trunk;
};

// Binary classifier over one concatenated (history, board) stack; outputs a
// logit per sample.
template <typename T>
class CnnNet {
 public:
  CnnNet() = default;
  CnnNet(const NetworkConfig& cfg, int pair_channels)
      : encoder(std::string("encoder"), pair_channels, cfg.encoder_layers,
                cfg.encoder_filters, cfg.trunk_filters),
        trunk(std::string("trunk"), cfg.trunk_filters, cfg.trunk_layers, 1, false) {
    cfg.Validate();
  }

  void Init(uint64_t seed) {
    std::mt19937_64 rng(seed);
    encoder.Init(rng);
    trunk.Init(rng);
  }

  Matrix<T> Logits(const SparseBatch& x) const {
    return trunk.Forward(encoder.Forward(x, nullptr), nullptr);
  }

  std::vector<Parameter<T>*> Params() {
    std::vector<Parameter<T>*> out;
    encoder.CollectParams(out);
    trunk.CollectParams(out);
    return out;
  }

  Encoder<T> encoder;
  Trunk<T> trunk;
};

}  // namespace rbc::nn

#endif  // RBC_NN_MODELS_H_
