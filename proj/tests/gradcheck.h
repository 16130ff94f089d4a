#ifndef RBC_TESTS_GRADCHECK_H_
#define RBC_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rbc/encoding.h"
#include "rbc/model.h"
#include "rbc/nn/layers.h"
#include "rbc/nn/models.h"
#include "rbc/nn/triplet.h"
#include "test_util.h"

// Central finite-difference checks in double precision. Each check returns
// the largest relative error over its probes.
namespace gradcheck {

using MatrixD = rbc::nn::Matrix<double>;
using VectorD = Eigen::VectorXd;

inline constexpr double kStep = 1e-5;
inline constexpr double kTolerance = 1e-4;
inline constexpr int kProbes = 20;

inline MatrixD RandomMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0, 1);
  MatrixD m(rows, cols);
  for (int i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

inline double RelError(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

// Probes `kProbes` random entries of `target` against `grad`.
inline double CheckEntries(double* target, const double* grad, int size,
                           const std::function<double()>& loss, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, size - 1);
  double worst = 0;
  for (int k = 0; k < kProbes; ++k) {
    const int i = pick(rng);
    const double saved = target[i];
    target[i] = saved + kStep;
    const double up = loss();
    target[i] = saved - kStep;
    const double down = loss();
    target[i] = saved;
    worst = std::max(worst, RelError(grad[i], (up - down) / (2 * kStep)));
  }
  return worst;
}

inline double CheckParams(const std::vector<rbc::nn::Parameter<double>*>& params,
                          const std::function<double()>& loss, std::mt19937_64& rng) {
  double worst = 0;
  for (auto* p : params) {
    worst = std::max(worst, CheckEntries(p->value.data(), p->grad.data(),
                                         static_cast<int>(p->value.size()), loss, rng));
  }
  return worst;
}

inline void ZeroGrads(const std::vector<rbc::nn::Parameter<double>*>& params) {
  for (auto* p : params) p->ZeroGrad();
}

inline double Dot(const MatrixD& a, const MatrixD& b) { return a.cwiseProduct(b).sum(); }

inline rbc::nn::SparseBatch RandomSparse(int channels, int samples, double density,
                                         std::mt19937_64& rng) {
  std::bernoulli_distribution on(density);
  rbc::nn::SparseBatch x{channels, 64, {}};
  for (int n = 0; n < samples; ++n) {
    std::vector<int> active;
    for (int i = 0; i < channels * 64; ++i) {
      if (on(rng)) active.push_back(i);
    }
    x.active.push_back(active);
  }
  return x;
}

// Active indices of a real 12-half-turn history.
inline std::vector<int> History(uint64_t seed, rbc::Color player) {
  const rbc::GameRecord game = testutil::ShortRandomGame(seed, 12);
  const rbc::ObservationHistory h = game.History(player);
  return rbc::ActiveIndices(
      rbc::EncodeHistory(rbc::AnchorHistory(h, h.turns.size() - 1), rbc::Roster()));
}

inline double Conv(int kernel, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  rbc::nn::Conv2d<double> conv("conv", 4, 3, kernel, 5, 5);
  conv.InitHeUniform(rng);
  conv.bias.value = RandomMatrix(3, 1, rng);
  MatrixD x = RandomMatrix(4, 25 * samples, rng);
  const MatrixD r = RandomMatrix(3, 25 * samples, rng);
  auto loss = [&] { return Dot(conv.Forward(x, nullptr), r); };
  rbc::nn::Conv2d<double>::Cache cache;
  conv.Forward(x, &cache);
  ZeroGrads(conv.Params());
  const MatrixD dx = conv.Backward(cache, r);
  return std::max(CheckEntries(x.data(), dx.data(), static_cast<int>(x.size()), loss, rng),
                  CheckParams(conv.Params(), loss, rng));
}

inline double Conv3x3() { return Conv(3, 2, 1); }
inline double Conv1x1() { return Conv(1, 1, 2); }

inline double Linear() {
  std::mt19937_64 rng(4);
  rbc::nn::Linear<double> fc("fc", 6, 4);
  fc.InitUniform(rng);
  MatrixD x = RandomMatrix(6, 3, rng);
  const MatrixD r = RandomMatrix(4, 3, rng);
  auto loss = [&] { return Dot(fc.Forward(x, nullptr), r); };
  rbc::nn::Linear<double>::Cache cache;
  fc.Forward(x, &cache);
  ZeroGrads(fc.Params());
  const MatrixD dx = fc.Backward(cache, r);
  return std::max(CheckEntries(x.data(), dx.data(), static_cast<int>(x.size()), loss, rng),
                  CheckParams(fc.Params(), loss, rng));
}

inline double Elu() {
  std::mt19937_64 rng(5);
  MatrixD x = RandomMatrix(4, 25, rng);
  const MatrixD r = RandomMatrix(4, 25, rng);
  auto loss = [&] { return Dot(rbc::nn::Elu<double>(x), r); };
  const MatrixD d = rbc::nn::EluBackward<double>(rbc::nn::Elu<double>(x), r);
  return CheckEntries(x.data(), d.data(), static_cast<int>(x.size()), loss, rng);
}

inline double Tanh() {
  std::mt19937_64 rng(6);
  MatrixD x = RandomMatrix(4, 25, rng);
  const MatrixD r = RandomMatrix(4, 25, rng);
  auto loss = [&] { return Dot(rbc::nn::Tanh<double>(x), r); };
  const MatrixD d = rbc::nn::TanhBackward<double>(rbc::nn::Tanh<double>(x), r);
  return CheckEntries(x.data(), d.data(), static_cast<int>(x.size()), loss, rng);
}

inline double Trunk() {
  std::mt19937_64 rng(7);
  rbc::nn::Trunk<double> trunk("trunk", 3, 3, 5, true);
  trunk.Init(rng);
  MatrixD x = RandomMatrix(3, 64 * 2, rng);
  const MatrixD r = RandomMatrix(5, 2, rng);
  auto loss = [&] { return Dot(trunk.Forward(x, nullptr), r); };
  rbc::nn::Trunk<double>::Cache cache;
  trunk.Forward(x, &cache);
  std::vector<rbc::nn::Parameter<double>*> params;
  trunk.CollectParams(params);
  ZeroGrads(params);
  const MatrixD dx = trunk.Backward(cache, r);
  return std::max(CheckEntries(x.data(), dx.data(), static_cast<int>(x.size()), loss, rng),
                  CheckParams(params, loss, rng));
}

inline double Encoder() {
  std::mt19937_64 rng(8);
  rbc::nn::Encoder<double> enc("enc", 6, 3, 4, 5);
  enc.Init(rng);
  const rbc::nn::SparseBatch x = RandomSparse(6, 2, 0.3, rng);
  const MatrixD r = RandomMatrix(5, 64 * 2, rng);
  auto loss = [&] { return Dot(enc.Forward(x, nullptr), r); };
  rbc::nn::Encoder<double>::Cache cache;
  enc.Forward(x, &cache);
  std::vector<rbc::nn::Parameter<double>*> params;
  enc.CollectParams(params);
  ZeroGrads(params);
  enc.Backward(cache, r);
  return CheckParams(params, loss, rng);
}

// The whole desk Siamese network under the triplet loss, on a real history
// and two real boards.
inline double ComposedTriplet() {
  using rbc::nn::Encoder;
  using rbc::nn::Trunk;
  rbc::nn::SiameseNet<double> net(rbc::NetworkConfig::Desk(), rbc::kHistoryChannels,
                                  rbc::kBoardChannels);
  net.Init(11);
  const rbc::nn::SparseBatch hist =
      rbc::MakeBatch(rbc::kHistoryChannels, {History(3, rbc::Color::kBlack)});
  const rbc::GameRecord game = testutil::ShortRandomGame(4, 12);
  const rbc::nn::SparseBatch boards =
      rbc::BoardBatch({game.turns[5].board_after, game.turns[3].board_after});
  const double margin = 1.0;
  auto forward = [&](Encoder<double>::Cache* hc, Trunk<double>::Cache* ht,
                     Encoder<double>::Cache* bc, Trunk<double>::Cache* bt) {
    const MatrixD a = net.trunk.Forward(net.history_encoder.Forward(hist, hc), ht);
    const MatrixD b = net.trunk.Forward(net.board_encoder.Forward(boards, bc), bt);
    return std::make_pair(a, b);
  };
  auto loss = [&] {
    const auto [a, b] = forward(nullptr, nullptr, nullptr, nullptr);
    return rbc::nn::TripletLoss<double>(VectorD(a.col(0)), VectorD(b.col(0)),
                                        VectorD(b.col(1)), margin)
        .loss;
  };
  Encoder<double>::Cache hc, bc;
  Trunk<double>::Cache ht, bt;
  const auto [a, b] = forward(&hc, &ht, &bc, &bt);
  VectorD ga, gp, gn;
  const auto terms = rbc::nn::TripletLoss<double>(VectorD(a.col(0)), VectorD(b.col(0)),
                                                  VectorD(b.col(1)), margin, &ga, &gp, &gn);
  // A zero loss has a zero gradient and checks nothing.
  if (!(terms.loss > 0.0)) return INFINITY;
  auto params = net.Params();
  ZeroGrads(params);
  MatrixD grad_b(b.rows(), 2);
  grad_b.col(0) = gp;
  grad_b.col(1) = gn;
  net.board_encoder.Backward(bc, net.trunk.Backward(bt, grad_b));
  net.history_encoder.Backward(hc, net.trunk.Backward(ht, MatrixD(ga)));
  std::mt19937_64 rng(12);
  return CheckParams(params, loss, rng);
}

inline double CnnBinaryCrossEntropy() {
  rbc::nn::CnnNet<double> net(rbc::NetworkConfig::Desk(), rbc::kPairChannels);
  net.Init(13);
  std::vector<int> active = History(5, rbc::Color::kWhite);
  for (int i : rbc::ActiveIndices(rbc::EncodeBoard(rbc::Board::Initial()))) {
    active.push_back(rbc::kHistoryChannels * 64 + i);
  }
  const rbc::nn::SparseBatch x = rbc::MakeBatch(rbc::kPairChannels, {active});
  auto loss = [&] { return rbc::nn::BceWithLogit<double>(net.Logits(x)(0, 0), 1.0, nullptr); };
  rbc::nn::Encoder<double>::Cache ec;
  rbc::nn::Trunk<double>::Cache tc;
  const MatrixD z = net.trunk.Forward(net.encoder.Forward(x, &ec), &tc);
  double dz = 0;
  rbc::nn::BceWithLogit<double>(z(0, 0), 1.0, &dz);
  auto params = net.Params();
  ZeroGrads(params);
  net.encoder.Backward(ec, net.trunk.Backward(tc, MatrixD::Constant(1, 1, dz)));
  std::mt19937_64 rng(14);
  return CheckParams(params, loss, rng);
}

// Every check by name.
inline std::vector<std::pair<std::string, std::function<double()>>> AllChecks() {
  return {{"conv3x3", Conv3x3},        {"conv1x1", Conv1x1},
          {"linear", Linear},          {"elu", Elu},
          {"tanh", Tanh},              {"trunk", Trunk},
          {"encoder", Encoder},        {"siamese_triplet", ComposedTriplet},
          {"cnn_bce", CnnBinaryCrossEntropy}};
}

}  // namespace gradcheck

#endif  // RBC_TESTS_GRADCHECK_H_
