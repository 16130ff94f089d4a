#include "rbc/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "rbc/errors.h"
#include "rbc/nn/triplet.h"

namespace rbc {

namespace {

constexpr size_t kEvalSamples = 32;
constexpr size_t kEvalChunk = 64;

using MatrixF = nn::Matrix<float>;
using VectorF = Eigen::VectorXf;

std::mt19937_64 MakeRng(uint64_t seed, uint64_t a, uint64_t b) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                    static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

std::vector<int> AnchorActive(const TripletRecord& r, const Roster& roster) {
  return ActiveIndices(EncodeHistory(r.Anchor(), roster));
}

std::vector<int> PairActive(const std::vector<int>& history, const Board& board) {
  std::vector<int> a = history;
  for (int idx : ActiveIndices(EncodeBoard(board))) a.push_back(idx + kHistoryChannels * 64);
  return a;
}

std::vector<const TripletRecord*> Usable(const std::vector<TripletRecord>& records) {
  std::vector<const TripletRecord*> out;
  size_t skipped = 0;
  for (const auto& r : records) {
    if (r.negatives.empty()) {
      ++skipped;
      continue;
    }
    out.push_back(&r);
  }
  if (skipped > 0) spdlog::warn("skipped {} records with an empty negative pool", skipped);
  return out;
}

std::vector<MatrixF> Snapshot(const std::vector<nn::Parameter<float>*>& params) {
  std::vector<MatrixF> out;
  for (auto* p : params) out.push_back(p->value);
  return out;
}

void Restore(const std::vector<nn::Parameter<float>*>& params,
             const std::vector<MatrixF>& values) {
  for (size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
}

// One optimizer step over a batch; returns the summed loss.
double SiameseStep(SiameseModel& model, const std::vector<const TripletRecord*>& batch,
                   size_t samples, std::mt19937_64& rng, nn::AdamW<float>& opt) {
  auto& net = model.net();
  const int b = static_cast<int>(batch.size());
  std::vector<std::vector<int>> anchors;
  for (const auto* r : batch) anchors.push_back(AnchorActive(*r, model.roster()));
  nn::Encoder<float>::Cache hist_cache;
  nn::Trunk<float>::Cache anchor_trunk;
  const MatrixF a = net.trunk.Forward(
      net.history_encoder.Forward(MakeBatch(kHistoryChannels, std::move(anchors)), &hist_cache),
      &anchor_trunk);

  // Semi-hard negatives, scored with the current weights.
  std::vector<Board> sampled;
  std::vector<size_t> offsets;
  for (const auto* r : batch) {
    offsets.push_back(sampled.size());
    for (size_t k : SampleIndices(r->negatives.size(), samples, rng)) {
      sampled.push_back(r->negatives[k]);
    }
  }
  offsets.push_back(sampled.size());
  const MatrixF neg = model.EmbedBoards(sampled);
  std::vector<Board> boards;
  for (const auto* r : batch) boards.push_back(r->positive);
  for (int i = 0; i < b; ++i) {
    const auto cols = neg.middleCols(static_cast<Eigen::Index>(offsets[i]),
                                     static_cast<Eigen::Index>(offsets[i + 1] - offsets[i]));
    boards.push_back(sampled[offsets[i] + SemiHardIndex(a.col(i), cols)]);
  }

  nn::Encoder<float>::Cache board_cache;
  nn::Trunk<float>::Cache board_trunk;
  const MatrixF p = net.trunk.Forward(net.board_encoder.Forward(BoardBatch(boards), &board_cache),
                                      &board_trunk);
  MatrixF grad_a(a.rows(), b), grad_p(p.rows(), 2 * b);
  double total = 0;
  const float scale = 1.0f / static_cast<float>(b);
  const float margin = static_cast<float>(model.config().margin);
  for (int i = 0; i < b; ++i) {
    VectorF ga, gp, gn;
    const VectorF av = a.col(i), pv = p.col(i), nv = p.col(b + i);
    total += nn::TripletLoss<float>(av, pv, nv, margin, &ga, &gp, &gn).loss;
    grad_a.col(i) = ga * scale;
    grad_p.col(i) = gp * scale;
    grad_p.col(b + i) = gn * scale;
  }
  opt.ZeroGrad();
  net.board_encoder.Backward(board_cache, net.trunk.Backward(board_trunk, grad_p));
  net.history_encoder.Backward(hist_cache, net.trunk.Backward(anchor_trunk, grad_a));
  opt.Step();
  return total;
}

struct CnnStepResult {
  double loss = 0;
  size_t correct = 0;
};

CnnStepResult CnnStep(CnnModel& model, const std::vector<const TripletRecord*>& batch,
                      std::mt19937_64& rng, nn::AdamW<float>& opt) {
  auto& net = model.net();
  const int b = static_cast<int>(batch.size());
  std::vector<std::vector<int>> active;
  std::vector<float> labels;
  for (const auto* r : batch) {
    const std::vector<int> hist = AnchorActive(*r, model.roster());
    std::uniform_int_distribution<size_t> pick(0, r->negatives.size() - 1);
    active.push_back(PairActive(hist, r->positive));
    labels.push_back(1.0f);
    active.push_back(PairActive(hist, r->negatives[pick(rng)]));
    labels.push_back(0.0f);
  }
  nn::Encoder<float>::Cache enc_cache;
  nn::Trunk<float>::Cache trunk_cache;
  const MatrixF z =
      net.trunk.Forward(net.encoder.Forward(MakeBatch(kPairChannels, std::move(active)), &enc_cache),
                        &trunk_cache);
  CnnStepResult out;
  MatrixF grad(1, 2 * b);
  const float scale = 1.0f / static_cast<float>(2 * b);
  for (int i = 0; i < 2 * b; ++i) {
    float dz = 0;
    out.loss += nn::BceWithLogit<float>(z(0, i), labels[i], &dz);
    grad(0, i) = dz * scale;
    if ((z(0, i) > 0) == (labels[i] > 0.5f)) ++out.correct;
  }
  opt.ZeroGrad();
  net.encoder.Backward(enc_cache, net.trunk.Backward(trunk_cache, grad));
  opt.Step();
  return out;
}

template <typename Model, typename StepFn, typename EvalFn>
TrainResult RunTraining(const std::vector<TripletRecord>& train,
                        const std::vector<TripletRecord>& eval, Model& model,
                        const TrainConfig& config, nn::AdamW<float>* optimizer,
                        const EpochCallback& on_epoch, StepFn step, EvalFn eval_loss) {
  config.Validate();
  const auto records = Usable(train);
  if (records.empty()) throw InvalidInput("training set is empty");
  auto params = model.net().Params();
  nn::AdamW<float> local;
  if (!optimizer) {
    local = nn::AdamW<float>(params, config.Optimizer());
    optimizer = &local;
  }

  TrainResult result;
  result.best_eval_loss = std::numeric_limits<double>::infinity();
  std::vector<MatrixF> best_params;
  int samples = config.initial_samples;
  int stale = 0;
  for (int e = 0; e < config.max_epochs; ++e) {
    const int epoch = model.epochs_trained + 1;
    const auto order = EpochOrder(records.size(), config.seed, static_cast<uint64_t>(epoch));
    auto rng = MakeRng(config.seed, static_cast<uint64_t>(epoch), 1);
    double loss_sum = 0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      std::vector<const TripletRecord*> batch;
      for (size_t k = start; k < end; ++k) batch.push_back(records[order[k]]);
      auto [loss, ok] = step(batch, static_cast<size_t>(samples), rng, *optimizer);
      loss_sum += loss;
      correct += ok;
    }
    model.epochs_trained = epoch;

    EpochStats stats;
    stats.epoch = epoch;
    stats.records = records.size();
    stats.samples = samples;
    stats.train_loss = loss_sum / static_cast<double>(records.size());
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(2 * records.size());
    stats.eval_loss = eval.empty() ? stats.train_loss : eval_loss();
    result.epochs.push_back(stats);
    spdlog::info("epoch {}: train loss {:.6f}, eval loss {:.6f}, x = {}", epoch,
                 stats.train_loss, stats.eval_loss, samples);

    if (stats.eval_loss < result.best_eval_loss) {
      result.best_eval_loss = stats.eval_loss;
      result.best_epoch = epoch;
      stale = 0;
      if (config.restore_best && !eval.empty()) best_params = Snapshot(params);
    } else {
      ++stale;
      samples = std::min(samples * 2, config.max_samples);
    }
    if (on_epoch && !on_epoch(stats)) {
      result.stopped_by_callback = true;
      break;
    }
    if (config.target_loss >= 0 && stats.train_loss < config.target_loss) {
      result.reached_target = true;
      break;
    }
    if (stale >= config.patience) {
      result.early_stopped = true;
      break;
    }
  }
  if (!best_params.empty() && result.best_epoch != model.epochs_trained) {
    spdlog::info("restoring parameters of epoch {}", result.best_epoch);
    Restore(params, best_params);
  }
  return result;
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size < 1) throw InvalidInput("batch_size must be at least 1");
  if (!(learning_rate > 0)) throw InvalidInput("learning_rate must be positive");
  if (initial_samples < 1 || max_samples < initial_samples) {
    throw InvalidInput("negative sample counts must satisfy 1 <= initial <= max");
  }
  if (patience < 1 || max_epochs < 1) throw InvalidInput("patience and max_epochs must be >= 1");
}

size_t SemiHardIndex(const Eigen::Ref<const Eigen::VectorXf>& anchor,
                     const Eigen::Ref<const nn::Matrix<float>>& negatives) {
  if (negatives.cols() == 0 || negatives.rows() != anchor.size()) {
    throw InvalidInput("semi-hard pick needs at least one negative of the anchor's size");
  }
  std::vector<float> d;
  for (Eigen::Index k = 0; k < negatives.cols(); ++k) {
    d.push_back((anchor - negatives.col(k)).norm());
  }
  return nn::NearestIndex(d);
}

std::vector<size_t> SampleIndices(size_t n, size_t k, std::mt19937_64& rng) {
  std::vector<size_t> out;
  if (k >= n) {
    for (size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  // Floyd's algorithm, then sorted for a stable order.
  std::unordered_set<size_t> chosen;
  for (size_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<size_t> dist(0, j);
    const size_t t = dist(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

TrainResult TrainSiamese(const std::vector<TripletRecord>& train,
                         const std::vector<TripletRecord>& eval, SiameseModel& model,
                         const TrainConfig& config, nn::AdamW<float>* optimizer,
                         const EpochCallback& on_epoch) {
  auto step = [&](const std::vector<const TripletRecord*>& batch, size_t samples,
                  std::mt19937_64& rng, nn::AdamW<float>& opt) {
    return std::pair<double, size_t>(SiameseStep(model, batch, samples, rng, opt), 0);
  };
  auto eval_loss = [&] { return SiameseEvalLoss(model, eval, config.seed); };
  return RunTraining(train, eval, model, config, optimizer, on_epoch, step, eval_loss);
}

TrainResult TrainCnn(const std::vector<TripletRecord>& train,
                     const std::vector<TripletRecord>& eval, CnnModel& model,
                     const TrainConfig& config, nn::AdamW<float>* optimizer,
                     const EpochCallback& on_epoch) {
  auto step = [&](const std::vector<const TripletRecord*>& batch, size_t,
                  std::mt19937_64& rng, nn::AdamW<float>& opt) {
    auto r = CnnStep(model, batch, rng, opt);
    return std::pair<double, size_t>(r.loss / 2.0, r.correct);
  };
  auto eval_loss = [&] { return CnnEvalLoss(model, eval, config.seed); };
  return RunTraining(train, eval, model, config, optimizer, on_epoch, step, eval_loss);
}

double SiameseEvalLoss(const SiameseModel& model, const std::vector<TripletRecord>& records,
                       uint64_t seed) {
  const auto usable = Usable(records);
  if (usable.empty()) return 0.0;
  const float margin = static_cast<float>(model.config().margin);
  double total = 0;
  for (size_t start = 0; start < usable.size(); start += kEvalChunk) {
    const size_t end = std::min(usable.size(), start + kEvalChunk);
    std::vector<std::vector<int>> anchors;
    std::vector<Board> boards;
    std::vector<size_t> offsets;
    for (size_t i = start; i < end; ++i) {
      const TripletRecord& r = *usable[i];
      anchors.push_back(AnchorActive(r, model.roster()));
      offsets.push_back(boards.size());
      boards.push_back(r.positive);
      auto rng = MakeRng(seed, i, 2);
      for (size_t k : SampleIndices(r.negatives.size(), kEvalSamples, rng)) {
        boards.push_back(r.negatives[k]);
      }
    }
    offsets.push_back(boards.size());
    const MatrixF a = model.net().EmbedHistories(MakeBatch(kHistoryChannels, std::move(anchors)));
    const MatrixF e = model.EmbedBoards(boards);
    for (size_t i = 0; i + 1 < offsets.size(); ++i) {
      const VectorF av = a.col(static_cast<Eigen::Index>(i));
      const VectorF pv = e.col(static_cast<Eigen::Index>(offsets[i]));
      const auto cols = e.middleCols(static_cast<Eigen::Index>(offsets[i] + 1),
                                     static_cast<Eigen::Index>(offsets[i + 1] - offsets[i] - 1));
      const VectorF nv =
          e.col(static_cast<Eigen::Index>(offsets[i] + 1 + SemiHardIndex(av, cols)));
      total += nn::TripletLoss<float>(av, pv, nv, margin).loss;
    }
  }
  return total / static_cast<double>(usable.size());
}

double CnnEvalLoss(const CnnModel& model, const std::vector<TripletRecord>& records,
                   uint64_t seed) {
  const auto usable = Usable(records);
  if (usable.empty()) return 0.0;
  double total = 0;
  for (size_t i = 0; i < usable.size(); ++i) {
    const TripletRecord& r = *usable[i];
    auto rng = MakeRng(seed, i, 3);
    const Board& neg = r.negatives[SampleIndices(r.negatives.size(), 1, rng)[0]];
    const auto probs = model.Probabilities(r.Anchor(), {r.positive, neg});
    total -= std::log(std::max(probs[0], 1e-12)) + std::log(std::max(1.0 - probs[1], 1e-12));
  }
  return total / static_cast<double>(2 * usable.size());
}

double SiameseTop1(const SiameseModel& model, const std::vector<TripletRecord>& records) {
  const auto usable = Usable(records);
  if (usable.empty()) return 0.0;
  size_t hits = 0;
  for (const auto* r : usable) {
    const VectorF a = model.net()
                          .EmbedHistories(MakeBatch(kHistoryChannels, {AnchorActive(*r, model.roster())}))
                          .col(0);
    std::vector<Board> boards{r->positive};
    boards.insert(boards.end(), r->negatives.begin(), r->negatives.end());
    const MatrixF e = model.EmbedBoards(boards);
    const float dp = (a - e.col(0)).norm();
    bool best = true;
    for (Eigen::Index k = 1; k < e.cols() && best; ++k) best = dp < (a - e.col(k)).norm();
    if (best) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(usable.size());
}

double CnnAccuracy(const CnnModel& model, const std::vector<TripletRecord>& records,
                   uint64_t seed) {
  const auto usable = Usable(records);
  if (usable.empty()) return 0.0;
  size_t correct = 0;
  for (size_t i = 0; i < usable.size(); ++i) {
    const TripletRecord& r = *usable[i];
    auto rng = MakeRng(seed, i, 3);
    const Board& neg = r.negatives[SampleIndices(r.negatives.size(), 1, rng)[0]];
    const auto probs = model.Probabilities(r.Anchor(), {r.positive, neg});
    if (probs[0] > 0.5) ++correct;
    if (probs[1] <= 0.5) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(2 * usable.size());
}

}  // namespace rbc
