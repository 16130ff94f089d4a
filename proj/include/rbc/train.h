#ifndef RBC_TRAIN_H_
#define RBC_TRAIN_H_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rbc/data.h"
#include "rbc/model.h"
#include "rbc/nn/optim.h"

namespace rbc {

struct TrainConfig {
  int batch_size = 1024;
  double learning_rate = 1e-4;
  nn::AdamWConfig adamw;  // its learning_rate is replaced by the one above
  int initial_samples = 3;  // negatives sampled per anchor (x)
  int max_samples = 32;
  int patience = 3;
  int max_epochs = 100;
  // Stop once the mean training loss drops below this; disabled when < 0.
  double target_loss = -1.0;
  // Keep the parameters of the best eval epoch at the end.
  bool restore_best = true;
  uint64_t seed = 0;

  // Small batches and a larger step for desk-scale data.
  static TrainConfig Desk() {
    TrainConfig c;
    c.batch_size = 32;
    c.learning_rate = 1e-3;
    return c;
  }
  void Validate() const;
  nn::AdamWConfig Optimizer() const {
    nn::AdamWConfig o = adamw;
    o.learning_rate = learning_rate;
    return o;
  }
};

struct EpochStats {
  int epoch = 0;          // 1-based, continuing a resumed model
  double train_loss = 0;  // mean over the epoch's steps
  double eval_loss = 0;   // on the eval records, or the train loss without them
  double train_accuracy = 0;  // CNN only: batch accuracy during the epoch
  int samples = 0;            // Siamese only: x used in this epoch
  size_t records = 0;
};

struct TrainResult {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;
  double best_eval_loss = 0;
  bool early_stopped = false;
  bool reached_target = false;
  bool stopped_by_callback = false;
};

// Called after every epoch; returning false ends training there.
using EpochCallback = std::function<bool(const EpochStats&)>;

// Triplet training with semi-hard negatives: for each anchor, x negatives
// are drawn from its pool and the one nearest the anchor is used. x doubles
// (up to max_samples) after an epoch without eval improvement; training
// stops after `patience` such epochs in a row.
TrainResult TrainSiamese(const std::vector<TripletRecord>& train,
                         const std::vector<TripletRecord>& eval, SiameseModel& model,
                         const TrainConfig& config, nn::AdamW<float>* optimizer = nullptr,
                         const EpochCallback& on_epoch = {});

// Binary classification on (history, board) pairs: per epoch each record
// gives its positive and one uniformly drawn negative.
TrainResult TrainCnn(const std::vector<TripletRecord>& train,
                     const std::vector<TripletRecord>& eval, CnnModel& model,
                     const TrainConfig& config, nn::AdamW<float>* optimizer = nullptr,
                     const EpochCallback& on_epoch = {});

// Mean triplet loss with the nearest of up to 32 negatives drawn with a
// fixed seed per record, so values are comparable across epochs.
double SiameseEvalLoss(const SiameseModel& model, const std::vector<TripletRecord>& records,
                       uint64_t seed);
// Mean binary cross-entropy over each record's positive and one fixed
// negative.
double CnnEvalLoss(const CnnModel& model, const std::vector<TripletRecord>& records,
                   uint64_t seed);

// Fraction of records whose positive is strictly closer to the anchor than
// every negative in the pool.
double SiameseTop1(const SiameseModel& model, const std::vector<TripletRecord>& records);
// Classification accuracy over each record's positive and one fixed negative.
double CnnAccuracy(const CnnModel& model, const std::vector<TripletRecord>& records,
                   uint64_t seed);

// The semi-hard pick: the column of `negatives` (embeddings of the sampled
// negatives) nearest the anchor; lowest index on ties.
size_t SemiHardIndex(const Eigen::Ref<const Eigen::VectorXf>& anchor,
                     const Eigen::Ref<const nn::Matrix<float>>& negatives);

// Distinct indices drawn uniformly from [0, n); all of them when k >= n.
std::vector<size_t> SampleIndices(size_t n, size_t k, std::mt19937_64& rng);

}  // namespace rbc

#endif  // RBC_TRAIN_H_
