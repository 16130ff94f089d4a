#ifndef RBC_MODEL_H_
#define RBC_MODEL_H_

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "rbc/encoding.h"
#include "rbc/infoset.h"
#include "rbc/nn/models.h"
#include "rbc/nn/optim.h"

namespace rbc {

using nn::NetworkConfig;
using Embedding = Eigen::VectorXf;

// Flat indices of the ones in a stack.
std::vector<int> ActiveIndices(const PlaneStack& planes);
nn::SparseBatch MakeBatch(int channels, std::vector<std::vector<int>> active);
nn::SparseBatch BoardBatch(const std::vector<Board>& boards);

// The trained embedding function: observation histories and boards map into
// a shared D-dimensional space; the roster fixes the opponent planes.
class SiameseModel {
 public:
  SiameseModel(const NetworkConfig& config, Roster roster, uint64_t seed);

  const NetworkConfig& config() const { return config_; }
  const Roster& roster() const { return roster_; }
  nn::SiameseNet<float>& net() { return net_; }
  const nn::SiameseNet<float>& net() const { return net_; }

  // 12 channels select the board encoder, 1850 the history encoder.
  Embedding Embed(const PlaneStack& input) const;
  Embedding EmbedHistory(const ObservationHistory& history) const;
  // One column per board.
  nn::Matrix<float> EmbedBoards(const std::vector<Board>& boards) const;

  // Number of history-encoder passes so far.
  uint64_t history_passes() const { return history_passes_.load(); }

  int epochs_trained = 0;

 private:
  NetworkConfig config_;
  Roster roster_;
  nn::SiameseNet<float> net_;
  mutable std::atomic<uint64_t> history_passes_{0};
};

// Binary classifier baseline on concatenated (history, board) stacks.
class CnnModel {
 public:
  CnnModel(const NetworkConfig& config, Roster roster, uint64_t seed);

  const NetworkConfig& config() const { return config_; }
  const Roster& roster() const { return roster_; }
  nn::CnnNet<float>& net() { return net_; }
  const nn::CnnNet<float>& net() const { return net_; }

  // Probability that each board is the true one, in (0, 1).
  std::vector<double> Probabilities(const ObservationHistory& history,
                                    const std::vector<Board>& boards) const;

  int epochs_trained = 0;

 private:
  NetworkConfig config_;
  Roster roster_;
  nn::CnnNet<float> net_;
};

// Checkpoint layout: "RBCW1", a version byte, a length-prefixed JSON config
// block, then named little-endian float32 arrays with shape headers.
// Optimizer moments are stored when an optimizer is passed.
void SaveCheckpoint(const std::string& path, SiameseModel& model,
                    nn::AdamW<float>* optimizer = nullptr);
void SaveCheckpoint(const std::string& path, CnnModel& model,
                    nn::AdamW<float>* optimizer = nullptr);

// Loads into an existing model; the stored config must match.
void LoadCheckpoint(const std::string& path, SiameseModel& model,
                    nn::AdamW<float>* optimizer = nullptr);
void LoadCheckpoint(const std::string& path, CnnModel& model,
                    nn::AdamW<float>* optimizer = nullptr);

// "siamese" or "cnn".
std::string CheckpointKind(const std::string& path);
std::unique_ptr<SiameseModel> LoadSiamese(const std::string& path);
std::unique_ptr<CnnModel> LoadCnn(const std::string& path);

}  // namespace rbc

#endif  // RBC_MODEL_H_
