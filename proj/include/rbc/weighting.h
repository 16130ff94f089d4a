#ifndef RBC_WEIGHTING_H_
#define RBC_WEIGHTING_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rbc/evaluator.h"
#include "rbc/infoset.h"
#include "rbc/model.h"

namespace rbc {

inline constexpr double kDefaultTemperature = 10.0;

// Euclidean distances between the history embedding (computed once) and
// each board's embedding, in board order.
std::vector<double> Distances(const SiameseModel& model, const ObservationHistory& history,
                              const std::vector<Board>& boards);
inline std::vector<double> Distances(const SiameseModel& model,
                                     const ObservationHistory& history,
                                     const InformationSet& set) {
  return Distances(model, history, set.boards());
}

// w_i = exp(-d_i / t) / sum_j exp(-d_j / t), shifted by the minimum distance.
std::vector<double> SoftminWeights(const std::vector<double>& distances, double t);

// Indices in ascending order of score; ties keep index order.
std::vector<size_t> Rank(const std::vector<double>& scores);

// Scores boards of an information set given the owner's history. Lower
// scores are likelier; weights default to the softmin of the scores.
class WeightProvider {
 public:
  virtual ~WeightProvider() = default;
  virtual std::string Name() const = 0;
  virtual std::vector<double> Scores(const ObservationHistory& history,
                                     const std::vector<Board>& boards) const = 0;
  virtual std::vector<double> Weights(const ObservationHistory& history,
                                      const std::vector<Board>& boards, double t) const {
    return SoftminWeights(Scores(history, boards), t);
  }
};

class SiameseProvider : public WeightProvider {
 public:
  explicit SiameseProvider(std::shared_ptr<const SiameseModel> model)
      : model_(std::move(model)) {}
  std::string Name() const override { return "siamese"; }
  std::vector<double> Scores(const ObservationHistory& history,
                             const std::vector<Board>& boards) const override {
    return Distances(*model_, history, boards);
  }
  const SiameseModel& model() const { return *model_; }

 private:
  std::shared_ptr<const SiameseModel> model_;
};

// Scores are negated probabilities; weights are the normalized
// probabilities and ignore the temperature.
class CnnProvider : public WeightProvider {
 public:
  explicit CnnProvider(std::shared_ptr<const CnnModel> model) : model_(std::move(model)) {}
  std::string Name() const override { return "cnn"; }
  std::vector<double> Scores(const ObservationHistory& history,
                             const std::vector<Board>& boards) const override;
  std::vector<double> Weights(const ObservationHistory& history,
                              const std::vector<Board>& boards, double t) const override;

 private:
  std::shared_ptr<const CnnModel> model_;
};

class UniformProvider : public WeightProvider {
 public:
  std::string Name() const override { return "uniform"; }
  std::vector<double> Scores(const ObservationHistory&,
                             const std::vector<Board>& boards) const override {
    return std::vector<double>(boards.size(), 0.0);
  }
  std::vector<double> Weights(const ObservationHistory&, const std::vector<Board>& boards,
                              double t) const override;
};

// Boards that are good for the opponent (who just moved) score lower. The
// evaluator is used from one thread at a time.
class EngineEvalProvider : public WeightProvider {
 public:
  explicit EngineEvalProvider(std::shared_ptr<Evaluator> evaluator)
      : evaluator_(std::move(evaluator)) {}
  std::string Name() const override { return "engine"; }
  std::vector<double> Scores(const ObservationHistory& history,
                             const std::vector<Board>& boards) const override;

 private:
  std::shared_ptr<Evaluator> evaluator_;
};

// A seeded random ranking, mixed with the boards so each set gets its own
// permutation; weights are the softmin over rank positions.
class RandomProvider : public WeightProvider {
 public:
  explicit RandomProvider(uint64_t seed) : seed_(seed) {}
  std::string Name() const override { return "random"; }
  std::vector<double> Scores(const ObservationHistory& history,
                             const std::vector<Board>& boards) const override;

 private:
  uint64_t seed_;
};

// "uniform", "random", "engine", "siamese" or "cnn"; model providers load
// `checkpoint`.
std::shared_ptr<WeightProvider> MakeProvider(const std::string& name,
                                             const std::string& checkpoint, uint64_t seed,
                                             std::shared_ptr<Evaluator> evaluator = nullptr);

}  // namespace rbc

#endif  // RBC_WEIGHTING_H_
