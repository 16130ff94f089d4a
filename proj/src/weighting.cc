#include "rbc/weighting.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rbc/errors.h"

namespace rbc {

std::vector<double> Distances(const SiameseModel& model, const ObservationHistory& history,
                              const std::vector<Board>& boards) {
  const Embedding anchor = model.EmbedHistory(history);
  const nn::Matrix<float> e = model.EmbedBoards(boards);
  std::vector<double> out(boards.size());
  for (size_t i = 0; i < boards.size(); ++i) {
    out[i] = (anchor - e.col(static_cast<Eigen::Index>(i))).cast<double>().norm();
  }
  return out;
}

std::vector<double> SoftminWeights(const std::vector<double>& distances, double t) {
  if (!(t > 0)) throw InvalidInput("temperature must be positive");
  if (distances.empty()) throw InvalidInput("softmin of an empty distance list");
  const double lo = *std::min_element(distances.begin(), distances.end());
  std::vector<double> w(distances.size());
  double sum = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(-(distances[i] - lo) / t);
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

std::vector<size_t> Rank(const std::vector<double>& scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  return order;
}

std::vector<double> CnnProvider::Scores(const ObservationHistory& history,
                                        const std::vector<Board>& boards) const {
  std::vector<double> p = model_->Probabilities(history, boards);
  for (double& v : p) v = -v;
  return p;
}

std::vector<double> CnnProvider::Weights(const ObservationHistory& history,
                                         const std::vector<Board>& boards, double) const {
  if (boards.empty()) throw InvalidInput("weights of an empty set");
  std::vector<double> p = model_->Probabilities(history, boards);
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(sum > 0)) return std::vector<double>(p.size(), 1.0 / static_cast<double>(p.size()));
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> UniformProvider::Weights(const ObservationHistory&,
                                             const std::vector<Board>& boards, double t) const {
  if (!(t > 0)) throw InvalidInput("temperature must be positive");
  if (boards.empty()) throw InvalidInput("weights of an empty set");
  return std::vector<double>(boards.size(), 1.0 / static_cast<double>(boards.size()));
}

std::vector<double> EngineEvalProvider::Scores(const ObservationHistory&,
                                               const std::vector<Board>& boards) const {
  // Each board has the owner to move, so its value for the owner is the
  // negated value for the opponent.
  std::vector<double> out;
  out.reserve(boards.size());
  for (const Board& b : boards) out.push_back(evaluator_->EvaluatePosition(b));
  return out;
}

std::vector<double> RandomProvider::Scores(const ObservationHistory& history,
                                           const std::vector<Board>& boards) const {
  uint64_t mix = seed_ ^ (history.turns.size() * 0x9e3779b97f4a7c15ull);
  for (const Board& b : boards) mix = mix * 1099511628211ull ^ b.Hash();
  std::seed_seq seq{static_cast<uint32_t>(mix), static_cast<uint32_t>(mix >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<size_t> perm(boards.size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> scores(boards.size());
  for (size_t r = 0; r < perm.size(); ++r) scores[perm[r]] = static_cast<double>(r);
  return scores;
}

std::shared_ptr<WeightProvider> MakeProvider(const std::string& name,
                                             const std::string& checkpoint, uint64_t seed,
                                             std::shared_ptr<Evaluator> evaluator) {
  if (name == "uniform") return std::make_shared<UniformProvider>();
  if (name == "random") return std::make_shared<RandomProvider>(seed);
  if (name == "engine") {
    if (!evaluator) evaluator = std::make_shared<MaterialEvaluator>(1);
    return std::make_shared<EngineEvalProvider>(std::move(evaluator));
  }
  if (name == "siamese" || name == "cnn") {
    if (checkpoint.empty()) throw InvalidInput("provider '" + name + "' needs a checkpoint");
    if (name == "siamese") {
      return std::make_shared<SiameseProvider>(
          std::shared_ptr<const SiameseModel>(LoadSiamese(checkpoint)));
    }
    return std::make_shared<CnnProvider>(std::shared_ptr<const CnnModel>(LoadCnn(checkpoint)));
  }
  throw InvalidInput("unknown provider '" + name + "' (uniform|random|engine|siamese|cnn)");
}

}  // namespace rbc
