#ifndef RBC_METRICS_H_
#define RBC_METRICS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rbc/data.h"
#include "rbc/weighting.h"

namespace rbc {

// 1-based position of `true_index` in `ranking`.
size_t PickDistance(const std::vector<size_t>& ranking, size_t true_index);

struct RankingSample {
  size_t set_size = 0;
  size_t pick_distance = 0;
  std::string opponent;
};

// Fraction of samples ranked within ceil(k / 100 * |I|), 0 < k <= 100.
double TopKPercent(const std::vector<RankingSample>& samples, double k);

struct Summary {
  double mean = 0, min = 0, q10 = 0, q25 = 0, median = 0, q75 = 0, q90 = 0, max = 0;
};
Summary Summarize(std::vector<double> values);

struct OpponentBreakdown {
  size_t samples = 0;
  size_t top1 = 0;
  double accuracy() const { return samples ? static_cast<double>(top1) / samples : 0.0; }
};

struct RankingEval {
  std::string provider;
  std::vector<RankingSample> samples;
  std::vector<double> curve;  // top-k-percent for k = 1..100
  double top1 = 0;
  double uniform_expectation = 0;  // mean of 1/|I|
  Summary pick_distance;
  Summary relative_pick_distance;  // pick distance / |I|
  Summary set_size;
  std::map<std::string, OpponentBreakdown> per_opponent;

  std::string ToJson() const;
  // "k,fraction" lines.
  std::string CurveCsv() const;
  std::string ToText() const;
};

RankingEval MakeRankingEval(const std::string& provider, std::vector<RankingSample> samples);

struct EvalOptions {
  size_t cap = kDefaultSetCap;
  double temperature = kDefaultTemperature;
  // Seeds the random order among equal scores.
  uint64_t tie_seed = 0;
  int threads = 1;
};

// Replays every game from both sides, scores each decision's information
// set (sets of one board and sets that lost the true board are skipped)
// and ranks the true board. Equal scores are ordered at random.
RankingEval EvaluateProvider(const WeightProvider& provider,
                             const std::vector<GameRecord>& games,
                             const EvalOptions& options = {});

}  // namespace rbc

#endif  // RBC_METRICS_H_
