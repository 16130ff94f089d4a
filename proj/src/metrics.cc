#include "rbc/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "rbc/errors.h"

namespace rbc {

namespace {

double Quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

nlohmann::json SummaryJson(const Summary& s) {
  return {{"mean", s.mean}, {"min", s.min},       {"q10", s.q10}, {"q25", s.q25},
          {"median", s.median}, {"q75", s.q75}, {"q90", s.q90}, {"max", s.max}};
}

}  // namespace

size_t PickDistance(const std::vector<size_t>& ranking, size_t true_index) {
  if (true_index >= ranking.size()) throw InvalidInput("true index out of range");
  auto it = std::find(ranking.begin(), ranking.end(), true_index);
  if (it == ranking.end()) throw InvalidInput("true index missing from the ranking");
  return static_cast<size_t>(it - ranking.begin()) + 1;
}

double TopKPercent(const std::vector<RankingSample>& samples, double k) {
  if (!(k > 0 && k <= 100)) throw InvalidInput("k must be in (0, 100]");
  if (samples.empty()) return 0.0;
  size_t hits = 0;
  for (const auto& s : samples) {
    // Small epsilon keeps k/100 * |I| from rounding up past an exact integer.
    const auto limit =
        static_cast<size_t>(std::ceil(k / 100.0 * static_cast<double>(s.set_size) - 1e-9));
    if (s.pick_distance <= limit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

Summary Summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.min = values.front();
  s.max = values.back();
  s.q10 = Quantile(values, 0.10);
  s.q25 = Quantile(values, 0.25);
  s.median = Quantile(values, 0.5);
  s.q75 = Quantile(values, 0.75);
  s.q90 = Quantile(values, 0.90);
  return s;
}

RankingEval MakeRankingEval(const std::string& provider, std::vector<RankingSample> samples) {
  RankingEval r;
  r.provider = provider;
  r.samples = std::move(samples);
  for (int k = 1; k <= 100; ++k) r.curve.push_back(TopKPercent(r.samples, k));
  std::vector<double> picks, relative, sizes;
  double inv = 0;
  size_t hits = 0;
  for (const auto& s : r.samples) {
    picks.push_back(static_cast<double>(s.pick_distance));
    relative.push_back(static_cast<double>(s.pick_distance) / static_cast<double>(s.set_size));
    sizes.push_back(static_cast<double>(s.set_size));
    inv += 1.0 / static_cast<double>(s.set_size);
    if (s.pick_distance == 1) ++hits;
    auto& b = r.per_opponent[s.opponent];
    ++b.samples;
    if (s.pick_distance == 1) ++b.top1;
  }
  if (!r.samples.empty()) {
    const auto n = static_cast<double>(r.samples.size());
    r.top1 = static_cast<double>(hits) / n;
    r.uniform_expectation = inv / n;
  }
  r.pick_distance = Summarize(picks);
  r.relative_pick_distance = Summarize(relative);
  r.set_size = Summarize(sizes);
  return r;
}

std::string RankingEval::ToJson() const {
  nlohmann::json j;
  j["provider"] = provider;
  j["samples"] = samples.size();
  j["top1"] = top1;
  j["uniform_expectation"] = uniform_expectation;
  nlohmann::json c = nlohmann::json::array();
  for (size_t k = 0; k < curve.size(); ++k) c.push_back({{"k", k + 1}, {"fraction", curve[k]}});
  j["top_k_percent"] = c;
  j["pick_distance"] = SummaryJson(pick_distance);
  j["relative_pick_distance"] = SummaryJson(relative_pick_distance);
  j["set_size"] = SummaryJson(set_size);
  nlohmann::json opp = nlohmann::json::object();
  for (const auto& [name, b] : per_opponent) {
    opp[name] = {{"samples", b.samples}, {"top1", b.accuracy()}};
  }
  j["per_opponent"] = opp;
  return j.dump(2);
}

std::string RankingEval::CurveCsv() const {
  std::string out = "k,fraction\n";
  for (size_t k = 0; k < curve.size(); ++k) out += fmt::format("{},{:.6f}\n", k + 1, curve[k]);
  return out;
}

std::string RankingEval::ToText() const {
  std::string out;
  out += fmt::format("provider             {}\n", provider);
  out += fmt::format("samples              {}\n", samples.size());
  out += fmt::format("top-1                {:.4f}\n", top1);
  out += fmt::format("uniform expectation  {:.4f}\n", uniform_expectation);
  out += fmt::format("pick distance        median {:.1f}  mean {:.2f}  q90 {:.1f}  max {:.0f}\n",
                     pick_distance.median, pick_distance.mean, pick_distance.q90,
                     pick_distance.max);
  out += fmt::format("set size             median {:.1f}  mean {:.2f}  max {:.0f}\n",
                     set_size.median, set_size.mean, set_size.max);
  for (int k : {1, 5, 10, 25, 50}) {
    if (static_cast<size_t>(k) <= curve.size()) {
      out += fmt::format("{:<21}{:.4f}\n", fmt::format("in top {}% of set", k), curve[k - 1]);
    }
  }
  for (const auto& [name, b] : per_opponent) {
    out += fmt::format("  vs {:<16} samples {:>6}  top-1 {:.4f}\n", name, b.samples,
                       b.accuracy());
  }
  return out;
}

RankingEval EvaluateProvider(const WeightProvider& provider,
                             const std::vector<GameRecord>& games, const EvalOptions& options) {
  std::vector<RankingSample> samples;
  for (size_t g = 0; g < games.size(); ++g) {
    for (Color player : {Color::kWhite, Color::kBlack}) {
      ForEachDecision(games[g], player, options.cap, options.threads, [&](const DecisionView& d) {
        if (d.set.size() < 2) return;
        const auto truth = d.set.IndexOf(d.truth);
        if (!truth) return;
        const auto scores = provider.Scores(AnchorHistory(d.history, d.turn), d.set.boards());
        std::seed_seq seq{static_cast<uint32_t>(options.tie_seed),
                          static_cast<uint32_t>(options.tie_seed >> 32),
                          static_cast<uint32_t>(g), static_cast<uint32_t>(player),
                          static_cast<uint32_t>(d.turn)};
        std::mt19937_64 rng(seq);
        std::vector<uint64_t> tie(scores.size());
        for (auto& t : tie) t = rng();
        std::vector<size_t> order(scores.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
          if (scores[a] != scores[b]) return scores[a] < scores[b];
          return tie[a] < tie[b] || (tie[a] == tie[b] && a < b);
        });
        samples.push_back({d.set.size(), PickDistance(order, *truth),
                           games[g].Name(Opponent(player))});
      });
    }
  }
  return MakeRankingEval(provider.Name(), std::move(samples));
}

}  // namespace rbc
