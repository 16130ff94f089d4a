#include "rbc/agent.h"

#include <algorithm>
#include <map>
#include <numeric>

#include <spdlog/spdlog.h>

#include "rbc/errors.h"

namespace rbc {

void AgentConfig::Validate() const {
  if (!(temperature > 0)) throw InvalidInput("temperature must be positive");
  if (sense_board_budget < 1 || candidate_cap < 1 || move_board_budget < 1 || set_cap < 1) {
    throw InvalidInput("agent budgets must be at least 1");
  }
}

std::vector<size_t> TopIndices(const std::vector<double>& weights, size_t budget) {
  std::vector<size_t> order(weights.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return weights[a] > weights[b]; });
  if (order.size() > budget) order.resize(budget);
  return order;
}

std::array<double, 64> SenseScores(const std::vector<Board>& boards,
                                   const std::vector<double>& weights, size_t budget) {
  if (boards.empty()) throw InvalidInput("cannot sense over an empty set");
  if (weights.size() != boards.size()) throw InvalidInput("weights do not match the set");
  const std::vector<size_t> top = TopIndices(weights, budget);
  double s = 0;
  for (size_t i : top) s += weights[i];
  std::array<double, 64> scores{};
  if (!(s > 0)) return scores;
  for (int q = 0; q < 64; ++q) {
    const Square sq(q);
    if (!sq.IsInterior()) continue;
    std::map<uint64_t, double> buckets;
    for (size_t i : top) buckets[SenseKey(boards[i], sq)] += weights[i];
    std::vector<double> mass;
    for (const auto& [key, res] : buckets) mass.push_back(res);
    // The mass outside each bucket is summed directly rather than taken as
    // s - res, which keeps small cases exact.
    std::vector<double> before(mass.size() + 1, 0.0), after(mass.size() + 1, 0.0);
    for (size_t b = 0; b < mass.size(); ++b) before[b + 1] = before[b] + mass[b];
    for (size_t b = mass.size(); b-- > 0;) after[b] = after[b + 1] + mass[b];
    double score = 0;
    for (size_t b = 0; b < mass.size(); ++b) score += mass[b] * (before[b] + after[b + 1]);
    scores[q] = score / s;
  }
  return scores;
}

Square ChooseSense(const std::vector<Board>& boards, const std::vector<double>& weights,
                   size_t budget) {
  const auto scores = SenseScores(boards, weights, budget);
  int best = -1;
  for (int q = 0; q < 64; ++q) {
    if (!Square(q).IsInterior()) continue;
    if (best < 0 || scores[q] > scores[best]) best = q;
  }
  return Square(best);
}

std::vector<MoveRequest> CandidateMoves(const std::vector<Board>& boards,
                                        const std::vector<double>& weights,
                                        Evaluator& evaluator, size_t cap) {
  if (boards.empty()) throw InvalidInput("no boards to propose moves");
  std::map<MoveRequest, double> mass;
  size_t failures = 0;
  for (size_t i = 0; i < boards.size(); ++i) {
    try {
      mass[evaluator.BestMove(boards[i])] += weights[i];
    } catch (const EngineError& e) {
      ++failures;
      spdlog::warn("evaluator failed on {}: {}", boards[i].Fen(), e.what());
    }
  }
  if (failures == boards.size()) throw EngineError("evaluator failed on every board");
  std::vector<std::pair<MoveRequest, double>> ranked(mass.begin(), mass.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<MoveRequest> out;
  for (const auto& [move, m] : ranked) {
    if (out.size() >= cap) break;
    out.push_back(move);
  }
  // King evasions whenever some board has our king under attack: no single
  // board's best move needs to be safe across the whole set.
  const Color us = boards.front().side_to_move();
  const auto king = boards.front().KingSquare(us);
  bool threatened = false;
  for (const Board& b : boards) {
    const auto k = b.KingSquare(us);
    if (k && (AttackedSquares(b, Opponent(us)) >> k->index() & 1)) threatened = true;
  }
  if (threatened && king) {
    for (const MoveRequest& m : PseudoLegalMoves(boards.front())) {
      if (m.from() == *king && std::find(out.begin(), out.end(), m) == out.end()) {
        out.push_back(m);
      }
    }
  }
  if (std::find(out.begin(), out.end(), MoveRequest::Pass()) == out.end()) {
    out.push_back(MoveRequest::Pass());
  }
  return out;
}

double ScoreMove(const MoveRequest& move, const std::vector<Board>& boards,
                 const std::vector<double>& weights, Evaluator& evaluator) {
  double total = 0;
  for (size_t i = 0; i < boards.size(); ++i) {
    try {
      total += weights[i] * evaluator.Evaluate(boards[i], move);
    } catch (const EngineError& e) {
      spdlog::warn("evaluator failed on {}: {}", boards[i].Fen(), e.what());
    }
  }
  return total;
}

MoveRequest ChooseMove(const std::vector<Board>& boards, const std::vector<double>& weights,
                       Evaluator& evaluator, const AgentConfig& config) {
  if (boards.empty()) throw InvalidInput("cannot move over an empty set");
  const std::vector<size_t> top = TopIndices(weights, config.move_board_budget);
  std::vector<Board> sub;
  std::vector<double> w;
  double sum = 0;
  for (size_t i : top) {
    sub.push_back(boards[i]);
    w.push_back(weights[i]);
    sum += weights[i];
  }
  if (sum > 0) {
    for (double& v : w) v /= sum;
  }
  const auto candidates = CandidateMoves(sub, w, evaluator, config.candidate_cap);
  MoveRequest best = candidates.front();
  double best_score = ScoreMove(best, sub, w, evaluator);
  for (size_t c = 1; c < candidates.size(); ++c) {
    const double s = ScoreMove(candidates[c], sub, w, evaluator);
    if (s > best_score) {
      best_score = s;
      best = candidates[c];
    }
  }
  return best;
}

Agent::Agent(std::string name, std::shared_ptr<const WeightProvider> provider,
             std::shared_ptr<Evaluator> evaluator, AgentConfig config)
    : name_(std::move(name)), provider_(std::move(provider)),
      evaluator_(std::move(evaluator)), config_(config) {
  config_.Validate();
  if (!provider_ || !evaluator_) throw InvalidInput("agent needs a provider and an evaluator");
}

void Agent::NewGame(Color color, const std::string& opponent_name) {
  color_ = color;
  set_ = InformationSet::Initial(color, config_.set_cap);
  weights_.assign(set_.size(), 1.0 / static_cast<double>(set_.size()));
  history_ = ObservationHistory{};
  history_.opponent_name = opponent_name;
  first_turn_ = true;
}

void Agent::Reweight() {
  weights_ = provider_->Weights(history_, set_.boards(), config_.temperature);
}

Square Agent::ChooseSense(std::optional<Square> opponent_capture) {
  if (!(first_turn_ && color_ == Color::kWhite)) {
    set_ = ExpandOpponent(set_, opponent_capture, config_.threads);
  }
  first_turn_ = false;
  TurnObservation obs;
  obs.color = color_;
  obs.opponent_capture_square = opponent_capture;
  obs.own_pieces = OwnPieces(set_.boards().front(), color_);
  history_.turns.push_back(obs);
  Reweight();
  const Square sq = rbc::ChooseSense(set_.boards(), weights_, config_.sense_board_budget);
  history_.turns.back().sense_center = sq;
  return sq;
}

void Agent::HandleSense(const SenseResult& result) {
  history_.turns.back().sense_center = result.center;
  history_.turns.back().sense_result = result;
  set_ = FilterSense(set_, result);
  Reweight();
}

MoveRequest Agent::ChooseMove() {
  return rbc::ChooseMove(set_.boards(), weights_, *evaluator_, config_);
}

void Agent::HandleMove(const MoveOutcome& outcome) {
  TurnObservation& obs = history_.turns.back();
  obs.own_request = outcome.requested;
  obs.own_taken = outcome.taken;
  obs.own_capture_square = outcome.capture_square;
  obs.own_was_illegal = outcome.was_illegal;
  set_ = FilterOwnMove(set_, outcome);
}

void Agent::Resync(const Board& truth) {
  set_ = InformationSet({truth}, config_.set_cap);
  weights_ = {1.0};
}

}  // namespace rbc
