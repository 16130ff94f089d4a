#ifndef RBC_AGENT_H_
#define RBC_AGENT_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rbc/evaluator.h"
#include "rbc/infoset.h"
#include "rbc/weighting.h"

namespace rbc {

struct AgentConfig {
  double temperature = kDefaultTemperature;
  size_t sense_board_budget = 100;
  size_t candidate_cap = 64;
  // Boards (highest weight first) used to propose and score moves.
  size_t move_board_budget = 100;
  size_t set_cap = kDefaultSetCap;
  uint64_t seed = 0;
  int threads = 1;

  void Validate() const;
};

// Indices of the `budget` highest weights; equal weights keep index order.
std::vector<size_t> TopIndices(const std::vector<double>& weights, size_t budget);

// Expected eliminated weight mass of sensing at each square, over the
// `budget` heaviest boards. Edge squares are scored 0.
std::array<double, 64> SenseScores(const std::vector<Board>& boards,
                                   const std::vector<double>& weights, size_t budget);
// Best interior square; ties go to the lowest square index.
Square ChooseSense(const std::vector<Board>& boards, const std::vector<double>& weights,
                   size_t budget);

// Each board's best move, grouped and ordered by the weight proposing it
// (then by move), cut to `cap`. King moves follow when the king is attacked
// on any of the boards; Pass comes last.
std::vector<MoveRequest> CandidateMoves(const std::vector<Board>& boards,
                                        const std::vector<double>& weights,
                                        Evaluator& evaluator, size_t cap);
// Weighted sum of the evaluator's value for `move` over the boards.
double ScoreMove(const MoveRequest& move, const std::vector<Board>& boards,
                 const std::vector<double>& weights, Evaluator& evaluator);
// Highest-scoring candidate over the move budget's boards (weights
// renormalized); the first candidate wins ties.
MoveRequest ChooseMove(const std::vector<Board>& boards, const std::vector<double>& weights,
                       Evaluator& evaluator, const AgentConfig& config);

// The sense-then-move turn protocol shared by every player.
class Bot {
 public:
  virtual ~Bot() = default;
  virtual std::string Name() const = 0;
  virtual void NewGame(Color color, const std::string& opponent_name) = 0;
  virtual Square ChooseSense(std::optional<Square> opponent_capture) = 0;
  virtual void HandleSense(const SenseResult& result) = 0;
  virtual MoveRequest ChooseMove() = 0;
  virtual void HandleMove(const MoveOutcome& outcome) = 0;
  // Bots that track an information set expose it.
  virtual const InformationSet* TrackedSet() const { return nullptr; }
  // Called after the tracked set lost the true board.
  virtual void Resync(const Board& truth) { (void)truth; }
};

// Information-set tracking player: weights the set with a provider, senses
// by expected elimination and picks the move with the best weighted value.
class Agent : public Bot {
 public:
  Agent(std::string name, std::shared_ptr<const WeightProvider> provider,
        std::shared_ptr<Evaluator> evaluator, AgentConfig config);

  std::string Name() const override { return name_; }
  void NewGame(Color color, const std::string& opponent_name) override;
  Square ChooseSense(std::optional<Square> opponent_capture) override;
  void HandleSense(const SenseResult& result) override;
  MoveRequest ChooseMove() override;
  void HandleMove(const MoveOutcome& outcome) override;
  const InformationSet* TrackedSet() const override { return &set_; }
  void Resync(const Board& truth) override;

  const ObservationHistory& history() const { return history_; }
  const std::vector<double>& weights() const { return weights_; }
  const AgentConfig& config() const { return config_; }

 private:
  void Reweight();

  std::string name_;
  std::shared_ptr<const WeightProvider> provider_;
  std::shared_ptr<Evaluator> evaluator_;
  AgentConfig config_;
  Color color_ = Color::kWhite;
  InformationSet set_;
  std::vector<double> weights_;
  ObservationHistory history_;
  bool first_turn_ = true;
};

}  // namespace rbc

#endif  // RBC_AGENT_H_
