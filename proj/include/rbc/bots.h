#ifndef RBC_BOTS_H_
#define RBC_BOTS_H_

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rbc/agent.h"

namespace rbc {

// What a player can know for certain: its own pieces and castling rights.
class OwnView {
 public:
  void Reset(Color color);
  void OpponentCaptured(std::optional<Square> square);
  void OwnMove(const MoveOutcome& outcome);
  // Own pieces only, own side to move.
  const Board& board() const { return board_; }
  // Moves that might execute: unobstructed moves on the own-pieces board,
  // pawn diagonals, and Pass.
  std::vector<MoveRequest> PossibleMoves() const;

 private:
  Board board_;
  Color color_ = Color::kWhite;
};

// Senses a random interior square and plays a random possible move.
class RandomBot : public Bot {
 public:
  explicit RandomBot(uint64_t seed) : rng_(seed) {}
  std::string Name() const override { return "random"; }
  void NewGame(Color color, const std::string& opponent_name) override;
  Square ChooseSense(std::optional<Square> opponent_capture) override;
  void HandleSense(const SenseResult&) override {}
  MoveRequest ChooseMove() override;
  void HandleMove(const MoveOutcome& outcome) override { view_.OwnMove(outcome); }

 private:
  std::mt19937_64 rng_;
  OwnView view_;
};

// Never moves; senses the center. Useful as a punching bag.
class PassiveBot : public Bot {
 public:
  std::string Name() const override { return "passive"; }
  void NewGame(Color, const std::string&) override {}
  Square ChooseSense(std::optional<Square>) override { return Square::Parse("d4"); }
  void HandleSense(const SenseResult&) override {}
  MoveRequest ChooseMove() override { return MoveRequest::Pass(); }
  void HandleMove(const MoveOutcome&) override {}
};

// Follows fixed quick attacks on the enemy king (a queen-and-bishop strike
// on f7/f2 and three knight rushes), switching line when one is refuted.
// Senses next to the enemy king and captures it whenever it is seen within
// reach.
class AttackerBot : public Bot {
 public:
  explicit AttackerBot(uint64_t seed) : rng_(seed) {}
  std::string Name() const override { return "attacker"; }
  void NewGame(Color color, const std::string& opponent_name) override;
  Square ChooseSense(std::optional<Square> opponent_capture) override;
  void HandleSense(const SenseResult& result) override;
  MoveRequest ChooseMove() override;
  void HandleMove(const MoveOutcome& outcome) override;

  // The scripted lines for white; black plays them mirrored.
  static const std::vector<std::vector<std::string>>& Lines();

 private:
  std::mt19937_64 rng_;
  OwnView view_;
  Color color_ = Color::kWhite;
  Square enemy_king_;
  bool king_seen_ = false;
  size_t line_ = 0;
  size_t step_ = 0;
  std::optional<MoveRequest> pending_;
};

// Tracks its information set, senses by expected elimination under uniform
// weights and plays a material search's best move on one sampled board.
class TroutBot : public Bot {
 public:
  TroutBot(uint64_t seed, int depth = 2, size_t cap = kDefaultSetCap)
      : rng_(seed), evaluator_(depth), cap_(cap) {}
  std::string Name() const override { return "trout"; }
  void NewGame(Color color, const std::string& opponent_name) override;
  Square ChooseSense(std::optional<Square> opponent_capture) override;
  void HandleSense(const SenseResult& result) override;
  MoveRequest ChooseMove() override;
  void HandleMove(const MoveOutcome& outcome) override;
  const InformationSet* TrackedSet() const override { return &set_; }
  void Resync(const Board& truth) override;

 private:
  std::mt19937_64 rng_;
  MaterialEvaluator evaluator_;
  size_t cap_;
  Color color_ = Color::kWhite;
  InformationSet set_;
  bool first_turn_ = true;
};

}  // namespace rbc

#endif  // RBC_BOTS_H_
