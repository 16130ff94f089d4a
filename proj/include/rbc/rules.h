#ifndef RBC_RULES_H_
#define RBC_RULES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rbc/board.h"

namespace rbc {

// Full turns without a capture or pawn move that end the game in a draw.
inline constexpr int kDrawProgressTurns = 50;

struct MoveOutcome {
  MoveRequest requested;
  MoveRequest taken;  // pass, the requested move, or a truncated slide
  std::optional<Square> capture_square;
  bool was_illegal = false;  // taken differs from requested

  bool operator==(const MoveOutcome&) const = default;
};

struct SenseCell {
  Square square;
  std::optional<Piece> piece;
  bool operator==(const SenseCell&) const = default;
};

// Ground truth of the 3x3 window around `center`, clipped to the board.
// Cells are in ascending square order.
struct SenseResult {
  Square center;
  std::vector<SenseCell> cells;
  bool operator==(const SenseResult&) const = default;
};

enum class OutcomeKind { kOngoing, kWin, kDraw };

struct Outcome {
  OutcomeKind kind = OutcomeKind::kOngoing;
  std::optional<Color> winner;  // set for kWin (always by king capture)

  static Outcome Ongoing() { return {}; }
  static Outcome Win(Color c) { return {OutcomeKind::kWin, c}; }
  static Outcome Draw() { return {OutcomeKind::kDraw, std::nullopt}; }
  bool operator==(const Outcome&) const = default;
};

struct Successor {
  Board board;
  MoveOutcome outcome;
};

// Adjudicates a request for the side to move and returns the resulting
// board. Legal chess moves (ignoring check) execute normally; a slide
// through an opposing piece stops there and captures it; anything else
// becomes a pass with was_illegal set.
std::pair<Board, MoveOutcome> ApplyRequest(const Board& board,
                                           const MoveRequest& request);

SenseResult Sense(const Board& board, Square center);

// The window contents packed into one integer (4 bits per cell); two boards
// give the same SenseResult at `center` iff their keys are equal.
uint64_t SenseKey(const Board& board, Square center);

// Moves of the side to move that execute unaltered under RBC rules: standard
// pseudo-legal moves plus castling through or out of check. Promotions are
// listed once per promotion piece.
std::vector<MoveRequest> PseudoLegalMoves(const Board& board);

// One entry per distinct (resulting board, capture square) over every
// request including Pass, sorted by canonical board key. Empty for terminal
// boards.
std::vector<Successor> SuccessorOutcomes(const Board& board);

Outcome GetOutcome(const Board& board);

// True if the side to move has a pseudo-legal move onto the opposing king.
bool CanCaptureKing(const Board& board);
std::optional<MoveRequest> KingCaptureMove(const Board& board);

// Squares attacked by `by` (pawn diagonals, no en passant), as a bitmask.
uint64_t AttackedSquares(const Board& board, Color by);

}  // namespace rbc

#endif  // RBC_RULES_H_
