#ifndef RBC_INFOSET_H_
#define RBC_INFOSET_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rbc/board.h"
#include "rbc/rules.h"

namespace rbc {

inline constexpr size_t kDefaultSetCap = 5000;
inline constexpr size_t kUnlimitedCap = std::numeric_limits<size_t>::max();

// Boards consistent with one player's observations: sorted by canonical key,
// free of duplicates, and never larger than `cap`.
class InformationSet {
 public:
  InformationSet() = default;
  // Sorts, deduplicates and clips `boards`.
  InformationSet(std::vector<Board> boards, size_t cap = kDefaultSetCap,
                 bool truncated = false);

  static InformationSet Initial(Color player, size_t cap = kDefaultSetCap);

  const std::vector<Board>& boards() const { return boards_; }
  size_t size() const { return boards_.size(); }
  bool empty() const { return boards_.empty(); }
  size_t cap() const { return cap_; }
  // True once clipping has ever dropped a board.
  bool truncated() const { return truncated_; }
  bool Contains(const Board& b) const;
  // Position of `b` in board order, or nullopt.
  std::optional<size_t> IndexOf(const Board& b) const;

 private:
  std::vector<Board> boards_;
  size_t cap_ = kDefaultSetCap;
  bool truncated_ = false;
};

// Replaces every board by its successors whose capture square matches the
// observation (nullopt: no capture seen). `threads` > 1 fans out the
// successor generation; the result does not depend on it.
InformationSet ExpandOpponent(const InformationSet& set,
                              std::optional<Square> observed_capture,
                              int threads = 1);

InformationSet FilterSense(const InformationSet& set, const SenseResult& result);

// Advances each board by the observed request and keeps the successors whose
// adjudication matches the observed outcome.
InformationSet FilterOwnMove(const InformationSet& set,
                             const MoveOutcome& outcome);

// Everything one player learns during one of their turns.
// Placement of one color only; side to move is that color, all other fields
// default. This is what a player knows of its own pieces.
Board OwnPieces(const Board& board, Color color);

struct TurnObservation {
  Color color = Color::kWhite;
  std::optional<Square> opponent_capture_square;
  std::optional<Square> sense_center;
  std::optional<SenseResult> sense_result;
  // Own placement when sensing (after the opponent's move).
  Board own_pieces;
  // Empty while the turn is still in progress.
  std::optional<MoveRequest> own_request;
  std::optional<MoveRequest> own_taken;
  std::optional<Square> own_capture_square;
  bool own_was_illegal = false;

  bool operator==(const TurnObservation&) const = default;
};

struct ObservationHistory {
  std::vector<TurnObservation> turns;  // chronological
  std::optional<std::string> opponent_name;

  bool operator==(const ObservationHistory&) const = default;
};

}  // namespace rbc

#endif  // RBC_INFOSET_H_
