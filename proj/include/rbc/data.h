#ifndef RBC_DATA_H_
#define RBC_DATA_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbc/infoset.h"

namespace rbc {

inline constexpr int kRecordVersion = 1;

struct InfosetDigest {
  size_t size = 0;
  bool truncated = false;
  // Whether the tracker still held the true board (trackers only).
  std::optional<bool> contains_true;
  std::optional<std::vector<std::string>> fens;

  bool operator==(const InfosetDigest&) const = default;
};

// One completed turn of one player. Turns alternate colors, white first.
struct RecordedTurn {
  TurnObservation observation;
  Board board_after;  // true board after this turn's move
  InfosetDigest digest;

  bool operator==(const RecordedTurn&) const = default;
};

struct GameRecord {
  std::string white;
  std::string black;
  std::optional<Color> winner;
  // "king_capture", "draw_rule", "turn_limit" or "forfeit".
  std::string termination;
  uint64_t seed = 0;
  std::vector<RecordedTurn> turns;

  const std::string& Name(Color c) const { return c == Color::kWhite ? white : black; }
  // The player's own observations, with the opponent's name attached.
  ObservationHistory History(Color player) const;

  bool operator==(const GameRecord&) const = default;
};

// JSON Lines, one game per line. Unknown fields are ignored on read.
std::string GameToJson(const GameRecord& game);
GameRecord GameFromJson(const std::string& line, long line_number = 0);
void WriteGames(const std::string& path, const std::vector<GameRecord>& games);
void AppendGame(std::ostream& out, const GameRecord& game);
std::vector<GameRecord> ReadGames(const std::string& path);
// Every *.rbcl file of a directory, in file-name order.
std::vector<GameRecord> ReadGameDir(const std::string& dir);

// Replays the moves and checks every stored board; throws CorruptRecord.
void VerifyReplay(const GameRecord& game);

// The history up to and including turn `turn`'s sense; that turn's move
// fields are cleared.
ObservationHistory AnchorHistory(const ObservationHistory& full, size_t turn);

// A decision point: the player's information set after sensing, next to the
// true board.
struct DecisionView {
  const GameRecord& game;
  Color player;
  const ObservationHistory& history;  // the player's full history
  size_t turn;                        // index into history.turns
  const InformationSet& set;
  const Board& truth;
};

// Rebuilds the player's information sets turn by turn and calls `fn` at
// every decision. A capped set can lose the true board and later run empty;
// the remaining decisions are then skipped and their count returned. Throws
// CorruptRecord when an untruncated set runs empty.
size_t ForEachDecision(const GameRecord& game, Color player, size_t cap, int threads,
                     const std::function<void(const DecisionView&)>& fn);

struct TripletRecord {
  std::shared_ptr<const ObservationHistory> history;
  size_t turn = 0;
  Board positive;
  std::vector<Board> negatives;  // the set without the positive
  size_t game = 0;
  Color player = Color::kWhite;

  ObservationHistory Anchor() const { return AnchorHistory(*history, turn); }
};

struct TripletStats {
  size_t records = 0;
  size_t singleton_skipped = 0;
  size_t clipped_skipped = 0;
};

std::vector<TripletRecord> BuildTriplets(const GameRecord& game, Color player,
                                         size_t cap = kDefaultSetCap,
                                         TripletStats* stats = nullptr, int threads = 1);
// Both players of every game, in game order.
std::vector<TripletRecord> BuildDataset(const std::vector<GameRecord>& games,
                                        size_t cap = kDefaultSetCap,
                                        TripletStats* stats = nullptr, int threads = 1);

// Game indices for a train/test split by whole game; round(fraction * n)
// games go to training.
std::pair<std::vector<size_t>, std::vector<size_t>> SplitGames(size_t n_games,
                                                               double fraction, uint64_t seed);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> Split(const std::vector<T>& games, double fraction,
                                                uint64_t seed) {
  auto [train_idx, test_idx] = SplitGames(games.size(), fraction, seed);
  std::pair<std::vector<T>, std::vector<T>> out;
  for (size_t i : train_idx) out.first.push_back(games[i]);
  for (size_t i : test_idx) out.second.push_back(games[i]);
  return out;
}

// A permutation of [0, n) fixed by (seed, epoch).
std::vector<size_t> EpochOrder(size_t n, uint64_t seed, uint64_t epoch);

}  // namespace rbc

#endif  // RBC_DATA_H_
