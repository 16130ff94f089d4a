#ifndef RBC_ARENA_H_
#define RBC_ARENA_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rbc/agent.h"
#include "rbc/data.h"

namespace rbc {

inline constexpr int kDefaultTurnLimit = 300;

struct GameOptions {
  int max_half_turns = kDefaultTurnLimit;
  // Store the full FEN list of tracked sets up to this size.
  size_t record_set_fens = 0;
};

// Plays one game. A bot that loses track of the true board is resynced to it
// (logged); a bot that throws anything else forfeits.
GameRecord PlayGame(Bot& white, Bot& black, uint64_t seed, const GameOptions& options = {});

using BotFactory = std::function<std::unique_ptr<Bot>(uint64_t seed)>;

struct BotEntry {
  std::string name;
  BotFactory make;
};

struct PairResult {
  std::string first, second;
  int games = 0;
  int first_wins = 0;
  int second_wins = 0;
  int draws = 0;
  int first_as_white = 0;

  double FirstWinRate() const { return games ? static_cast<double>(first_wins) / games : 0.0; }
  double SecondWinRate() const { return games ? static_cast<double>(second_wins) / games : 0.0; }
};

struct BotTotals {
  int games = 0, wins = 0, draws = 0, losses = 0;
  double WinRate() const { return games ? static_cast<double>(wins) / games : 0.0; }
};

struct TournamentReport {
  uint64_t seed = 0;
  int games_per_pair = 0;
  std::vector<PairResult> pairs;
  std::vector<std::pair<std::string, BotTotals>> totals;  // in bot order
  std::vector<std::string> terminations;                    // per game, in order

  std::string ToJson() const;
  std::string ToText() const;
};

// Every unordered pair of distinct bots.
std::vector<std::pair<size_t, size_t>> RoundRobinPairs(size_t n);
// Each of the first `agents` bots against each of the remaining bots.
std::vector<std::pair<size_t, size_t>> SweepPairs(size_t agents, size_t total);

using GameCallback = std::function<void(size_t pair, int game, const GameRecord& record)>;

// Colors alternate within a pair, the first bot taking white in even games.
// Game seeds derive from (seed, pair, game); games run on `threads` workers.
TournamentReport RunTournament(const std::vector<BotEntry>& bots,
                               const std::vector<std::pair<size_t, size_t>>& pairs,
                               int games_per_pair, uint64_t seed, int threads = 1,
                               const GameOptions& options = {},
                               const GameCallback& on_game = {});

uint64_t GameSeed(uint64_t seed, uint64_t pair, uint64_t game);

}  // namespace rbc

#endif  // RBC_ARENA_H_
