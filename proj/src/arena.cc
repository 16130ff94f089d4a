#include "rbc/arena.h"

#include <map>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "rbc/errors.h"
#include "rbc/parallel.h"

namespace rbc {

namespace {

InfosetDigest Digest(const Bot& bot, const Board& truth, const GameOptions& options) {
  InfosetDigest d;
  const InformationSet* set = bot.TrackedSet();
  if (!set) return d;
  d.size = set->size();
  d.truncated = set->truncated();
  d.contains_true = set->Contains(truth);
  if (set->size() <= options.record_set_fens) {
    std::vector<std::string> fens;
    for (const Board& b : set->boards()) fens.push_back(b.Fen());
    d.fens = std::move(fens);
  }
  return d;
}

// Runs `step`; when the bot's tracker has lost the true board, resyncs it to
// `truth` and runs `step` once more.
template <typename Fn>
auto WithResync(Bot& bot, const Board& truth, const char* phase, Fn step) {
  try {
    return step();
  } catch (const InconsistentObservation& e) {
    spdlog::warn("{} lost track during {}: {}; resyncing", bot.Name(), phase, e.what());
    bot.Resync(truth);
  }
  return step();
}

}  // namespace

GameRecord PlayGame(Bot& white, Bot& black, uint64_t seed, const GameOptions& options) {
  GameRecord record;
  record.white = white.Name();
  record.black = black.Name();
  record.seed = seed;
  white.NewGame(Color::kWhite, black.Name());
  black.NewGame(Color::kBlack, white.Name());

  Board board = Board::Initial();
  // The board as each side left it after its own last move.
  Board left_by[2] = {Board::Initial(), Board::Initial()};
  std::optional<Square> last_capture;
  for (int half = 0;; ++half) {
    const Outcome outcome = GetOutcome(board);
    if (outcome.kind == OutcomeKind::kWin) {
      record.winner = outcome.winner;
      record.termination = "king_capture";
      break;
    }
    if (outcome.kind == OutcomeKind::kDraw) {
      record.termination = "draw_rule";
      break;
    }
    if (half >= options.max_half_turns) {
      record.termination = "turn_limit";
      break;
    }
    const Color color = board.side_to_move();
    Bot& bot = color == Color::kWhite ? white : black;
    RecordedTurn turn;
    TurnObservation& obs = turn.observation;
    obs.color = color;
    obs.opponent_capture_square = last_capture;
    obs.own_pieces = OwnPieces(board, color);
    try {
      const Board before_opponent = left_by[static_cast<int>(color)];
      const Square sq = WithResync(bot, before_opponent, "sensing",
                                   [&] { return bot.ChooseSense(last_capture); });
      const SenseResult sense = Sense(board, sq);
      obs.sense_center = sq;
      obs.sense_result = sense;
      WithResync(bot, board, "sense update", [&] {
        bot.HandleSense(sense);
        return 0;
      });
      turn.digest = Digest(bot, board, options);
      const MoveRequest request = bot.ChooseMove();
      auto [next, move] = ApplyRequest(board, request);
      obs.own_request = move.requested;
      obs.own_taken = move.taken;
      obs.own_capture_square = move.capture_square;
      obs.own_was_illegal = move.was_illegal;
      try {
        bot.HandleMove(move);
      } catch (const InconsistentObservation& e) {
        spdlog::warn("{} lost track after moving: {}; resyncing", bot.Name(), e.what());
        bot.Resync(next);
      }
      turn.board_after = next;
      record.turns.push_back(std::move(turn));
      board = next;
      left_by[static_cast<int>(color)] = next;
      last_capture = move.capture_square;
    } catch (const std::exception& e) {
      spdlog::error("{} ({}) forfeits: {}", bot.Name(), ColorName(color), e.what());
      record.winner = Opponent(color);
      record.termination = "forfeit";
      break;
    }
  }
  return record;
}

std::vector<std::pair<size_t, size_t>> RoundRobinPairs(size_t n) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

std::vector<std::pair<size_t, size_t>> SweepPairs(size_t agents, size_t total) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < agents; ++i) {
    for (size_t j = agents; j < total; ++j) out.emplace_back(i, j);
  }
  return out;
}

uint64_t GameSeed(uint64_t seed, uint64_t pair, uint64_t game) {
  // splitmix64 over the combined key.
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (pair * 1000003ull + game + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

TournamentReport RunTournament(const std::vector<BotEntry>& bots,
                               const std::vector<std::pair<size_t, size_t>>& pairs,
                               int games_per_pair, uint64_t seed, int threads,
                               const GameOptions& options, const GameCallback& on_game) {
  if (bots.size() < 2) throw InvalidInput("a tournament needs at least two bots");
  if (games_per_pair < 0) throw InvalidInput("games per pair must be >= 0");
  for (const auto& [a, b] : pairs) {
    if (a == b || a >= bots.size() || b >= bots.size()) {
      throw InvalidInput("bad tournament pairing");
    }
  }
  const size_t total = pairs.size() * static_cast<size_t>(games_per_pair);
  std::vector<GameRecord> records(total);
  ParallelFor(total, threads, [&](size_t k) {
    const size_t p = k / static_cast<size_t>(games_per_pair);
    const int g = static_cast<int>(k % static_cast<size_t>(games_per_pair));
    const auto [a, b] = pairs[p];
    const uint64_t game_seed = GameSeed(seed, p, static_cast<uint64_t>(g));
    auto first = bots[a].make(GameSeed(game_seed, 1, 0));
    auto second = bots[b].make(GameSeed(game_seed, 2, 0));
    records[k] = g % 2 == 0 ? PlayGame(*first, *second, game_seed, options)
                            : PlayGame(*second, *first, game_seed, options);
    // Entry names are authoritative (several entries may share a bot type).
    if (g % 2 == 0) {
      records[k].white = bots[a].name;
      records[k].black = bots[b].name;
    } else {
      records[k].white = bots[b].name;
      records[k].black = bots[a].name;
    }
  });

  TournamentReport report;
  report.seed = seed;
  report.games_per_pair = games_per_pair;
  std::vector<BotTotals> totals(bots.size());
  for (size_t p = 0; p < pairs.size(); ++p) {
    const auto [a, b] = pairs[p];
    PairResult r;
    r.first = bots[a].name;
    r.second = bots[b].name;
    for (int g = 0; g < games_per_pair; ++g) {
      const size_t k = p * static_cast<size_t>(games_per_pair) + static_cast<size_t>(g);
      const GameRecord& rec = records[k];
      const Color first_color = g % 2 == 0 ? Color::kWhite : Color::kBlack;
      ++r.games;
      if (first_color == Color::kWhite) ++r.first_as_white;
      ++totals[a].games;
      ++totals[b].games;
      if (!rec.winner) {
        ++r.draws;
        ++totals[a].draws;
        ++totals[b].draws;
      } else if (*rec.winner == first_color) {
        ++r.first_wins;
        ++totals[a].wins;
        ++totals[b].losses;
      } else {
        ++r.second_wins;
        ++totals[b].wins;
        ++totals[a].losses;
      }
      report.terminations.push_back(rec.termination);
      if (on_game) on_game(p, g, rec);
    }
    report.pairs.push_back(r);
  }
  for (size_t i = 0; i < bots.size(); ++i) {
    if (totals[i].games > 0) report.totals.emplace_back(bots[i].name, totals[i]);
  }
  return report;
}

std::string TournamentReport::ToJson() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["games_per_pair"] = games_per_pair;
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : pairs) {
    ps.push_back({{"first", p.first},
                  {"second", p.second},
                  {"games", p.games},
                  {"first_wins", p.first_wins},
                  {"second_wins", p.second_wins},
                  {"draws", p.draws},
                  {"first_as_white", p.first_as_white},
                  {"first_win_pct", 100.0 * p.FirstWinRate()},
                  {"second_win_pct", 100.0 * p.SecondWinRate()}});
  }
  j["pairs"] = ps;
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& [name, t] : totals) {
    ts.push_back({{"bot", name},
                  {"games", t.games},
                  {"wins", t.wins},
                  {"draws", t.draws},
                  {"losses", t.losses},
                  {"win_pct", 100.0 * t.WinRate()}});
  }
  j["bots"] = ts;
  std::map<std::string, int> term;
  for (const auto& t : terminations) ++term[t];
  j["terminations"] = term;
  return j.dump(2);
}

std::string TournamentReport::ToText() const {
  size_t w = 6;
  for (const auto& p : pairs) w = std::max({w, p.first.size(), p.second.size()});
  std::string out = fmt::format("{:<{}}  {:<{}}  {:>5}  {:>5}  {:>5}  {:>5}  {:>7}\n", "first", w,
                                "second", w, "games", "wins", "loss", "draw", "win%");
  for (const auto& p : pairs) {
    out += fmt::format("{:<{}}  {:<{}}  {:>5}  {:>5}  {:>5}  {:>5}  {:>7.1f}\n", p.first, w,
                       p.second, w, p.games, p.first_wins, p.second_wins, p.draws,
                       100.0 * p.FirstWinRate());
  }
  out += "\n";
  out += fmt::format("{:<{}}  {:>5}  {:>5}  {:>5}  {:>5}  {:>7}\n", "bot", w, "games", "wins",
                     "loss", "draw", "win%");
  for (const auto& [name, t] : totals) {
    out += fmt::format("{:<{}}  {:>5}  {:>5}  {:>5}  {:>5}  {:>7.1f}\n", name, w, t.games, t.wins,
                       t.losses, t.draws, 100.0 * t.WinRate());
  }
  return out;
}

}  // namespace rbc
