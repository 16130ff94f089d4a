#include "rbc/data.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "rbc/errors.h"
#include "rbc/parallel.h"

namespace rbc {

namespace {

using Json = nlohmann::json;

Json OptSquare(const std::optional<Square>& sq) {
  return sq ? Json(sq->Name()) : Json(nullptr);
}

Json OptMove(const std::optional<MoveRequest>& m) {
  return m ? Json(m->Uci()) : Json(nullptr);
}

Json TurnJson(const RecordedTurn& t) {
  const TurnObservation& o = t.observation;
  Json j;
  j["color"] = ColorName(o.color);
  j["opp_capture"] = OptSquare(o.opponent_capture_square);
  j["sense"] = OptSquare(o.sense_center);
  if (o.sense_result) {
    Json cells = Json::array();
    for (const SenseCell& c : o.sense_result->cells) {
      cells.push_back({c.square.Name(),
                       c.piece ? Json(std::string(1, c.piece->Symbol())) : Json(nullptr)});
    }
    j["sense_result"] = {{"center", o.sense_result->center.Name()}, {"cells", cells}};
  } else {
    j["sense_result"] = nullptr;
  }
  j["own_pieces"] = o.own_pieces.Fen();
  j["request"] = OptMove(o.own_request);
  j["taken"] = OptMove(o.own_taken);
  j["capture"] = OptSquare(o.own_capture_square);
  j["illegal"] = o.own_was_illegal;
  j["board_after"] = t.board_after.Fen();
  Json set = {{"size", t.digest.size}, {"truncated", t.digest.truncated}};
  if (t.digest.contains_true) set["contains_true"] = *t.digest.contains_true;
  if (t.digest.fens) set["fens"] = *t.digest.fens;
  j["set"] = set;
  return j;
}

const Json& Field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing required field '") + key + "'");
  return *it;
}

std::optional<Square> ParseOptSquare(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return Square::Parse(j.get<std::string>());
}

std::optional<MoveRequest> ParseOptMove(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return MoveRequest::Parse(j.get<std::string>());
}

RecordedTurn TurnFromJson(const Json& j) {
  RecordedTurn t;
  TurnObservation& o = t.observation;
  o.color = ParseColor(Field(j, "color").get<std::string>());
  o.opponent_capture_square = ParseOptSquare(Field(j, "opp_capture"));
  o.sense_center = ParseOptSquare(Field(j, "sense"));
  const Json& sr = Field(j, "sense_result");
  if (!sr.is_null()) {
    SenseResult result;
    result.center = Square::Parse(Field(sr, "center").get<std::string>());
    for (const Json& cell : Field(sr, "cells")) {
      SenseCell c;
      c.square = Square::Parse(cell.at(0).get<std::string>());
      if (!cell.at(1).is_null()) {
        const std::string sym = cell.at(1).get<std::string>();
        if (sym.size() != 1 || !Piece::FromSymbol(sym[0])) {
          throw ParseError("bad piece symbol '" + sym + "'");
        }
        c.piece = Piece::FromSymbol(sym[0]);
      }
      result.cells.push_back(c);
    }
    o.sense_result = std::move(result);
  }
  o.own_pieces = Board::FromFen(Field(j, "own_pieces").get<std::string>());
  o.own_request = ParseOptMove(Field(j, "request"));
  o.own_taken = ParseOptMove(Field(j, "taken"));
  o.own_capture_square = ParseOptSquare(Field(j, "capture"));
  o.own_was_illegal = Field(j, "illegal").get<bool>();
  t.board_after = Board::FromFen(Field(j, "board_after").get<std::string>());
  const Json& set = Field(j, "set");
  t.digest.size = Field(set, "size").get<size_t>();
  t.digest.truncated = Field(set, "truncated").get<bool>();
  if (set.contains("contains_true")) t.digest.contains_true = set["contains_true"].get<bool>();
  if (set.contains("fens")) t.digest.fens = set["fens"].get<std::vector<std::string>>();
  return t;
}

MoveOutcome OwnOutcome(const TurnObservation& o) {
  MoveOutcome out;
  out.requested = *o.own_request;
  out.taken = o.own_taken.value_or(MoveRequest::Pass());
  out.capture_square = o.own_capture_square;
  out.was_illegal = o.own_was_illegal;
  return out;
}

}  // namespace

ObservationHistory GameRecord::History(Color player) const {
  ObservationHistory h;
  h.opponent_name = Name(Opponent(player));
  for (const RecordedTurn& t : turns) {
    if (t.observation.color == player) h.turns.push_back(t.observation);
  }
  return h;
}

std::string GameToJson(const GameRecord& game) {
  Json j;
  j["v"] = kRecordVersion;
  j["white"] = game.white;
  j["black"] = game.black;
  j["winner"] = game.winner ? Json(ColorName(*game.winner)) : Json(nullptr);
  j["termination"] = game.termination;
  j["seed"] = game.seed;
  Json turns = Json::array();
  for (const RecordedTurn& t : game.turns) turns.push_back(TurnJson(t));
  j["turns"] = std::move(turns);
  return j.dump();
}

GameRecord GameFromJson(const std::string& line, long line_number) {
  try {
    const Json j = Json::parse(line);
    if (!j.is_object()) throw ParseError("game record must be a JSON object");
    const int version = Field(j, "v").get<int>();
    if (version != kRecordVersion) {
      throw ParseError("unsupported record version " + std::to_string(version));
    }
    GameRecord g;
    g.white = Field(j, "white").get<std::string>();
    g.black = Field(j, "black").get<std::string>();
    const Json& winner = Field(j, "winner");
    if (!winner.is_null()) g.winner = ParseColor(winner.get<std::string>());
    g.termination = Field(j, "termination").get<std::string>();
    g.seed = Field(j, "seed").get<uint64_t>();
    for (const Json& t : Field(j, "turns")) g.turns.push_back(TurnFromJson(t));
    return g;
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_number);
  } catch (const Json::exception& e) {
    throw ParseError(e.what(), line_number);
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), line_number);
  }
}

void AppendGame(std::ostream& out, const GameRecord& game) {
  out << GameToJson(game) << '\n';
}

void WriteGames(const std::string& path, const std::vector<GameRecord>& games) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path);
  for (const GameRecord& g : games) AppendGame(out, g);
}

std::vector<GameRecord> ReadGames(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::vector<GameRecord> games;
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    games.push_back(GameFromJson(line, n));
  }
  return games;
}

std::vector<GameRecord> ReadGameDir(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rbcl") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<GameRecord> games;
  for (const std::string& f : files) {
    auto part = ReadGames(f);
    games.insert(games.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  return games;
}

void VerifyReplay(const GameRecord& game) {
  Board board = Board::Initial();
  std::optional<Square> last_capture;
  for (size_t i = 0; i < game.turns.size(); ++i) {
    const RecordedTurn& t = game.turns[i];
    const TurnObservation& o = t.observation;
    const std::string where = "turn " + std::to_string(i);
    if (o.color != board.side_to_move()) throw CorruptRecord(where + ": wrong side to move");
    if (o.opponent_capture_square != last_capture) {
      throw CorruptRecord(where + ": opponent capture does not match the previous move");
    }
    if (o.sense_center && (!o.sense_result || Sense(board, *o.sense_center) != *o.sense_result)) {
      throw CorruptRecord(where + ": sense result does not match the board");
    }
    if (!(o.own_pieces == OwnPieces(board, o.color))) {
      throw CorruptRecord(where + ": own pieces do not match the board");
    }
    if (!o.own_request) throw CorruptRecord(where + ": missing move");
    auto [next, outcome] = ApplyRequest(board, *o.own_request);
    if (!(OwnOutcome(o) == outcome)) {
      throw CorruptRecord(where + ": move outcome does not match the rules");
    }
    if (!(next == t.board_after)) throw CorruptRecord(where + ": board mismatch after move");
    board = next;
    last_capture = outcome.capture_square;
  }
}

ObservationHistory AnchorHistory(const ObservationHistory& full, size_t turn) {
  if (turn >= full.turns.size()) throw InvalidInput("anchor turn out of range");
  ObservationHistory h;
  h.opponent_name = full.opponent_name;
  h.turns.assign(full.turns.begin(), full.turns.begin() + static_cast<long>(turn) + 1);
  TurnObservation& last = h.turns.back();
  last.own_request.reset();
  last.own_taken.reset();
  last.own_capture_square.reset();
  last.own_was_illegal = false;
  return h;
}

size_t ForEachDecision(const GameRecord& game, Color player, size_t cap, int threads,
                       const std::function<void(const DecisionView&)>& fn) {
  const ObservationHistory history = game.History(player);
  InformationSet set = InformationSet::Initial(player, cap);
  Board truth = Board::Initial();
  bool ever_truncated = false;
  size_t own_turn = 0;
  for (size_t i = 0; i < game.turns.size(); ++i) {
    const RecordedTurn& t = game.turns[i];
    const TurnObservation& o = t.observation;
    if (o.color != player) {
      truth = t.board_after;
      continue;
    }
    bool decided = false;
    try {
      if (i > 0) set = ExpandOpponent(set, o.opponent_capture_square, threads);
      ever_truncated = ever_truncated || set.truncated();
      if (o.sense_result) set = FilterSense(set, *o.sense_result);
      fn(DecisionView{game, player, history, own_turn, set, truth});
      decided = true;
      if (o.own_request) set = FilterOwnMove(set, OwnOutcome(o));
    } catch (const InconsistentObservation& e) {
      if (!ever_truncated) {
        throw CorruptRecord("game replay for " + ColorName(player) + " at turn " +
                            std::to_string(i) + ": " + e.what());
      }
      spdlog::debug("{} set lost the true board at turn {}", ColorName(player), i);
      return history.turns.size() - own_turn - (decided ? 1 : 0);
    }
    truth = t.board_after;
    ++own_turn;
  }
  return 0;
}

std::vector<TripletRecord> BuildTriplets(const GameRecord& game, Color player, size_t cap,
                                         TripletStats* stats, int threads) {
  std::vector<TripletRecord> out;
  std::shared_ptr<const ObservationHistory> history;
  TripletStats local;
  local.clipped_skipped += ForEachDecision(game, player, cap, threads, [&](const DecisionView& d) {
    if (!history) history = std::make_shared<const ObservationHistory>(d.history);
    auto idx = d.set.IndexOf(d.truth);
    if (idx && d.set.size() == 1) {
      ++local.singleton_skipped;
      return;
    }
    if (!idx) {
      if (!d.set.truncated()) throw CorruptRecord("true board missing from an untruncated set");
      ++local.clipped_skipped;
      spdlog::debug("skipping turn {} of {}: true board clipped from the set", d.turn,
                    ColorName(player));
      return;
    }
    TripletRecord r;
    r.history = history;
    r.turn = d.turn;
    r.positive = d.truth;
    r.player = player;
    r.negatives.reserve(d.set.size() - 1);
    for (size_t k = 0; k < d.set.size(); ++k) {
      if (k != *idx) r.negatives.push_back(d.set.boards()[k]);
    }
    out.push_back(std::move(r));
    ++local.records;
  });
  if (stats) {
    stats->records += local.records;
    stats->singleton_skipped += local.singleton_skipped;
    stats->clipped_skipped += local.clipped_skipped;
  }
  return out;
}

std::vector<TripletRecord> BuildDataset(const std::vector<GameRecord>& games, size_t cap,
                                        TripletStats* stats, int threads) {
  std::vector<std::vector<TripletRecord>> parts(games.size());
  std::vector<TripletStats> part_stats(games.size());
  ParallelFor(games.size(), threads, [&](size_t g) {
    for (Color c : {Color::kWhite, Color::kBlack}) {
      auto recs = BuildTriplets(games[g], c, cap, &part_stats[g], 1);
      for (auto& r : recs) {
        r.game = g;
        parts[g].push_back(std::move(r));
      }
    }
  });
  std::vector<TripletRecord> out;
  for (size_t g = 0; g < games.size(); ++g) {
    for (auto& r : parts[g]) out.push_back(std::move(r));
    if (stats) {
      stats->records += part_stats[g].records;
      stats->singleton_skipped += part_stats[g].singleton_skipped;
      stats->clipped_skipped += part_stats[g].clipped_skipped;
    }
  }
  return out;
}

std::pair<std::vector<size_t>, std::vector<size_t>> SplitGames(size_t n_games,
                                                               double fraction, uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidInput("split fraction must be in [0,1]");
  std::vector<size_t> order = EpochOrder(n_games, seed, 0);
  const auto n_train = static_cast<size_t>(std::llround(fraction * static_cast<double>(n_games)));
  std::vector<size_t> train(order.begin(), order.begin() + static_cast<long>(n_train));
  std::vector<size_t> test(order.begin() + static_cast<long>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::vector<size_t> EpochOrder(size_t n, uint64_t seed, uint64_t epoch) {
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(epoch), static_cast<uint32_t>(epoch >> 32)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace rbc
