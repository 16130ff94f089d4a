#include "rbc/encoding.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "rbc/rules.h"

namespace rbc {

namespace {

constexpr int kQueenDirs[8][2] = {{0, 1},  {1, 1},   {1, 0},  {1, -1},
                                  {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
constexpr int kKnightJumps[8][2] = {{1, 2},   {2, 1},   {2, -1}, {1, -2},
                                    {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};

const char* kTypeNames[] = {"pawn", "knight", "bishop", "rook", "queen", "king"};

}  // namespace

int PlaneStack::PlaneCount(int channel) const {
  int n = 0;
  for (int i = 0; i < 64; ++i) n += data_[static_cast<size_t>(channel) * 64 + i] != 0.0f;
  return n;
}

int PlaneStack::Total() const {
  int n = 0;
  for (float v : data_) n += v != 0.0f;
  return n;
}

void PlaneStack::Paste(const PlaneStack& other, int offset) {
  if (offset < 0 || offset + other.channels() > channels_) {
    throw InvalidInput("PlaneStack::Paste out of range");
  }
  std::copy(other.data_.begin(), other.data_.end(),
            data_.begin() + static_cast<long>(offset) * 64);
}

Roster::Roster(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > static_cast<size_t>(kRosterSize)) {
    throw InvalidInput("roster holds at most " + std::to_string(kRosterSize) +
                       " names");
  }
}

Roster Roster::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open roster file " + path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos || line[start] == '#') continue;
    names.push_back(line.substr(start));
  }
  return Roster(std::move(names));
}

std::optional<int> Roster::IndexOf(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

PlaneStack EncodeBoard(const Board& board) {
  PlaneStack planes(kBoardChannels);
  for (int i = 0; i < 64; ++i) {
    const uint8_t code = board.Code(Square(i));
    if (code) planes.Set(code - 1, Square(i));
  }
  return planes;
}

Board DecodeBoardPlacement(const PlaneStack& planes) {
  if (planes.channels() != kBoardChannels) {
    throw InvalidInput("board stack must have 12 channels");
  }
  Board b;
  for (int c = 0; c < kBoardChannels; ++c) {
    for (int i = 0; i < 64; ++i) {
      if (planes.At(c, Square(i)) != 0.0f) b.SetPiece(Square(i), Piece::FromIndex(c));
    }
  }
  return b;
}

std::pair<int, Square> EncodeMove73(const MoveRequest& move) {
  if (move.is_pass()) throw InvalidInput("a pass has no move plane");
  const int df = move.to().file() - move.from().file();
  const int dr = move.to().rank() - move.from().rank();
  const auto promo = move.promotion();
  if (promo && *promo != PieceType::kQueen) {
    if (std::abs(dr) != 1 || std::abs(df) > 1 || *promo == PieceType::kKing ||
        *promo == PieceType::kPawn) {
      throw InvalidInput("unencodable underpromotion " + move.Uci());
    }
    const int piece = static_cast<int>(*promo) - static_cast<int>(PieceType::kKnight);
    return {64 + piece * 3 + (df + 1), move.from()};
  }
  for (int k = 0; k < 8; ++k) {
    if (df == kKnightJumps[k][0] && dr == kKnightJumps[k][1]) {
      return {56 + k, move.from()};
    }
  }
  if (df == 0 || dr == 0 || std::abs(df) == std::abs(dr)) {
    const int dist = std::max(std::abs(df), std::abs(dr));
    const int sf = (df > 0) - (df < 0), sr = (dr > 0) - (dr < 0);
    for (int d = 0; d < 8; ++d) {
      if (kQueenDirs[d][0] == sf && kQueenDirs[d][1] == sr) {
        return {d * 7 + dist - 1, move.from()};
      }
    }
  }
  throw InvalidInput("unencodable move " + move.Uci());
}

PlaneStack EncodeTurn(const TurnObservation& obs) {
  namespace tp = turn_plane;
  PlaneStack planes(kTurnChannels);
  if (obs.opponent_capture_square) {
    planes.Set(tp::kOpponentCapture, *obs.opponent_capture_square);
  }
  if (obs.own_request && !obs.own_request->is_pass()) {
    auto [plane, from] = EncodeMove73(*obs.own_request);
    planes.Set(tp::kMove + plane, from);
  }
  if (obs.own_capture_square) planes.Set(tp::kOwnCapture, *obs.own_capture_square);
  if (obs.own_was_illegal) planes.Fill(tp::kIllegal);
  for (int i = 0; i < 64; ++i) {
    auto p = obs.own_pieces.PieceAt(Square(i));
    if (p && p->color == obs.color) {
      planes.Set(tp::kOwnPieces + static_cast<int>(p->type), Square(i));
    }
  }
  if (obs.sense_center) {
    for (const auto& cell : Sense(Board(), *obs.sense_center).cells) {
      planes.Set(tp::kSenseWindow, cell.square);
    }
  }
  if (obs.sense_result) {
    for (const auto& cell : obs.sense_result->cells) {
      if (cell.piece) {
        planes.Set(tp::kSenseResult + static_cast<int>(cell.piece->type), cell.square);
      }
    }
  }
  if (obs.color == Color::kWhite) planes.Fill(tp::kColor);
  return planes;
}

PlaneStack EncodeHistory(const ObservationHistory& history, const Roster& roster) {
  PlaneStack planes(kHistoryChannels);
  const int n = static_cast<int>(history.turns.size());
  const int used = std::min(n, kHistoryTurns);
  const int pad = kHistoryTurns - used;
  for (int k = 0; k < used; ++k) {
    planes.Paste(EncodeTurn(history.turns[n - used + k]), (pad + k) * kTurnChannels);
  }
  if (history.opponent_name) {
    if (auto idx = roster.IndexOf(*history.opponent_name)) {
      planes.Fill(kHistoryTurns * kTurnChannels + *idx);
    }
  }
  return planes;
}

PlaneStack EncodePair(const ObservationHistory& history, const Board& board,
                      const Roster& roster) {
  PlaneStack planes(kPairChannels);
  planes.Paste(EncodeHistory(history, roster), 0);
  planes.Paste(EncodeBoard(board), kHistoryChannels);
  return planes;
}

std::vector<std::string> ChannelNames(int channels) {
  std::vector<std::string> board_names;
  for (int c = 0; c < kBoardChannels; ++c) {
    board_names.push_back(std::string(c < 6 ? "white_" : "black_") + kTypeNames[c % 6]);
  }
  if (channels == kBoardChannels) return board_names;

  std::vector<std::string> turn_names;
  turn_names.push_back("opponent_capture");
  for (int p = 0; p < kMovePlanes; ++p) turn_names.push_back("move_" + std::to_string(p));
  turn_names.push_back("own_capture");
  turn_names.push_back("illegal");
  for (int t = 0; t < 6; ++t) turn_names.push_back(std::string("own_") + kTypeNames[t]);
  turn_names.push_back("sense_window");
  for (int t = 0; t < 6; ++t) turn_names.push_back(std::string("sensed_") + kTypeNames[t]);
  turn_names.push_back("color");
  if (channels == kTurnChannels) return turn_names;

  std::vector<std::string> names;
  for (int k = 0; k < kHistoryTurns; ++k) {
    const std::string prefix = "turn" + std::to_string(k - kHistoryTurns + 1) + "_";
    for (const auto& n : turn_names) names.push_back(prefix + n);
  }
  for (int r = 0; r < kRosterSize; ++r) names.push_back("opponent_" + std::to_string(r));
  if (channels == kHistoryChannels) return names;
  if (channels == kPairChannels) {
    names.insert(names.end(), board_names.begin(), board_names.end());
    return names;
  }
  throw InvalidInput("no channel layout with " + std::to_string(channels) + " channels");
}

}  // namespace rbc
