#include "rbc/bots.h"

#include <algorithm>

#include "rbc/errors.h"

namespace rbc {

namespace {

Square Mirror(Square sq) { return Square::At(sq.file(), 7 - sq.rank()); }

uint8_t CornerRight(Square sq) {
  switch (sq.index()) {
    case 0: return kWhiteQueenside;
    case 7: return kWhiteKingside;
    case 56: return kBlackQueenside;
    case 63: return kBlackKingside;
    default: return 0;
  }
}

Square RandomInterior(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(1, 6);
  const int file = d(rng);
  const int rank = d(rng);
  return Square::At(file, rank);
}

}  // namespace

void OwnView::Reset(Color color) {
  color_ = color;
  board_ = OwnPieces(Board::Initial(), color);
  board_.set_castling(color == Color::kWhite ? (kWhiteKingside | kWhiteQueenside)
                                             : (kBlackKingside | kBlackQueenside));
}

void OwnView::OpponentCaptured(std::optional<Square> square) {
  if (!square) return;
  board_.SetPiece(*square, std::nullopt);
  board_.set_castling(board_.castling() & ~CornerRight(*square));
}

void OwnView::OwnMove(const MoveOutcome& outcome) {
  const MoveRequest& m = outcome.taken;
  if (m.is_pass()) return;
  auto piece = board_.PieceAt(m.from());
  if (!piece) return;
  Piece placed = *piece;
  if (piece->type == PieceType::kPawn && (m.to().rank() == 0 || m.to().rank() == 7)) {
    placed.type = m.promotion().value_or(PieceType::kQueen);
  }
  board_.SetPiece(m.from(), std::nullopt);
  board_.SetPiece(m.to(), placed);
  uint8_t rights = board_.castling() & ~CornerRight(m.from());
  if (piece->type == PieceType::kKing) {
    rights &= color_ == Color::kWhite ? ~(kWhiteKingside | kWhiteQueenside)
                                      : ~(kBlackKingside | kBlackQueenside);
    const int df = m.to().file() - m.from().file();
    if (df == 2 || df == -2) {
      const int rank = m.from().rank();
      const Square rook_from = Square::At(df > 0 ? 7 : 0, rank);
      const Square rook_to = Square::At(df > 0 ? 5 : 3, rank);
      board_.SetPiece(rook_to, board_.PieceAt(rook_from));
      board_.SetPiece(rook_from, std::nullopt);
    }
  }
  board_.set_castling(rights);
}

std::vector<MoveRequest> OwnView::PossibleMoves() const {
  Board b = board_;
  b.set_side_to_move(color_);
  b.set_en_passant(std::nullopt);
  std::vector<MoveRequest> moves = PseudoLegalMoves(b);
  const int dir = color_ == Color::kWhite ? 1 : -1;
  for (int i = 0; i < 64; ++i) {
    const Square sq(i);
    const auto p = b.PieceAt(sq);
    if (!p || p->type != PieceType::kPawn) continue;
    const int rank = sq.rank() + dir;
    for (int df : {-1, 1}) {
      const int file = sq.file() + df;
      if (!Square::OnBoard(file, rank)) continue;
      const Square to = Square::At(file, rank);
      if (b.PieceAt(to)) continue;
      moves.emplace_back(sq, to);
    }
  }
  moves.push_back(MoveRequest::Pass());
  return moves;
}

void RandomBot::NewGame(Color color, const std::string&) { view_.Reset(color); }

Square RandomBot::ChooseSense(std::optional<Square> opponent_capture) {
  view_.OpponentCaptured(opponent_capture);
  return RandomInterior(rng_);
}

MoveRequest RandomBot::ChooseMove() {
  const auto moves = view_.PossibleMoves();
  std::uniform_int_distribution<size_t> d(0, moves.size() - 1);
  return moves[d(rng_)];
}

const std::vector<std::vector<std::string>>& AttackerBot::Lines() {
  static const std::vector<std::vector<std::string>> lines = {
      {"e2e4", "f1c4", "d1h5", "h5f7", "f7e8"},
      {"b1c3", "c3b5", "b5d6", "d6e8"},
      {"b1c3", "c3e4", "e4f6", "f6e8"},
      {"g1h3", "h3f4", "f4h5", "h5f6", "f6e8"},
  };
  return lines;
}

void AttackerBot::NewGame(Color color, const std::string&) {
  color_ = color;
  view_.Reset(color);
  enemy_king_ = color == Color::kWhite ? Square::Parse("e8") : Square::Parse("e1");
  king_seen_ = false;
  line_ = 0;
  step_ = 0;
  pending_.reset();
}

Square AttackerBot::ChooseSense(std::optional<Square> opponent_capture) {
  view_.OpponentCaptured(opponent_capture);
  // The interior square nearest the expected king position.
  const int file = std::clamp(enemy_king_.file(), 1, 6);
  const int rank = std::clamp(enemy_king_.rank(), 1, 6);
  return Square::At(file, rank);
}

void AttackerBot::HandleSense(const SenseResult& result) {
  king_seen_ = false;
  for (const SenseCell& c : result.cells) {
    if (c.piece && c.piece->color != color_ && c.piece->type == PieceType::kKing) {
      enemy_king_ = c.square;
      king_seen_ = true;
    }
  }
}

MoveRequest AttackerBot::ChooseMove() {
  pending_.reset();
  if (king_seen_) {
    Board b = view_.board();
    b.set_side_to_move(color_);
    b.SetPiece(enemy_king_, Piece{Opponent(color_), PieceType::kKing});
    for (const MoveRequest& m : PseudoLegalMoves(b)) {
      if (m.to() == enemy_king_) return m;
    }
  }
  const auto& lines = Lines();
  while (line_ < lines.size()) {
    if (step_ < lines[line_].size()) {
      MoveRequest m = MoveRequest::Parse(lines[line_][step_]);
      if (color_ == Color::kBlack) m = MoveRequest(Mirror(m.from()), Mirror(m.to()));
      const auto p = view_.board().PieceAt(m.from());
      if (p && p->color == color_) {
        pending_ = m;
        return m;
      }
    }
    ++line_;
    step_ = 0;
  }
  const auto moves = view_.PossibleMoves();
  std::uniform_int_distribution<size_t> d(0, moves.size() - 1);
  return moves[d(rng_)];
}

void AttackerBot::HandleMove(const MoveOutcome& outcome) {
  view_.OwnMove(outcome);
  if (!pending_) return;
  if (outcome.was_illegal) {
    // Refuted: the next line starts over from whatever is left.
    ++line_;
    step_ = 0;
  } else {
    ++step_;
  }
  pending_.reset();
}

void TroutBot::NewGame(Color color, const std::string&) {
  color_ = color;
  set_ = InformationSet::Initial(color, cap_);
  first_turn_ = true;
}

Square TroutBot::ChooseSense(std::optional<Square> opponent_capture) {
  if (!(first_turn_ && color_ == Color::kWhite)) {
    set_ = ExpandOpponent(set_, opponent_capture);
  }
  first_turn_ = false;
  const std::vector<double> w(set_.size(), 1.0 / static_cast<double>(set_.size()));
  return rbc::ChooseSense(set_.boards(), w, 100);
}

void TroutBot::HandleSense(const SenseResult& result) { set_ = FilterSense(set_, result); }

MoveRequest TroutBot::ChooseMove() {
  std::uniform_int_distribution<size_t> d(0, set_.size() - 1);
  return evaluator_.BestMove(set_.boards()[d(rng_)]);
}

void TroutBot::HandleMove(const MoveOutcome& outcome) { set_ = FilterOwnMove(set_, outcome); }

void TroutBot::Resync(const Board& truth) { set_ = InformationSet({truth}, cap_); }

}  // namespace rbc
