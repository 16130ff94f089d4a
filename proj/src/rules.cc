#include "rbc/rules.h"

#include <algorithm>
#include <cstdlib>

namespace rbc {

namespace {

constexpr int kKnightSteps[8][2] = {{1, 2},   {2, 1},   {2, -1}, {1, -2},
                                    {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
constexpr int kKingSteps[8][2] = {{0, 1},  {1, 1},   {1, 0},  {1, -1},
                                  {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
constexpr int kRookDirs[4][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};
constexpr int kBishopDirs[4][2] = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};

int Sign(int v) { return (v > 0) - (v < 0); }

int PawnStep(Color c) { return c == Color::kWhite ? 1 : -1; }
int PawnStartRank(Color c) { return c == Color::kWhite ? 1 : 6; }
int LastRank(Color c) { return c == Color::kWhite ? 7 : 0; }
int HomeRank(Color c) { return c == Color::kWhite ? 0 : 7; }

bool IsOwn(const Board& b, Square sq, Color us) {
  auto p = b.PieceAt(sq);
  return p && p->color == us;
}
bool IsEnemy(const Board& b, Square sq, Color us) {
  auto p = b.PieceAt(sq);
  return p && p->color != us;
}

bool CastleIsPossible(const Board& b, Color us, bool kingside) {
  const int home = HomeRank(us);
  const CastlingRight right =
      us == Color::kWhite ? (kingside ? kWhiteKingside : kWhiteQueenside)
                          : (kingside ? kBlackKingside : kBlackQueenside);
  if (!b.HasCastling(right)) return false;
  if (b.PieceAt(Square::At(4, home)) != Piece{us, PieceType::kKing}) return false;
  const int rook_file = kingside ? 7 : 0;
  if (b.PieceAt(Square::At(rook_file, home)) != Piece{us, PieceType::kRook}) {
    return false;
  }
  const int lo = kingside ? 5 : 1;
  const int hi = kingside ? 6 : 3;
  for (int f = lo; f <= hi; ++f) {
    if (b.PieceAt(Square::At(f, home))) return false;
  }
  return true;
}

// Geometric adjudication of one request. Returns the move that executes
// (with the promotion piece made explicit), or nullopt for a pass.
std::optional<MoveRequest> Adjudicate(const Board& b, const MoveRequest& req) {
  if (req.is_pass()) return std::nullopt;
  const Color us = b.side_to_move();
  const auto piece = b.PieceAt(req.from());
  if (!piece || piece->color != us) return std::nullopt;

  const int ff = req.from().file(), fr = req.from().rank();
  const int tf = req.to().file(), tr = req.to().rank();
  const int df = tf - ff, dr = tr - fr;
  const bool own_target = IsOwn(b, req.to(), us);
  const bool enemy_target = IsEnemy(b, req.to(), us);
  const auto promo = req.promotion();
  const bool pawn_to_last = piece->type == PieceType::kPawn && tr == LastRank(us);
  if (promo && !pawn_to_last) return std::nullopt;

  switch (piece->type) {
    case PieceType::kPawn: {
      if (promo && (*promo == PieceType::kPawn || *promo == PieceType::kKing)) {
        return std::nullopt;
      }
      const int step = PawnStep(us);
      bool ok = false;
      if (df == 0 && dr == step && !own_target && !enemy_target) {
        ok = true;
      } else if (df == 0 && dr == 2 * step && fr == PawnStartRank(us) &&
                 !b.PieceAt(Square::At(ff, fr + step)) && !own_target &&
                 !enemy_target) {
        ok = true;
      } else if (std::abs(df) == 1 && dr == step &&
                 (enemy_target || b.en_passant() == req.to())) {
        ok = true;
      }
      if (!ok) return std::nullopt;
      if (pawn_to_last) {
        return MoveRequest(req.from(), req.to(), promo.value_or(PieceType::kQueen));
      }
      return req;
    }
    case PieceType::kKnight: {
      const int a = std::abs(df), c = std::abs(dr);
      if (((a == 1 && c == 2) || (a == 2 && c == 1)) && !own_target) return req;
      return std::nullopt;
    }
    case PieceType::kKing: {
      if (std::max(std::abs(df), std::abs(dr)) == 1) {
        return own_target ? std::nullopt : std::optional<MoveRequest>(req);
      }
      if (dr == 0 && fr == HomeRank(us) && ff == 4 && std::abs(df) == 2 &&
          CastleIsPossible(b, us, df > 0)) {
        return req;
      }
      return std::nullopt;
    }
    case PieceType::kBishop:
    case PieceType::kRook:
    case PieceType::kQueen: {
      const bool straight = df == 0 || dr == 0;
      const bool diagonal = std::abs(df) == std::abs(dr);
      if (piece->type == PieceType::kBishop && !diagonal) return std::nullopt;
      if (piece->type == PieceType::kRook && !straight) return std::nullopt;
      if (!straight && !diagonal) return std::nullopt;
      const int sf = Sign(df), sr = Sign(dr);
      for (int f = ff + sf, r = fr + sr;; f += sf, r += sr) {
        const Square sq = Square::At(f, r);
        if (sq == req.to()) {
          return own_target ? std::nullopt : std::optional<MoveRequest>(req);
        }
        if (IsEnemy(b, sq, us)) return MoveRequest(req.from(), sq);
        if (IsOwn(b, sq, us)) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

void ClearRightsAt(uint8_t& rights, Square sq) {
  switch (sq.index()) {
    case 0: rights &= ~kWhiteQueenside; break;
    case 7: rights &= ~kWhiteKingside; break;
    case 56: rights &= ~kBlackQueenside; break;
    case 63: rights &= ~kBlackKingside; break;
    default: break;
  }
}

void FinishTurn(Board& n, Color us, bool progress) {
  if (progress) {
    n.set_progress_counter(0);
  } else if (us == Color::kBlack) {
    n.set_progress_counter(n.progress_counter() + 1);
  }
  if (us == Color::kBlack) n.set_fullmove_number(n.fullmove_number() + 1);
  n.set_side_to_move(Opponent(us));
}

Board ExecutePass(const Board& b) {
  Board n = b;
  n.set_en_passant(std::nullopt);
  FinishTurn(n, b.side_to_move(), false);
  return n;
}

// Executes a move already known to be valid under RBC rules.
std::pair<Board, std::optional<Square>> Execute(const Board& b,
                                                const MoveRequest& m) {
  const Color us = b.side_to_move();
  const Piece piece = *b.PieceAt(m.from());
  Board n = b;
  std::optional<Square> capture;
  const int df = m.to().file() - m.from().file();
  const int dr = m.to().rank() - m.from().rank();

  if (b.PieceAt(m.to())) {
    capture = m.to();
  } else if (piece.type == PieceType::kPawn && df != 0) {
    // En passant: the captured pawn sits behind the destination square.
    const Square victim = Square::At(m.to().file(), m.from().rank());
    n.SetPiece(victim, std::nullopt);
    capture = victim;
  }

  n.SetPiece(m.from(), std::nullopt);
  Piece placed = piece;
  if (m.promotion()) placed.type = *m.promotion();
  n.SetPiece(m.to(), placed);

  uint8_t rights = b.castling();
  if (piece.type == PieceType::kKing) {
    if (std::abs(df) == 2) {
      const int home = HomeRank(us);
      const Square rook_from = Square::At(df > 0 ? 7 : 0, home);
      const Square rook_to = Square::At(df > 0 ? 5 : 3, home);
      n.SetPiece(rook_from, std::nullopt);
      n.SetPiece(rook_to, Piece{us, PieceType::kRook});
    }
    rights &= us == Color::kWhite ? ~(kWhiteKingside | kWhiteQueenside)
                                  : ~(kBlackKingside | kBlackQueenside);
  }
  ClearRightsAt(rights, m.from());
  ClearRightsAt(rights, m.to());
  n.set_castling(rights);

  if (piece.type == PieceType::kPawn && std::abs(dr) == 2) {
    n.set_en_passant(Square::At(m.from().file(), m.from().rank() + dr / 2));
  } else {
    n.set_en_passant(std::nullopt);
  }
  FinishTurn(n, us, capture.has_value() || piece.type == PieceType::kPawn);
  return {n, capture};
}

void AddPawnMoves(const Board& b, Square from, Color us,
                  std::vector<MoveRequest>& out) {
  const int step = PawnStep(us);
  const int f = from.file(), r = from.rank();
  const int nr = r + step;
  if (nr < 0 || nr > 7) return;
  auto emit = [&](Square to) {
    if (to.rank() == LastRank(us)) {
      for (auto t : {PieceType::kKnight, PieceType::kBishop, PieceType::kRook,
                     PieceType::kQueen}) {
        out.emplace_back(from, to, t);
      }
    } else {
      out.emplace_back(from, to);
    }
  };
  const Square one = Square::At(f, nr);
  if (!b.PieceAt(one)) {
    emit(one);
    if (r == PawnStartRank(us)) {
      const Square two = Square::At(f, nr + step);
      if (!b.PieceAt(two)) emit(two);
    }
  }
  for (int cf : {f - 1, f + 1}) {
    if (cf < 0 || cf > 7) continue;
    const Square to = Square::At(cf, nr);
    if (IsEnemy(b, to, us) || b.en_passant() == to) emit(to);
  }
}

void AddSteps(const Board& b, Square from, Color us, const int (*steps)[2],
              int count, std::vector<MoveRequest>& out) {
  for (int i = 0; i < count; ++i) {
    const int f = from.file() + steps[i][0], r = from.rank() + steps[i][1];
    if (!Square::OnBoard(f, r)) continue;
    const Square to = Square::At(f, r);
    if (!IsOwn(b, to, us)) out.emplace_back(from, to);
  }
}

void AddSlides(const Board& b, Square from, Color us, const int (*dirs)[2],
               std::vector<MoveRequest>& out) {
  for (int i = 0; i < 4; ++i) {
    int f = from.file() + dirs[i][0], r = from.rank() + dirs[i][1];
    while (Square::OnBoard(f, r)) {
      const Square to = Square::At(f, r);
      if (IsOwn(b, to, us)) break;
      out.emplace_back(from, to);
      if (b.PieceAt(to)) break;
      f += dirs[i][0];
      r += dirs[i][1];
    }
  }
}

}  // namespace

std::pair<Board, MoveOutcome> ApplyRequest(const Board& board,
                                           const MoveRequest& request) {
  if (GetOutcome(board).kind != OutcomeKind::kOngoing) {
    throw InvalidInput("ApplyRequest on a finished game: " + board.Fen());
  }
  MoveOutcome outcome;
  outcome.requested = request;
  const auto taken = Adjudicate(board, request);
  if (!taken) {
    outcome.taken = MoveRequest::Pass();
    outcome.was_illegal = !request.is_pass();
    return {ExecutePass(board), outcome};
  }
  outcome.taken = *taken;
  outcome.was_illegal =
      taken->from() != request.from() || taken->to() != request.to();
  auto [next, capture] = Execute(board, *taken);
  outcome.capture_square = capture;
  return {next, outcome};
}

SenseResult Sense(const Board& board, Square center) {
  SenseResult result{center, {}};
  result.cells.reserve(9);
  for (int r = center.rank() - 1; r <= center.rank() + 1; ++r) {
    for (int f = center.file() - 1; f <= center.file() + 1; ++f) {
      if (!Square::OnBoard(f, r)) continue;
      const Square sq = Square::At(f, r);
      result.cells.push_back({sq, board.PieceAt(sq)});
    }
  }
  return result;
}

uint64_t SenseKey(const Board& board, Square center) {
  uint64_t key = 0;
  for (int r = center.rank() - 1; r <= center.rank() + 1; ++r) {
    for (int f = center.file() - 1; f <= center.file() + 1; ++f) {
      const uint64_t code =
          Square::OnBoard(f, r) ? board.Code(Square::At(f, r)) : 15;
      key = (key << 4) | code;
    }
  }
  return key;
}

std::vector<MoveRequest> PseudoLegalMoves(const Board& board) {
  std::vector<MoveRequest> out;
  out.reserve(48);
  const Color us = board.side_to_move();
  for (int i = 0; i < 64; ++i) {
    const Square from(i);
    const auto p = board.PieceAt(from);
    if (!p || p->color != us) continue;
    switch (p->type) {
      case PieceType::kPawn: AddPawnMoves(board, from, us, out); break;
      case PieceType::kKnight: AddSteps(board, from, us, kKnightSteps, 8, out); break;
      case PieceType::kBishop: AddSlides(board, from, us, kBishopDirs, out); break;
      case PieceType::kRook: AddSlides(board, from, us, kRookDirs, out); break;
      case PieceType::kQueen:
        AddSlides(board, from, us, kBishopDirs, out);
        AddSlides(board, from, us, kRookDirs, out);
        break;
      case PieceType::kKing: {
        AddSteps(board, from, us, kKingSteps, 8, out);
        const int home = HomeRank(us);
        if (from == Square::At(4, home)) {
          if (CastleIsPossible(board, us, true)) {
            out.emplace_back(from, Square::At(6, home));
          }
          if (CastleIsPossible(board, us, false)) {
            out.emplace_back(from, Square::At(2, home));
          }
        }
        break;
      }
    }
  }
  return out;
}

std::vector<Successor> SuccessorOutcomes(const Board& board) {
  std::vector<Successor> out;
  if (GetOutcome(board).kind != OutcomeKind::kOngoing) return out;
  const auto moves = PseudoLegalMoves(board);
  out.reserve(moves.size() + 1);
  for (const auto& m : moves) {
    auto [next, capture] = Execute(board, m);
    out.push_back({next, MoveOutcome{m, m, capture, false}});
  }
  out.push_back({ExecutePass(board),
                 MoveOutcome{MoveRequest::Pass(), MoveRequest::Pass(),
                             std::nullopt, false}});
  auto key_less = [](const Successor& a, const Successor& b) {
    if (auto c = a.board <=> b.board; c != 0) return c < 0;
    if (a.outcome.capture_square != b.outcome.capture_square) {
      return a.outcome.capture_square < b.outcome.capture_square;
    }
    return a.outcome.requested < b.outcome.requested;
  };
  std::sort(out.begin(), out.end(), key_less);
  auto same = [](const Successor& a, const Successor& b) {
    return a.board == b.board &&
           a.outcome.capture_square == b.outcome.capture_square;
  };
  out.erase(std::unique(out.begin(), out.end(), same), out.end());
  return out;
}

Outcome GetOutcome(const Board& board) {
  bool white_king = false, black_king = false;
  for (int i = 0; i < 64; ++i) {
    const uint8_t c = board.Code(Square(i));
    if (c == Piece{Color::kWhite, PieceType::kKing}.Index() + 1) white_king = true;
    if (c == Piece{Color::kBlack, PieceType::kKing}.Index() + 1) black_king = true;
  }
  if (!white_king) return Outcome::Win(Color::kBlack);
  if (!black_king) return Outcome::Win(Color::kWhite);
  if (board.progress_counter() >= kDrawProgressTurns) return Outcome::Draw();
  return Outcome::Ongoing();
}

uint64_t AttackedSquares(const Board& board, Color by) {
  uint64_t mask = 0;
  auto mark = [&mask](int f, int r) {
    if (Square::OnBoard(f, r)) mask |= uint64_t{1} << (r * 8 + f);
  };
  for (int i = 0; i < 64; ++i) {
    const Square sq(i);
    const auto p = board.PieceAt(sq);
    if (!p || p->color != by) continue;
    const int f = sq.file(), r = sq.rank();
    auto slide = [&](const int (*dirs)[2]) {
      for (int d = 0; d < 4; ++d) {
        int nf = f + dirs[d][0], nr = r + dirs[d][1];
        while (Square::OnBoard(nf, nr)) {
          mark(nf, nr);
          if (board.PieceAt(Square::At(nf, nr))) break;
          nf += dirs[d][0];
          nr += dirs[d][1];
        }
      }
    };
    switch (p->type) {
      case PieceType::kPawn:
        mark(f - 1, r + PawnStep(by));
        mark(f + 1, r + PawnStep(by));
        break;
      case PieceType::kKnight:
        for (const auto& s : kKnightSteps) mark(f + s[0], r + s[1]);
        break;
      case PieceType::kKing:
        for (const auto& s : kKingSteps) mark(f + s[0], r + s[1]);
        break;
      case PieceType::kBishop: slide(kBishopDirs); break;
      case PieceType::kRook: slide(kRookDirs); break;
      case PieceType::kQueen:
        slide(kBishopDirs);
        slide(kRookDirs);
        break;
    }
  }
  return mask;
}

bool CanCaptureKing(const Board& board) {
  const auto king = board.KingSquare(Opponent(board.side_to_move()));
  if (!king) return false;
  return AttackedSquares(board, board.side_to_move()) >> king->index() & 1;
}

std::optional<MoveRequest> KingCaptureMove(const Board& board) {
  const auto king = board.KingSquare(Opponent(board.side_to_move()));
  if (!king) return std::nullopt;
  std::optional<MoveRequest> best;
  int best_value = 100;
  for (const auto& m : PseudoLegalMoves(board)) {
    if (m.to() != *king) continue;
    // Prefer the cheapest attacker; promotions collapse to the queen.
    if (m.promotion() && *m.promotion() != PieceType::kQueen) continue;
    const int value = static_cast<int>(board.PieceAt(m.from())->type);
    if (value < best_value) {
      best_value = value;
      best = m;
    }
  }
  return best;
}

}  // namespace rbc
