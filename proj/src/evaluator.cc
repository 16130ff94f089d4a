#include "rbc/evaluator.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "rbc/errors.h"

namespace rbc {

namespace {

constexpr double kKingCaptureCp = 100000.0;
constexpr double kPieceCp[] = {100, 300, 300, 500, 900, 0};

bool IsCapture(const Board& board, const MoveRequest& m) {
  return !m.is_pass() && (board.PieceAt(m.to()).has_value() ||
                          (board.en_passant() && *board.en_passant() == m.to()));
}

// Captures first, by victim value; otherwise generator order.
std::vector<MoveRequest> OrderedMoves(const Board& board) {
  std::vector<MoveRequest> moves = PseudoLegalMoves(board);
  std::stable_sort(moves.begin(), moves.end(), [&](const MoveRequest& a, const MoveRequest& b) {
    auto value = [&](const MoveRequest& m) {
      if (!IsCapture(board, m)) return -1.0;
      auto p = board.PieceAt(m.to());
      return p ? kPieceCp[static_cast<int>(p->type)] : kPieceCp[0];
    };
    return value(a) > value(b);
  });
  return moves;
}

}  // namespace

double NormalizeCentipawns(double cp) { return std::tanh(cp / 400.0); }

MoveRequest Evaluator::BestMove(const Board& board) {
  if (GetOutcome(board).kind != OutcomeKind::kOngoing) return MoveRequest::Pass();
  if (auto m = KingCaptureMove(board)) return *m;
  return SearchBestMove(board);
}

double Evaluator::Evaluate(const Board& board, const MoveRequest& move) {
  const Color me = board.side_to_move();
  const Outcome before = GetOutcome(board);
  if (before.kind == OutcomeKind::kDraw) return 0.0;
  if (before.kind == OutcomeKind::kWin) return *before.winner == me ? 1.0 : -1.0;
  const Board next = ApplyRequest(board, move).first;
  return -EvaluatePosition(next);
}

double Evaluator::EvaluatePosition(const Board& board) {
  const Outcome outcome = GetOutcome(board);
  if (outcome.kind == OutcomeKind::kDraw) return 0.0;
  if (outcome.kind == OutcomeKind::kWin) {
    return *outcome.winner == board.side_to_move() ? 1.0 : -1.0;
  }
  if (CanCaptureKing(board)) return 1.0;
  return std::clamp(SearchPosition(board), -1.0, 1.0);
}

double MaterialEvaluator::StaticCentipawns(const Board& board) {
  const Color me = board.side_to_move();
  double score = 0;
  const auto my_king = board.KingSquare(me);
  const auto their_king = board.KingSquare(Opponent(me));
  for (int i = 0; i < 64; ++i) {
    const Square sq(i);
    const auto p = board.PieceAt(sq);
    if (!p) continue;
    const double sign = p->color == me ? 1.0 : -1.0;
    double v = kPieceCp[static_cast<int>(p->type)];
    // Pieces near the enemy king are worth a little more.
    const auto target = p->color == me ? their_king : my_king;
    if (target && p->type != PieceType::kKing) {
      const int dist = std::max(std::abs(sq.file() - target->file()),
                                std::abs(sq.rank() - target->rank()));
      v += 2.0 * (7 - dist);
    }
    if (p->type == PieceType::kPawn) {
      v += 5.0 * (p->color == Color::kWhite ? sq.rank() - 1 : 6 - sq.rank());
    }
    score += sign * v;
  }
  return score;
}

double MaterialEvaluator::Negamax(const Board& board, int depth, double alpha, double beta) {
  const Outcome outcome = GetOutcome(board);
  if (outcome.kind == OutcomeKind::kDraw) return 0.0;
  if (outcome.kind == OutcomeKind::kWin) {
    return *outcome.winner == board.side_to_move() ? kKingCaptureCp : -kKingCaptureCp;
  }
  if (CanCaptureKing(board)) return kKingCaptureCp;
  if (depth == 0) return StaticCentipawns(board);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<MoveRequest> moves = OrderedMoves(board);
  moves.push_back(MoveRequest::Pass());
  for (const MoveRequest& m : moves) {
    const double v = -Negamax(ApplyRequest(board, m).first, depth - 1, -beta, -alpha);
    if (v > best) best = v;
    if (best > alpha) alpha = best;
    if (alpha >= beta) break;
  }
  return best;
}

MoveRequest MaterialEvaluator::SearchBestMove(const Board& board) {
  std::vector<MoveRequest> moves = OrderedMoves(board);
  moves.push_back(MoveRequest::Pass());
  MoveRequest best = moves.front();
  double best_v = -std::numeric_limits<double>::infinity();
  const double inf = std::numeric_limits<double>::infinity();
  for (const MoveRequest& m : moves) {
    const double v = -Negamax(ApplyRequest(board, m).first, depth_ - 1, -inf, -best_v);
    if (v > best_v) {
      best_v = v;
      best = m;
    }
  }
  return best;
}

double MaterialEvaluator::SearchPosition(const Board& board) {
  const double inf = std::numeric_limits<double>::infinity();
  const double cp = Negamax(board, depth_ - 1, -inf, inf);
  if (std::abs(cp) >= kKingCaptureCp) return cp > 0 ? 1.0 : -1.0;
  return NormalizeCentipawns(cp);
}

std::unique_ptr<Evaluator> MakeEvaluator(const std::string& spec, const UciOptions& uci) {
  if (spec == "material") return std::make_unique<MaterialEvaluator>();
  if (spec.rfind("material:", 0) == 0) {
    int depth = 0;
    try {
      depth = std::stoi(spec.substr(9));
    } catch (const std::exception&) {
      throw InvalidInput("bad evaluator depth in '" + spec + "'");
    }
    if (depth < 1) throw InvalidInput("evaluator depth must be >= 1");
    return std::make_unique<MaterialEvaluator>(depth);
  }
  if (spec == "uci") {
    UciOptions opts = uci;
    if (opts.path.empty()) {
      if (const char* env = std::getenv("RBC_ENGINE_PATH")) opts.path = env;
    }
    if (opts.path.empty()) {
      throw InvalidInput("uci evaluator needs an engine path (flag or RBC_ENGINE_PATH)");
    }
    return std::make_unique<UciEngineEvaluator>(opts);
  }
  throw InvalidInput("unknown evaluator '" + spec + "' (material|material:N|uci)");
}

}  // namespace rbc
