#include "rbc/infoset.h"

#include <algorithm>

#include "rbc/parallel.h"

namespace rbc {

namespace {

InformationSet Build(std::vector<Board> boards, const InformationSet& from) {
  return InformationSet(std::move(boards), from.cap(), from.truncated());
}

}  // namespace

InformationSet::InformationSet(std::vector<Board> boards, size_t cap,
                               bool truncated)
    : boards_(std::move(boards)), cap_(cap), truncated_(truncated) {
  if (cap_ == 0) throw InvalidInput("information set cap must be >= 1");
  std::sort(boards_.begin(), boards_.end());
  boards_.erase(std::unique(boards_.begin(), boards_.end()), boards_.end());
  if (boards_.size() > cap_) {
    boards_.resize(cap_);
    truncated_ = true;
  }
}

InformationSet InformationSet::Initial(Color /*player*/, size_t cap) {
  return InformationSet({Board::Initial()}, cap);
}

bool InformationSet::Contains(const Board& b) const {
  return std::binary_search(boards_.begin(), boards_.end(), b);
}

std::optional<size_t> InformationSet::IndexOf(const Board& b) const {
  auto it = std::lower_bound(boards_.begin(), boards_.end(), b);
  if (it == boards_.end() || *it != b) return std::nullopt;
  return static_cast<size_t>(it - boards_.begin());
}

InformationSet ExpandOpponent(const InformationSet& set,
                              std::optional<Square> observed_capture,
                              int threads) {
  const auto& boards = set.boards();
  std::vector<std::vector<Board>> parts(boards.size());
  ParallelFor(boards.size(), threads, [&](size_t i) {
    for (auto& s : SuccessorOutcomes(boards[i])) {
      if (s.outcome.capture_square == observed_capture) {
        parts[i].push_back(s.board);
      }
    }
  });
  std::vector<Board> merged;
  size_t total = 0;
  for (const auto& p : parts) total += p.size();
  merged.reserve(total);
  for (auto& p : parts) merged.insert(merged.end(), p.begin(), p.end());
  if (merged.empty()) {
    throw InconsistentObservation(
        "no board allows the observed opponent capture " +
        (observed_capture ? observed_capture->Name() : std::string("(none)")));
  }
  return Build(std::move(merged), set);
}

InformationSet FilterSense(const InformationSet& set, const SenseResult& result) {
  std::vector<Board> kept;
  for (const auto& b : set.boards()) {
    bool match = true;
    for (const auto& cell : result.cells) {
      if (b.PieceAt(cell.square) != cell.piece) {
        match = false;
        break;
      }
    }
    if (match) kept.push_back(b);
  }
  if (kept.empty()) {
    throw InconsistentObservation("no board matches the sense at " +
                                  result.center.Name());
  }
  return Build(std::move(kept), set);
}

InformationSet FilterOwnMove(const InformationSet& set,
                             const MoveOutcome& outcome) {
  std::vector<Board> kept;
  for (const auto& b : set.boards()) {
    if (GetOutcome(b).kind != OutcomeKind::kOngoing) continue;
    auto [next, got] = ApplyRequest(b, outcome.requested);
    if (got.taken == outcome.taken &&
        got.capture_square == outcome.capture_square &&
        got.was_illegal == outcome.was_illegal) {
      kept.push_back(next);
    }
  }
  if (kept.empty()) {
    throw InconsistentObservation("no board reproduces the move result of " +
                                  outcome.requested.Uci());
  }
  return Build(std::move(kept), set);
}

Board OwnPieces(const Board& board, Color color) {
  Board out;
  for (int i = 0; i < 64; ++i) {
    auto p = board.PieceAt(Square(i));
    if (p && p->color == color) out.SetPiece(Square(i), p);
  }
  out.set_side_to_move(color);
  return out;
}

}  // namespace rbc
