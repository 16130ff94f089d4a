#include <gtest/gtest.h>

#include "rbc/board.h"
#include "rbc/errors.h"
#include "rbc/rules.h"
#include "test_util.h"

using namespace rbc;

namespace {

MoveOutcome Apply(const std::string& fen, const std::string& uci, Board* next = nullptr) {
  auto [b, m] = ApplyRequest(Board::FromFen(fen), MoveRequest::Parse(uci));
  if (next) *next = b;
  return m;
}

const char* kInitial = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

}  // namespace

TEST(Board, FenRoundTrip) {
  for (const char* fen : {kInitial, "r3k2r/8/8/3pP3/8/8/8/R3K2R w Kq d6 7 31",
                          "8/8/8/8/8/8/8/k6K b - - 49 100"}) {
    EXPECT_EQ(Board::FromFen(fen).Fen(), fen);
  }
  EXPECT_THROW(Board::FromFen("not a fen"), ParseError);
}

TEST(Board, CanonicalOrderIsTotal) {
  const Board a = Board::Initial();
  Board b = a;
  b.set_progress_counter(1);
  EXPECT_NE(a, b);
  EXPECT_TRUE((a < b) != (b < a));
}

TEST(Rules, OrdinaryMove) {
  const MoveOutcome m = Apply(kInitial, "e2e4");
  EXPECT_EQ(m.taken.Uci(), "e2e4");
  EXPECT_FALSE(m.capture_square);
  EXPECT_FALSE(m.was_illegal);
}

TEST(Rules, SlideStopsAtFirstEnemyPiece) {
  const MoveOutcome m = Apply("4k3/8/8/p7/8/8/8/R3K3 w - - 0 1", "a1a8");
  EXPECT_EQ(m.taken.Uci(), "a1a5");
  ASSERT_TRUE(m.capture_square);
  EXPECT_EQ(m.capture_square->Name(), "a5");
  EXPECT_TRUE(m.was_illegal);
}

TEST(Rules, BlockedByOwnPieceBecomesPass) {
  const MoveOutcome m = Apply(kInitial, "b1d2");
  EXPECT_TRUE(m.taken.is_pass());
  EXPECT_TRUE(m.was_illegal);
}

TEST(Rules, KingCaptureWins) {
  Board next;
  Apply("4k3/8/8/8/8/8/8/R3K2R w - - 0 1", "a1a8", &next);
  EXPECT_EQ(GetOutcome(next).kind, OutcomeKind::kOngoing);
  Apply("4k3/8/8/8/8/8/8/4K2R w - - 0 1", "h1h8", &next);
  EXPECT_EQ(GetOutcome(next).kind, OutcomeKind::kOngoing);
  const MoveOutcome m = Apply("4k3/8/8/8/8/8/8/4R1K1 w - - 0 1", "e1e8", &next);
  EXPECT_EQ(m.capture_square->Name(), "e8");
  EXPECT_EQ(GetOutcome(next), Outcome::Win(Color::kWhite));
}

TEST(Rules, CastlingThroughCheckIsAllowed) {
  // Black rook on f8 attacks f1; RBC ignores check.
  Board next;
  const MoveOutcome m = Apply("4kr2/8/8/8/8/8/8/4K2R w K - 0 1", "e1g1", &next);
  EXPECT_FALSE(m.was_illegal);
  EXPECT_EQ(next.Fen(), "4kr2/8/8/8/8/8/8/5RK1 b - - 0 1");
}

TEST(Rules, CastlingWithBlockedPathIsPass) {
  const MoveOutcome m = Apply("4k3/8/8/8/8/8/8/RN2K3 w Q - 0 1", "e1c1");
  EXPECT_TRUE(m.taken.is_pass());
  EXPECT_TRUE(m.was_illegal);
}

TEST(Rules, PromotionDefaultsToQueen) {
  Board next;
  Apply("4k3/P7/8/8/8/8/8/4K3 w - - 0 1", "a7a8", &next);
  EXPECT_EQ(next.PieceAt(Square::Parse("a8")), (Piece{Color::kWhite, PieceType::kQueen}));
  Apply("4k3/P7/8/8/8/8/8/4K3 w - - 0 1", "a7a8n", &next);
  EXPECT_EQ(next.PieceAt(Square::Parse("a8")), (Piece{Color::kWhite, PieceType::kKnight}));
}

TEST(Rules, EnPassantReportsCapturedPawnSquare) {
  const MoveOutcome m = Apply("4k3/8/8/3pP3/8/8/8/4K3 w - d6 0 1", "e5d6");
  ASSERT_TRUE(m.capture_square);
  EXPECT_EQ(m.capture_square->Name(), "d5");
}

TEST(Rules, ProgressCounterCountsFullTurns) {
  Board b = Board::FromFen("4k3/8/8/8/8/8/8/4K1N1 w - - 0 1");
  b = ApplyRequest(b, MoveRequest::Parse("g1f3")).first;
  EXPECT_EQ(b.progress_counter(), 0);
  b = ApplyRequest(b, MoveRequest::Parse("e8d8")).first;
  EXPECT_EQ(b.progress_counter(), 1);
  EXPECT_EQ(b.fullmove_number(), 2);
}

TEST(Rules, DrawAtFiftyTurns) {
  EXPECT_EQ(GetOutcome(Board::FromFen("4k3/8/8/8/8/8/8/4K3 w - - 50 80")), Outcome::Draw());
  EXPECT_EQ(GetOutcome(Board::FromFen("4k3/8/8/8/8/8/8/4K3 w - - 49 80")),
            Outcome::Ongoing());
  EXPECT_EQ(GetOutcome(Board::FromFen("8/8/8/8/8/8/8/4K3 w - - 0 1")),
            Outcome::Win(Color::kWhite));
}

TEST(Rules, SenseWindow) {
  const SenseResult s = Sense(Board::Initial(), Square::Parse("e2"));
  ASSERT_EQ(s.cells.size(), 9u);
  int pieces = 0;
  for (const auto& c : s.cells) pieces += c.piece.has_value();
  EXPECT_EQ(pieces, 6);
  EXPECT_EQ(Sense(Board::Initial(), Square::Parse("a1")).cells.size(), 4u);
  for (const auto& c : Sense(Board(), Square::Parse("d4")).cells) EXPECT_FALSE(c.piece);
}

TEST(Rules, InitialSuccessorsMatchOracle) {
  EXPECT_EQ(SuccessorOutcomes(Board::Initial()).size(), 21u);
  EXPECT_EQ(oracle::Successors(oracle::FromFen(kInitial)).size(), 21u);
  EXPECT_TRUE(testutil::CompareSuccessors(Board::Initial()));
}

TEST(Rules, TerminalBoardHasNoSuccessors) {
  EXPECT_TRUE(SuccessorOutcomes(Board::FromFen("8/8/8/8/8/8/8/4K3 b - - 0 1")).empty());
}

TEST(Rules, KingWithOnlyAttackedSquaresStillMoves) {
  const Board b = Board::FromFen("k7/8/8/8/8/8/1r6/K1r5 w - - 0 1");
  // Kxb2 captures; both other squares are attacked, but no stalemate in RBC.
  EXPECT_EQ(SuccessorOutcomes(b).size(), 4u);
}

TEST(Rules, SpecialPositionsMatchOracle) {
  for (const char* fen : {
           "r3k2r/pppppppp/8/8/8/8/PPPPPPPP/R3K2R w KQkq - 0 1",
           "r3k2r/1P4P1/8/3pP3/8/8/1p4p1/R3K2R w KQkq d6 3 20",
           "r3k2r/1P4P1/8/8/3Pp3/8/1p4p1/R3K2R b KQkq d3 3 20",
           "1n2k1n1/P6P/8/2q1Q3/8/8/p6p/1N2K1N1 w - - 10 40",
           "4k3/8/8/3b4/8/1Q3R2/8/4K3 w - - 0 1",
       }) {
    std::string failure;
    EXPECT_EQ(testutil::CompareAdjudication(Board::FromFen(fen), &failure), 0) << failure;
    EXPECT_TRUE(testutil::CompareSuccessors(Board::FromFen(fen))) << fen;
  }
}

TEST(Rules, RandomPrefixesMatchOracle) {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    for (const Board& b : testutil::RandomLine(seed, 6)) {
      if (GetOutcome(b).kind != OutcomeKind::kOngoing) continue;
      std::string failure;
      ASSERT_EQ(testutil::CompareAdjudication(b, &failure), 0) << failure;
      ASSERT_TRUE(testutil::CompareSuccessors(b)) << b.Fen();
    }
  }
}

TEST(Rules, ReplayReproducesBoard) {
  std::mt19937_64 rng(5);
  Board b = Board::Initial();
  std::vector<MoveOutcome> outcomes;
  for (int i = 0; i < 40 && GetOutcome(b).kind == OutcomeKind::kOngoing; ++i) {
    auto [next, m] = ApplyRequest(b, testutil::RandomRequest(b, rng));
    outcomes.push_back(m);
    b = next;
  }
  Board r = Board::Initial();
  for (const auto& m : outcomes) r = ApplyRequest(r, m.taken).first;
  EXPECT_EQ(r, b);
}

TEST(Rules, MalformedRequestsRejected) {
  EXPECT_THROW(MoveRequest::Parse("e9e4"), InvalidInput);
  EXPECT_THROW(MoveRequest::Parse("e2"), InvalidInput);
  EXPECT_THROW(Square::Parse("z1"), InvalidInput);
}
