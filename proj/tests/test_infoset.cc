#include <gtest/gtest.h>

#include "rbc/data.h"
#include "rbc/errors.h"
#include "rbc/infoset.h"
#include "test_util.h"

using namespace rbc;

namespace {

Square Sq(const char* name) { return Square::Parse(name); }

MoveOutcome Observed(const Board& b, const char* uci) {
  return ApplyRequest(b, MoveRequest::Parse(uci)).second;
}

}  // namespace

TEST(InformationSet, InitialSets) {
  const InformationSet white = InformationSet::Initial(Color::kWhite);
  ASSERT_EQ(white.size(), 1u);
  EXPECT_EQ(white.boards()[0], Board::Initial());
  EXPECT_FALSE(white.truncated());
  EXPECT_EQ(InformationSet::Initial(Color::kBlack).boards()[0], Board::Initial());
}

TEST(InformationSet, SortsDeduplicatesAndClips) {
  std::vector<Board> boards;
  for (const auto& s : SuccessorOutcomes(Board::Initial())) boards.push_back(s.board);
  boards.push_back(boards.front());
  const InformationSet all(boards, kUnlimitedCap);
  EXPECT_EQ(all.size(), 21u);
  EXPECT_TRUE(std::is_sorted(all.boards().begin(), all.boards().end()));
  const InformationSet clipped(boards, 10);
  EXPECT_EQ(clipped.size(), 10u);
  EXPECT_TRUE(clipped.truncated());
  // Clipping keeps the smallest keys.
  EXPECT_TRUE(std::equal(clipped.boards().begin(), clipped.boards().end(), all.boards().begin()));
}

TEST(ExpandOpponent, InitialGivesTwentyOneBoards) {
  const InformationSet set = ExpandOpponent(InformationSet::Initial(Color::kBlack), std::nullopt);
  EXPECT_EQ(set.size(), 21u);
  EXPECT_EQ(set.size(), oracle::Successors(oracle::FromFen(Board::Initial().Fen())).size());
  for (const Board& b : set.boards()) EXPECT_EQ(b.side_to_move(), Color::kBlack);
}

TEST(ExpandOpponent, ImpossibleCaptureThrows) {
  EXPECT_THROW(ExpandOpponent(InformationSet::Initial(Color::kBlack), Sq("e4")),
               InconsistentObservation);
}

TEST(ExpandOpponent, CapClipsAndFlags) {
  const InformationSet set =
      ExpandOpponent(InformationSet::Initial(Color::kBlack, 10), std::nullopt);
  EXPECT_EQ(set.size(), 10u);
  EXPECT_TRUE(set.truncated());
}

TEST(ExpandOpponent, ThreadCountDoesNotChangeResult) {
  InformationSet set = ExpandOpponent(InformationSet::Initial(Color::kBlack), std::nullopt);
  std::vector<Board> next;
  for (const Board& b : set.boards()) {
    next.push_back(ApplyRequest(b, MoveRequest::Pass()).first);
  }
  const InformationSet wide(next, kUnlimitedCap);
  const InformationSet one = ExpandOpponent(wide, std::nullopt, 1);
  const InformationSet four = ExpandOpponent(wide, std::nullopt, 4);
  EXPECT_EQ(one.boards(), four.boards());
  EXPECT_GT(one.size(), 100u);
}

TEST(FilterSense, KeepsMatchingWindows) {
  const InformationSet set = ExpandOpponent(InformationSet::Initial(Color::kBlack), std::nullopt);
  Board truth = ApplyRequest(Board::Initial(), MoveRequest::Parse("g1f3")).first;
  const InformationSet seen = FilterSense(set, Sense(truth, Sq("f3")));
  ASSERT_FALSE(seen.empty());
  for (const Board& b : seen.boards()) {
    EXPECT_EQ(b.PieceAt(Sq("f3")), (Piece{Color::kWhite, PieceType::kKnight}));
  }
  // A window every board agrees on leaves the set alone.
  EXPECT_EQ(FilterSense(set, Sense(truth, Sq("b7"))).boards(), set.boards());
}

TEST(FilterSense, TwoBoardsDifferingAtD5) {
  const Board a = Board::FromFen("4k3/8/8/3p4/8/8/8/4K3 w - - 0 1");
  const Board b = Board::FromFen("4k3/8/8/8/8/8/8/4K3 w - - 0 1");
  const InformationSet set({a, b});
  const InformationSet out = FilterSense(set, Sense(a, Sq("d5")));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.boards()[0], a);
  EXPECT_THROW(FilterSense(InformationSet({b}), Sense(a, Sq("d5"))), InconsistentObservation);
}

TEST(FilterOwnMove, SuccessfulMoveAdvancesAll) {
  const InformationSet set = ExpandOpponent(InformationSet::Initial(Color::kBlack), std::nullopt);
  const Board truth = set.boards().front();
  const InformationSet out = FilterOwnMove(set, Observed(truth, "e7e5"));
  EXPECT_EQ(out.size(), set.size());
  for (const Board& b : out.boards()) {
    EXPECT_EQ(b.PieceAt(Sq("e5")), (Piece{Color::kBlack, PieceType::kPawn}));
    EXPECT_EQ(b.side_to_move(), Color::kWhite);
  }
}

TEST(FilterOwnMove, TruncatedSlideSelectsBlocker) {
  const Board on_a5 = Board::FromFen("4k3/8/8/p7/8/8/8/R3K3 w - - 0 1");
  const Board on_a7 = Board::FromFen("4k3/p7/8/8/8/8/8/R3K3 w - - 0 1");
  const InformationSet set({on_a5, on_a7});
  const MoveOutcome seen = Observed(on_a5, "a1a8");
  ASSERT_EQ(seen.taken.Uci(), "a1a5");
  const InformationSet out = FilterOwnMove(set, seen);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.boards()[0], ApplyRequest(on_a5, MoveRequest::Parse("a1a8")).first);
}

TEST(FilterOwnMove, IllegalKeepsBoardsWhereRequestFails) {
  const Board open = Board::FromFen("4k3/8/8/8/8/8/8/RN2K3 w Q - 0 1");
  const Board clear = Board::FromFen("4k3/8/8/8/8/8/8/R3K3 w Q - 0 1");
  const MoveOutcome seen = Observed(open, "e1c1");
  ASSERT_TRUE(seen.was_illegal);
  const InformationSet out = FilterOwnMove(InformationSet({open, clear}), seen);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.boards()[0], ApplyRequest(open, MoveRequest::Pass()).first);
}

TEST(InformationSet, ExactAgainstBruteForce) {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    const GameRecord game = testutil::ShortRandomGame(seed, 6);
    for (Color player : {Color::kWhite, Color::kBlack}) {
      const ObservationHistory h = game.History(player);
      if (h.turns.empty()) continue;
      EXPECT_EQ(testutil::TrackedSets(h), oracle::ConsistentSets(h))
          << "seed " << seed << " player " << static_cast<int>(player);
    }
  }
}

TEST(InformationSet, TrueBoardIsMemberWhenUntruncated) {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const GameRecord game = testutil::ShortRandomGame(seed + 100, 30);
    for (Color player : {Color::kWhite, Color::kBlack}) {
      size_t decisions = 0;
      ForEachDecision(game, player, kDefaultSetCap, 1, [&](const DecisionView& v) {
        ++decisions;
        if (!v.set.truncated()) EXPECT_TRUE(v.set.Contains(v.truth)) << v.truth.Fen();
      });
      EXPECT_GT(decisions, 0u);
    }
  }
}

TEST(InformationSet, DeterministicOrdering) {
  const GameRecord game = testutil::ShortRandomGame(7, 8);
  const ObservationHistory h = game.History(Color::kBlack);
  EXPECT_EQ(testutil::TrackedSets(h), testutil::TrackedSets(h));
}
