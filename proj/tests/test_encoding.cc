#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rbc/encoding.h"
#include "rbc/errors.h"
#include "test_util.h"

using namespace rbc;

namespace {

Square Sq(const char* name) { return Square::Parse(name); }

bool AllZero(const PlaneStack& p, int from, int to) {
  for (int c = from; c < to; ++c) {
    if (p.PlaneCount(c) != 0) return false;
  }
  return true;
}

TurnObservation PlainTurn(Color color) {
  TurnObservation t;
  t.color = color;
  t.own_pieces = OwnPieces(Board::Initial(), color);
  return t;
}

}  // namespace

TEST(EncodeBoard, InitialPosition) {
  const PlaneStack p = EncodeBoard(Board::Initial());
  ASSERT_EQ(p.channels(), 12);
  EXPECT_EQ(p.PlaneCount(0), 8);
  for (int f = 0; f < 8; ++f) EXPECT_EQ(p.At(0, Square::At(f, 1)), 1.0f);
  EXPECT_EQ(p.At(5, Sq("e1")), 1.0f);
  EXPECT_EQ(p.At(11, Sq("e8")), 1.0f);
  EXPECT_EQ(p.Total(), 32);
  EXPECT_EQ(EncodeBoard(Board()).Total(), 0);
}

TEST(EncodeBoard, RoundTripAndInjectivity) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    for (const Board& b : testutil::RandomLine(seed, 30)) {
      const PlaneStack p = EncodeBoard(b);
      const Board back = DecodeBoardPlacement(p);
      int pieces = 0;
      for (int i = 0; i < 64; ++i) {
        EXPECT_EQ(back.PieceAt(Square(i)), b.PieceAt(Square(i)));
        pieces += b.PieceAt(Square(i)).has_value();
      }
      EXPECT_EQ(p.Total(), pieces);
      for (float v : p.data()) EXPECT_TRUE(v == 0.0f || v == 1.0f);
    }
  }
}

TEST(EncodeMove73, Layout) {
  // North is direction 0; distance 2 is the second plane.
  EXPECT_EQ(EncodeMove73(MoveRequest::Parse("e2e4")), std::make_pair(1, Sq("e2")));
  EXPECT_EQ(EncodeMove73(MoveRequest::Parse("a1h8")), std::make_pair(1 * 7 + 6, Sq("a1")));
  EXPECT_EQ(EncodeMove73(MoveRequest::Parse("e8e1")).first, 4 * 7 + 6);
  const auto [plane, from] = EncodeMove73(MoveRequest::Parse("g1f3"));
  EXPECT_GE(plane, 56);
  EXPECT_LT(plane, 64);
  EXPECT_EQ(from, Sq("g1"));
  // Queen promotions share the queen-move planes; underpromotions do not.
  EXPECT_EQ(EncodeMove73(MoveRequest::Parse("a7a8q")).first, 0);
  EXPECT_GE(EncodeMove73(MoveRequest::Parse("a7b8n")).first, 64);
  EXPECT_THROW(EncodeMove73(MoveRequest::Pass()), InvalidInput);
}

TEST(EncodeMove73, DistinctPlanesPerFromSquare) {
  std::set<int> planes;
  const Square from = Sq("d4");
  for (int to = 0; to < 64; ++to) {
    if (to == from.index()) continue;
    const int df = Square(to).file() - from.file();
    const int dr = Square(to).rank() - from.rank();
    const bool line = df == 0 || dr == 0 || std::abs(df) == std::abs(dr);
    const bool jump = std::abs(df * dr) == 2;
    if (!line && !jump) continue;
    const auto [plane, sq] = EncodeMove73(MoveRequest(from, Square(to)));
    EXPECT_EQ(sq, from);
    EXPECT_TRUE(planes.insert(plane).second) << plane;
  }
  EXPECT_EQ(planes.size(), 27u + 8u);
}

TEST(EncodeTurn, Rows) {
  TurnObservation t = PlainTurn(Color::kWhite);
  t.opponent_capture_square = Sq("e4");
  PlaneStack p = EncodeTurn(t);
  ASSERT_EQ(p.channels(), 90);
  EXPECT_EQ(p.PlaneCount(turn_plane::kOpponentCapture), 1);
  EXPECT_EQ(p.At(turn_plane::kOpponentCapture, Sq("e4")), 1.0f);
  EXPECT_EQ(p.PlaneCount(turn_plane::kColor), 64);
  EXPECT_EQ(p.PlaneCount(turn_plane::kOwnPieces), 8);
  EXPECT_TRUE(AllZero(p, turn_plane::kMove, turn_plane::kIllegal + 1));

  t.own_request = MoveRequest::Parse("b1d2");
  t.own_taken = MoveRequest::Pass();
  t.own_was_illegal = true;
  t.sense_center = Sq("a1");
  t.sense_result = Sense(Board::Initial(), Sq("a1"));
  p = EncodeTurn(t);
  EXPECT_EQ(p.PlaneCount(turn_plane::kIllegal), 64);
  const auto [plane, from] = EncodeMove73(MoveRequest::Parse("b1d2"));
  EXPECT_EQ(p.At(turn_plane::kMove + plane, from), 1.0f);
  EXPECT_EQ(p.PlaneCount(turn_plane::kSenseWindow), 4);
  int seen = 0;
  for (int k = 0; k < 6; ++k) seen += p.PlaneCount(turn_plane::kSenseResult + k);
  EXPECT_EQ(seen, 4);

  const PlaneStack black = EncodeTurn(PlainTurn(Color::kBlack));
  EXPECT_EQ(black.PlaneCount(turn_plane::kColor), 0);
}

TEST(EncodeHistory, PaddingAndRoster) {
  std::vector<std::string> names;
  for (int i = 0; i < kRosterSize; ++i) names.push_back("bot" + std::to_string(i));
  const Roster roster(names);

  ObservationHistory empty;
  EXPECT_EQ(EncodeHistory(empty, roster).Total(), 0);
  EXPECT_EQ(EncodeHistory(empty, roster).channels(), 1850);

  ObservationHistory h;
  for (int i = 0; i < 3; ++i) h.turns.push_back(PlainTurn(Color::kWhite));
  h.opponent_name = "bot7";
  const PlaneStack p = EncodeHistory(h, roster);
  EXPECT_TRUE(AllZero(p, 0, 17 * 90));
  EXPECT_EQ(p.PlaneCount(17 * 90 + turn_plane::kColor), 64);
  EXPECT_EQ(p.PlaneCount(1807), 64);
  EXPECT_TRUE(AllZero(p, 1800, 1807));
  EXPECT_TRUE(AllZero(p, 1808, 1850));

  h.opponent_name = "stranger";
  EXPECT_TRUE(AllZero(EncodeHistory(h, roster), 1800, 1850));

  // Only the 20 most recent turns count.
  ObservationHistory longer;
  for (int i = 0; i < 25; ++i) longer.turns.push_back(PlainTurn(Color::kWhite));
  longer.turns[4].opponent_capture_square = Sq("a1");
  longer.turns[5].opponent_capture_square = Sq("b1");
  const PlaneStack q = EncodeHistory(longer, roster);
  EXPECT_EQ(q.PlaneCount(0), 1);
  EXPECT_EQ(q.At(0, Sq("b1")), 1.0f);
}

TEST(EncodePair, Concatenation) {
  const Roster roster;
  const PlaneStack zero = EncodePair(ObservationHistory(), Board(), roster);
  EXPECT_EQ(zero.channels(), 1862);
  EXPECT_EQ(zero.Total(), 0);
  const PlaneStack p = EncodePair(ObservationHistory(), Board::Initial(), roster);
  EXPECT_EQ(p.PlaneCount(1850), 8);
  EXPECT_EQ(p.PlaneCount(1861), 1);
  EXPECT_EQ(p.Total(), 32);
}

TEST(EncodeHistory, PopcountBoundsOnRealGames) {
  const Roster roster;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const GameRecord game = testutil::ShortRandomGame(seed, 40);
    const ObservationHistory h = game.History(Color::kWhite);
    for (size_t t = 0; t < h.turns.size(); ++t) {
      const PlaneStack p = EncodeTurn(h.turns[t]);
      EXPECT_LE(p.PlaneCount(turn_plane::kOpponentCapture), 1);
      EXPECT_LE(p.PlaneCount(turn_plane::kOwnCapture), 1);
      EXPECT_LE(p.PlaneCount(turn_plane::kSenseWindow), 9);
      EXPECT_LE(p.PlaneCount(turn_plane::kOwnPieces), 8);
      int move_bits = 0;
      for (int k = 0; k < kMovePlanes; ++k) move_bits += p.PlaneCount(turn_plane::kMove + k);
      EXPECT_LE(move_bits, 1);
    }
  }
}

TEST(ChannelNames, CoverEveryChannel) {
  for (int c : {12, 90, 1850, 1862}) {
    const auto names = ChannelNames(c);
    ASSERT_EQ(names.size(), static_cast<size_t>(c));
    EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  }
}
