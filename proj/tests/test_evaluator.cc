#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "rbc/errors.h"
#include "rbc/evaluator.h"

using namespace rbc;

namespace {

Board WithFullmove(int n) {
  Board b = Board::Initial();
  b.set_fullmove_number(n);
  return b;
}

UciOptions Fake() {
  UciOptions o;
  o.path = RBC_FAKE_ENGINE;
  o.depth = 3;
  o.timeout = std::chrono::milliseconds(500);
  return o;
}

}  // namespace

TEST(Normalize, Centipawns) {
  EXPECT_EQ(NormalizeCentipawns(0), 0.0);
  EXPECT_NEAR(NormalizeCentipawns(400), std::tanh(1.0), 1e-15);
  EXPECT_NEAR(NormalizeCentipawns(-400), -std::tanh(1.0), 1e-15);
  EXPECT_GT(NormalizeCentipawns(1e6), 0.999);
}

TEST(Material, KingCaptureAndTerminalValues) {
  MaterialEvaluator e(2);
  const Board b = Board::FromFen("4k3/8/8/8/8/8/8/4R1K1 w - - 0 1");
  EXPECT_EQ(e.Evaluate(b, MoveRequest::Parse("e1e8")), 1.0);
  EXPECT_EQ(e.BestMove(b), MoveRequest::Parse("e1e8"));
  // The side to move can take the enemy king.
  EXPECT_EQ(e.EvaluatePosition(b), 1.0);
  // Leaving the king en prise loses.
  const Board exposed = Board::FromFen("4k3/8/8/8/8/8/4r3/6K1 w - - 0 1");
  EXPECT_EQ(e.Evaluate(exposed, MoveRequest::Parse("g1g2")), -1.0);
  EXPECT_GT(e.Evaluate(exposed, MoveRequest::Parse("g1f1")), -1.0);
  EXPECT_EQ(e.EvaluatePosition(Board::FromFen("8/8/8/8/8/8/8/4K3 b - - 0 1")), -1.0);
  EXPECT_EQ(e.EvaluatePosition(Board::FromFen("4k3/8/8/8/8/8/8/4K3 w - - 50 90")), 0.0);
}

TEST(Material, PrefersWinningMaterial) {
  MaterialEvaluator e(2);
  const Board b = Board::FromFen("4k3/8/8/3q4/8/8/8/3RK3 w - - 0 1");
  EXPECT_EQ(e.BestMove(b), MoveRequest::Parse("d1d5"));
  EXPECT_GT(e.Evaluate(b, MoveRequest::Parse("d1d5")), e.Evaluate(b, MoveRequest::Parse("e1f1")));
  EXPECT_EQ(e.Evaluate(b, MoveRequest::Parse("d1d5")), e.Evaluate(b, MoveRequest::Parse("d1d5")));
  const double v = e.EvaluatePosition(Board::Initial());
  EXPECT_GT(v, -1.0);
  EXPECT_LT(v, 1.0);
}

TEST(Factory, Specs) {
  EXPECT_EQ(MakeEvaluator("material")->Name(), "material");
  EXPECT_EQ(dynamic_cast<MaterialEvaluator&>(*MakeEvaluator("material:3")).depth(), 3);
  EXPECT_THROW(MakeEvaluator("stockfish"), InvalidInput);
  UciOptions missing;
  missing.path = "/nonexistent/engine";
  EXPECT_THROW(MakeEvaluator("uci", missing), EngineError);
}

TEST(Uci, HandshakeScoreAndMove) {
  UciEngineEvaluator e(Fake());
  EXPECT_EQ(e.Name(), "uci:FakeFish");
  const auto a = e.Analyse(Board::Initial());
  ASSERT_TRUE(a.best_move);
  EXPECT_EQ(*a.best_move, MoveRequest::Parse("e2e4"));
  ASSERT_TRUE(a.score_cp);
  EXPECT_EQ(*a.score_cp, 200);
  EXPECT_EQ(e.BestMove(Board::Initial()), MoveRequest::Parse("e2e4"));
  EXPECT_NEAR(e.EvaluatePosition(Board::Initial()), std::tanh(0.5), 1e-15);
  // The move is judged on the successor, from the mover's side.
  EXPECT_NEAR(e.Evaluate(Board::Initial(), MoveRequest::Parse("e2e4")), -std::tanh(0.5), 1e-15);
}

TEST(Uci, MateAndNoMove) {
  UciEngineEvaluator e(Fake());
  const auto a = e.Analyse(WithFullmove(97));
  EXPECT_FALSE(a.best_move);
  ASSERT_TRUE(a.mate_in);
  EXPECT_EQ(*a.mate_in, -2);
  EXPECT_EQ(e.EvaluatePosition(WithFullmove(97)), -1.0);
  EXPECT_TRUE(e.BestMove(WithFullmove(97)).is_pass());
}

TEST(Uci, Failures) {
  {
    UciEngineEvaluator e(Fake());
    EXPECT_THROW(e.Analyse(WithFullmove(96)), EngineError);
  }
  {
    UciEngineEvaluator e(Fake());
    EXPECT_THROW(e.Analyse(WithFullmove(98)), EngineError);
  }
  {
    UciEngineEvaluator e(Fake());
    EXPECT_THROW(e.Analyse(WithFullmove(99)), EngineError);
  }
}

TEST(Uci, EnvironmentFallback) {
  setenv("RBC_ENGINE_PATH", RBC_FAKE_ENGINE, 1);
  const auto e = MakeEvaluator("uci");
  EXPECT_EQ(e->Name(), "uci:FakeFish");
  unsetenv("RBC_ENGINE_PATH");
}
