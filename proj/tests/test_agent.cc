#include <gtest/gtest.h>

#include <numeric>

#include "rbc/agent.h"
#include "rbc/arena.h"
#include "rbc/bots.h"
#include "rbc/errors.h"
#include "rbc/evaluator.h"
#include "fork_scenario.h"
#include "test_util.h"

using namespace rbc;

namespace {

Square Sq(const char* name) { return Square::Parse(name); }

using testutil::ForkBoards;
using testutil::ForkEvaluator;

// Proposes the same move everywhere; values every position at zero.
class FixedEvaluator : public Evaluator {
 public:
  explicit FixedEvaluator(MoveRequest m) : move_(m) {}
  std::string Name() const override { return "fixed"; }

 protected:
  MoveRequest SearchBestMove(const Board&) override { return move_; }
  double SearchPosition(const Board&) override { return 0.0; }

 private:
  MoveRequest move_;
};

// Small information sets from short random games, for sensing checks.
std::vector<std::vector<Board>> SmallSets() {
  std::vector<std::vector<Board>> out;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const GameRecord game = testutil::ShortRandomGame(seed, 8);
    for (Color player : {Color::kWhite, Color::kBlack}) {
      const ObservationHistory h = game.History(player);
      InformationSet set = InformationSet::Initial(player, kUnlimitedCap);
      for (size_t t = 0; t < h.turns.size(); ++t) {
        const TurnObservation& obs = h.turns[t];
        if (!(player == Color::kWhite && t == 0)) {
          set = ExpandOpponent(set, obs.opponent_capture_square);
        }
        if (set.size() >= 2) {
          // At most 20 boards, spread over the set.
          std::vector<Board> sample;
          const size_t step = (set.size() + 19) / 20;
          for (size_t i = 0; i < set.size(); i += step) sample.push_back(set.boards()[i]);
          out.push_back(sample);
        }
        if (obs.sense_result) set = FilterSense(set, *obs.sense_result);
        if (!obs.own_request) break;
        MoveOutcome m{*obs.own_request, *obs.own_taken, obs.own_capture_square,
                      obs.own_was_illegal};
        set = FilterOwnMove(set, m);
      }
    }
  }
  return out;
}

std::vector<double> RandomWeights(size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1);
  std::vector<double> w(n);
  for (double& x : w) x = u(rng);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return w;
}

}  // namespace

TEST(Sense, TwoBoardsDifferingAtD5) {
  const std::vector<Board> boards = {Board::FromFen("4k3/8/8/3p4/8/8/8/4K3 w - - 0 1"),
                                     Board::FromFen("4k3/8/8/8/8/8/8/4K3 w - - 0 1")};
  const auto scores = SenseScores(boards, {0.7, 0.3}, 100);
  const Square d5 = Sq("d5");
  for (int q = 0; q < 64; ++q) {
    const Square s(q);
    const bool covers = std::abs(s.file() - d5.file()) <= 1 && std::abs(s.rank() - d5.rank()) <= 1;
    EXPECT_NEAR(scores[q], s.IsInterior() && covers ? 0.42 : 0.0, 1e-12) << s.Name();
  }
  EXPECT_EQ(ChooseSense(boards, {0.7, 0.3}, 100), Sq("c4"));
}

TEST(Sense, SingletonScoresZero) {
  const auto scores = SenseScores({Board::Initial()}, {1.0}, 100);
  for (double v : scores) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(ChooseSense({Board::Initial()}, {1.0}, 100), Sq("b2"));
  EXPECT_THROW(SenseScores({}, {}, 100), InvalidInput);
}

TEST(Sense, MatchesEliminationOracle) {
  std::mt19937_64 rng(3);
  const auto sets = SmallSets();
  ASSERT_GT(sets.size(), 10u);
  for (const auto& boards : sets) {
    const auto w = RandomWeights(boards.size(), rng);
    std::vector<std::string> fens;
    for (const Board& b : boards) fens.push_back(b.Fen());
    const auto scores = SenseScores(boards, w, 100);
    for (int q = 0; q < 64; ++q) {
      const double want = Square(q).IsInterior() ? oracle::ExpectedElimination(fens, w, q) : 0.0;
      EXPECT_NEAR(scores[q], want, 1e-12);
    }
    const Square chosen = ChooseSense(boards, w, 100);
    EXPECT_TRUE(chosen.IsInterior());
  }
}

TEST(Sense, BudgetUsesHeaviestBoards) {
  const std::vector<Board> boards = {Board::FromFen("4k3/8/8/3p4/8/8/8/4K3 w - - 0 1"),
                                     Board::FromFen("4k3/8/8/8/8/8/8/4K3 w - - 0 1"),
                                     Board::FromFen("4k3/8/8/8/8/8/5p2/4K3 w - - 0 1")};
  // With budget 2 only the first two boards (weights 0.5 and 0.3) count.
  const auto scores = SenseScores(boards, {0.5, 0.3, 0.2}, 2);
  EXPECT_EQ(scores[Sq("f3").index()], 0.0);
  EXPECT_GT(scores[Sq("d5").index()], 0.0);
  EXPECT_EQ(TopIndices({0.2, 0.5, 0.3, 0.5}, 2), (std::vector<size_t>{1, 3}));
}

TEST(Candidates, AgreementCapAndPass) {
  std::vector<Board> boards;
  for (const auto& s : SuccessorOutcomes(Board::Initial())) boards.push_back(s.board);
  const std::vector<double> w(boards.size(), 1.0 / boards.size());
  FixedEvaluator fixed(MoveRequest::Parse("g8f6"));
  EXPECT_EQ(CandidateMoves(boards, w, fixed, 64),
            (std::vector<MoveRequest>{MoveRequest::Parse("g8f6"), MoveRequest::Pass()}));

  MaterialEvaluator material(1);
  std::mt19937_64 rng(4);
  const auto rw = RandomWeights(boards.size(), rng);
  std::map<MoveRequest, double> mass;
  for (size_t i = 0; i < boards.size(); ++i) mass[material.BestMove(boards[i])] += rw[i];
  const auto top = std::max_element(mass.begin(), mass.end(), [](const auto& a, const auto& b) {
    return a.second < b.second;
  });
  const auto capped = CandidateMoves(boards, rw, material, 1);
  ASSERT_EQ(capped.size(), 2u);
  EXPECT_EQ(capped[0], top->first);
  EXPECT_TRUE(capped[1].is_pass());
  const auto all = CandidateMoves(boards, rw, material, 64);
  EXPECT_EQ(all.size(), mass.size() + 1);
}

TEST(Candidates, ForkIncludesBothCapturesAndKingMoves) {
  ForkEvaluator eval;
  const auto c = CandidateMoves(ForkBoards(), {0.5, 0.5}, eval, 64);
  auto has = [&](const char* uci) {
    return std::find(c.begin(), c.end(), MoveRequest::Parse(uci)) != c.end();
  };
  EXPECT_TRUE(has("c2d3"));
  EXPECT_TRUE(has("g2f3"));
  EXPECT_TRUE(has("e1d1"));
  EXPECT_TRUE(has("e1f1"));
  EXPECT_TRUE(c.back().is_pass());
}

TEST(ScoreMove, ForkValues) {
  ForkEvaluator eval;
  const auto boards = ForkBoards();
  EXPECT_NEAR(ScoreMove(MoveRequest::Parse("c2d3"), boards, {0.5, 0.5}, eval), 0.0, 1e-12);
  EXPECT_NEAR(ScoreMove(MoveRequest::Parse("g2f3"), boards, {0.5, 0.5}, eval), 0.0, 1e-12);
  EXPECT_NEAR(ScoreMove(MoveRequest::Parse("e1d1"), boards, {0.5, 0.5}, eval), 0.99, 1e-12);
  EXPECT_NEAR(ScoreMove(MoveRequest::Parse("e1d1"), {boards[0]}, {1.0}, eval),
              eval.Evaluate(boards[0], MoveRequest::Parse("e1d1")), 1e-15);
}

TEST(ChooseMove, ForkRetreatsTheKing) {
  ForkEvaluator eval;
  const MoveRequest m = ChooseMove(ForkBoards(), {0.5, 0.5}, eval, AgentConfig());
  EXPECT_EQ(m.from(), Sq("e1"));
  EXPECT_NEAR(ScoreMove(m, ForkBoards(), {0.5, 0.5}, eval), 0.99, 1e-12);
}

TEST(ChooseMove, SingletonPlaysBestMove) {
  MaterialEvaluator material(2);
  const Board b = Board::FromFen("4k3/8/8/3q4/8/8/8/3RK3 w - - 0 1");
  EXPECT_EQ(ChooseMove({b}, {1.0}, material, AgentConfig()), material.BestMove(b));
  FixedEvaluator fixed(MoveRequest::Parse("e1f1"));
  EXPECT_EQ(ChooseMove({b}, {1.0}, fixed, AgentConfig()), MoveRequest::Parse("e1f1"));
}

TEST(ScoreMove, LinearInWeights) {
  std::vector<Board> boards;
  for (const auto& s : SuccessorOutcomes(Board::Initial())) boards.push_back(s.board);
  MaterialEvaluator material(1);
  std::mt19937_64 rng(6);
  const auto w1 = RandomWeights(boards.size(), rng), w2 = RandomWeights(boards.size(), rng);
  const double alpha = 0.3;
  std::vector<double> mix(boards.size());
  for (size_t i = 0; i < mix.size(); ++i) mix[i] = alpha * w1[i] + (1 - alpha) * w2[i];
  for (const char* uci : {"e7e5", "g8f6", "d8h4", "e8e7"}) {
    const MoveRequest m = MoveRequest::Parse(uci);
    EXPECT_NEAR(ScoreMove(m, boards, mix, material),
                alpha * ScoreMove(m, boards, w1, material) +
                    (1 - alpha) * ScoreMove(m, boards, w2, material),
                1e-12);
  }
}

TEST(Agent, FirstBlackTurnAfterE4) {
  const Board truth = ApplyRequest(Board::Initial(), MoveRequest::Parse("e2e4")).first;
  Agent agent("agent", std::make_shared<UniformProvider>(),
              std::shared_ptr<Evaluator>(MakeEvaluator("material:1")), AgentConfig());
  agent.NewGame(Color::kBlack, "opponent");
  const Square center = agent.ChooseSense(std::nullopt);
  EXPECT_TRUE(center.IsInterior());
  EXPECT_EQ(agent.TrackedSet()->size(), 21u);
  const SenseResult seen = Sense(truth, center);
  agent.HandleSense(seen);
  const InformationSet& set = *agent.TrackedSet();
  EXPECT_TRUE(set.Contains(truth));
  size_t consistent = 0;
  for (const auto& s : SuccessorOutcomes(Board::Initial())) {
    consistent += Sense(s.board, center) == seen;
  }
  EXPECT_EQ(set.size(), consistent);
  EXPECT_LT(set.size(), 21u);
  const MoveRequest m = agent.ChooseMove();
  agent.HandleMove(ApplyRequest(truth, m).second);
  EXPECT_TRUE(agent.TrackedSet()->Contains(ApplyRequest(truth, m).first));
  EXPECT_EQ(agent.history().turns.size(), 1u);
}

TEST(Agent, DeterministicAndTracksTruth) {
  auto play = [] {
    AgentConfig config;
    config.seed = 5;
    Agent agent("agent", std::make_shared<UniformProvider>(),
                std::shared_ptr<Evaluator>(MakeEvaluator("material:1")), config);
    RandomBot random(9);
    GameOptions options;
    options.max_half_turns = 30;
    return PlayGame(agent, random, 17, options);
  };
  const GameRecord a = play();
  EXPECT_EQ(a, play());
  for (size_t t = 0; t < a.turns.size(); t += 2) {
    const InfosetDigest& d = a.turns[t].digest;
    if (!d.truncated && d.contains_true) EXPECT_TRUE(*d.contains_true);
  }
}

TEST(AgentConfig, Validation) {
  AgentConfig c;
  c.candidate_cap = 0;
  EXPECT_THROW(c.Validate(), InvalidInput);
  c = AgentConfig();
  c.temperature = -1;
  EXPECT_THROW(c.Validate(), InvalidInput);
}
