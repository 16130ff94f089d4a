#ifndef RBC_TESTS_TEST_UTIL_H_
#define RBC_TESTS_TEST_UTIL_H_

#include <random>
#include <string>
#include <vector>

#include "oracle.h"
#include "rbc/arena.h"
#include "rbc/bots.h"
#include "rbc/rules.h"

namespace testutil {

// A random request for the side to move: usually a pseudo-legal move, now
// and then an arbitrary from/to pair so that illegal and truncated requests
// show up too.
inline rbc::MoveRequest RandomRequest(const rbc::Board& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  if (u(rng) < 0.8) {
    const auto moves = rbc::PseudoLegalMoves(b);
    if (!moves.empty()) {
      std::uniform_int_distribution<size_t> d(0, moves.size() - 1);
      return moves[d(rng)];
    }
  }
  const auto all = oracle::AllRequests(oracle::FromFen(b.Fen()));
  std::uniform_int_distribution<size_t> d(0, all.size() - 1);
  return rbc::MoveRequest::Parse(all[d(rng)].Uci());
}

// Positions along a random game of `half_turns` requests (inclusive of the
// start); stops early if the game ends.
inline std::vector<rbc::Board> RandomLine(uint64_t seed, int half_turns) {
  std::mt19937_64 rng(seed);
  std::vector<rbc::Board> line = {rbc::Board::Initial()};
  for (int i = 0; i < half_turns; ++i) {
    const rbc::Board& b = line.back();
    if (rbc::GetOutcome(b).kind != rbc::OutcomeKind::kOngoing) break;
    line.push_back(rbc::ApplyRequest(b, RandomRequest(b, rng)).first);
  }
  return line;
}

// Compares ApplyRequest against the oracle for every request of the side to
// move. Returns the number of mismatches; the first few are described.
inline int CompareAdjudication(const rbc::Board& b, std::string* first_failure) {
  const oracle::Grid g = oracle::FromFen(b.Fen());
  int failures = 0;
  for (const oracle::Request& r : oracle::AllRequests(g)) {
    const auto [next, outcome] = rbc::ApplyRequest(b, rbc::MoveRequest::Parse(r.Uci()));
    const oracle::Result want = oracle::Apply(g, r);
    const int capture = outcome.capture_square ? outcome.capture_square->index() : -1;
    const bool ok = next.Fen() == oracle::ToFen(want.next) &&
                    oracle::SameRequest(oracle::FromLibrary(outcome.taken), want.taken) &&
                    capture == want.capture && outcome.was_illegal == want.illegal;
    if (!ok) {
      if (failures == 0 && first_failure) {
        *first_failure = b.Fen() + " request " + r.Uci() + ": got " + next.Fen() + " taken " +
                         outcome.taken.Uci() + ", want " + oracle::ToFen(want.next) +
                         " taken " + want.taken.Uci();
      }
      ++failures;
    }
  }
  return failures;
}

// Compares SuccessorOutcomes against the oracle's distinct successors.
inline bool CompareSuccessors(const rbc::Board& b) {
  std::set<std::pair<std::string, int>> got;
  for (const auto& s : rbc::SuccessorOutcomes(b)) {
    got.emplace(s.board.Fen(),
                s.outcome.capture_square ? s.outcome.capture_square->index() : -1);
  }
  return got == oracle::Successors(oracle::FromFen(b.Fen())) &&
         got.size() == rbc::SuccessorOutcomes(b).size();
}

// A short random-vs-random game for information set checks.
inline rbc::GameRecord ShortRandomGame(uint64_t seed, int half_turns) {
  rbc::RandomBot white(seed * 2 + 1), black(seed * 2 + 2);
  rbc::GameOptions options;
  options.max_half_turns = half_turns;
  return rbc::PlayGame(white, black, seed, options);
}

// The library's information sets (as FEN sets) after every sense, cap
// unlimited.
inline std::vector<std::set<std::string>> TrackedSets(const rbc::ObservationHistory& h) {
  std::vector<std::set<std::string>> out;
  rbc::InformationSet set = rbc::InformationSet::Initial(h.turns.front().color,
                                                         rbc::kUnlimitedCap);
  for (size_t t = 0; t < h.turns.size(); ++t) {
    const rbc::TurnObservation& obs = h.turns[t];
    if (!(obs.color == rbc::Color::kWhite && t == 0)) {
      set = rbc::ExpandOpponent(set, obs.opponent_capture_square);
    }
    if (obs.sense_result) set = rbc::FilterSense(set, *obs.sense_result);
    std::set<std::string> fens;
    for (const auto& b : set.boards()) fens.insert(b.Fen());
    out.push_back(std::move(fens));
    if (!obs.own_request) break;
    rbc::MoveOutcome m;
    m.requested = *obs.own_request;
    m.taken = *obs.own_taken;
    m.capture_square = obs.own_capture_square;
    m.was_illegal = obs.own_was_illegal;
    set = rbc::FilterOwnMove(set, m);
  }
  return out;
}

}  // namespace testutil

#endif  // RBC_TESTS_TEST_UTIL_H_
