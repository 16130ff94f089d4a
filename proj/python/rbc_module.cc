#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "rbc/agent.h"
#include "rbc/arena.h"
#include "rbc/bots.h"
#include "rbc/data.h"
#include "rbc/encoding.h"
#include "rbc/errors.h"
#include "rbc/evaluator.h"
#include "rbc/rules.h"
#include "rbc/weighting.h"

namespace py = pybind11;
using namespace rbc;

namespace {

Color ParseColor(const std::string& s) {
  if (s == "white") return Color::kWhite;
  if (s == "black") return Color::kBlack;
  throw InvalidInput("player must be 'white' or 'black'");
}

std::optional<std::string> SquareName(const std::optional<Square>& s) {
  if (!s) return std::nullopt;
  return s->Name();
}

py::array_t<float> ToArray(const PlaneStack& p) {
  py::array_t<float> out({p.channels(), 8, 8});
  std::copy(p.data().begin(), p.data().end(), out.mutable_data());
  return out;
}

py::dict OutcomeDict(const MoveOutcome& m) {
  py::dict d;
  d["requested"] = m.requested.Uci();
  d["taken"] = m.taken.Uci();
  d["capture_square"] = SquareName(m.capture_square);
  d["was_illegal"] = m.was_illegal;
  return d;
}

std::vector<Board> FromFens(const std::vector<std::string>& fens) {
  std::vector<Board> out;
  for (const auto& f : fens) out.push_back(Board::FromFen(f));
  return out;
}

// The decision of `player` at its turn `turn`: anchor history, set and truth.
struct Decision {
  ObservationHistory anchor;
  std::vector<Board> boards;
  Board truth;
  bool truncated = false;
};

Decision FindDecision(const GameRecord& game, const std::string& player, size_t turn,
                      size_t cap) {
  std::optional<Decision> found;
  ForEachDecision(game, ParseColor(player), cap, 1, [&](const DecisionView& v) {
    if (v.turn != turn) return;
    found = Decision{AnchorHistory(v.history, v.turn), v.set.boards(), v.truth,
                     v.set.truncated()};
  });
  if (!found) throw InvalidInput("no decision at that turn");
  return *found;
}

std::unique_ptr<Bot> ScriptedBot(const std::string& name, uint64_t seed) {
  if (name == "random") return std::make_unique<RandomBot>(seed);
  if (name == "attacker") return std::make_unique<AttackerBot>(seed);
  if (name == "passive") return std::make_unique<PassiveBot>();
  if (name == "trout") return std::make_unique<TroutBot>(seed);
  throw InvalidInput("unknown bot '" + name + "' (random|attacker|passive|trout)");
}

}  // namespace

PYBIND11_MODULE(_rbc, m) {
  m.doc() = "Reconnaissance blind chess: rules, information sets, encodings and weighting";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CorruptRecord>(m, "CorruptRecord", PyExc_ValueError);
  py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_IOError);
  py::register_exception<InconsistentObservation>(m, "InconsistentObservation",
                                                  PyExc_RuntimeError);

  m.attr("TURN_CHANNELS") = kTurnChannels;
  m.attr("HISTORY_CHANNELS") = kHistoryChannels;
  m.attr("PAIR_CHANNELS") = kPairChannels;

  py::class_<Board>(m, "Board")
      .def(py::init([](const std::optional<std::string>& fen) {
             return fen ? Board::FromFen(*fen) : Board::Initial();
           }),
           py::arg("fen") = std::nullopt)
      .def_property_readonly("fen", &Board::Fen)
      .def_property_readonly("side_to_move",
                             [](const Board& b) { return ColorName(b.side_to_move()); })
      .def("piece_at",
           [](const Board& b, const std::string& sq) -> std::optional<std::string> {
             const auto p = b.PieceAt(Square::Parse(sq));
             if (!p) return std::nullopt;
             return std::string(1, p->Symbol());
           })
      .def("__eq__", [](const Board& a, const Board& b) { return a == b; })
      .def("__hash__", [](const Board& b) { return py::hash(py::str(b.Fen())); })
      .def("__repr__", [](const Board& b) { return "Board('" + b.Fen() + "')"; });

  m.def("apply_request", [](const Board& b, const std::string& uci) {
    const auto [next, outcome] = ApplyRequest(b, MoveRequest::Parse(uci));
    return py::make_tuple(next, OutcomeDict(outcome));
  }, py::arg("board"), py::arg("request"));

  m.def("successor_outcomes", [](const Board& b) {
    std::vector<std::pair<Board, std::optional<std::string>>> out;
    for (const auto& s : SuccessorOutcomes(b)) {
      out.emplace_back(s.board, SquareName(s.outcome.capture_square));
    }
    return out;
  }, py::arg("board"));

  m.def("outcome", [](const Board& b) {
    const Outcome o = GetOutcome(b);
    py::dict d;
    d["finished"] = o.kind != OutcomeKind::kOngoing;
    d["winner"] = o.winner ? py::object(py::str(ColorName(*o.winner))) : py::object(py::none());
    return d;
  }, py::arg("board"));

  m.def("sense", [](const Board& b, const std::string& center) {
    py::dict d;
    for (const auto& c : Sense(b, Square::Parse(center)).cells) {
      d[py::str(c.square.Name())] =
          c.piece ? py::object(py::str(std::string(1, c.piece->Symbol()))) : py::object(py::none());
    }
    return d;
  }, py::arg("board"), py::arg("center"));

  m.def("encode_board", [](const Board& b) { return ToArray(EncodeBoard(b)); }, py::arg("board"));

  m.def("softmin_weights", &SoftminWeights, py::arg("distances"), py::arg("temperature"));

  m.def("sense_scores",
        [](const std::vector<std::string>& fens, const std::vector<double>& weights,
           size_t budget) {
          const auto s = SenseScores(FromFens(fens), weights, budget);
          return std::vector<double>(s.begin(), s.end());
        },
        py::arg("fens"), py::arg("weights"), py::arg("budget") = 100);

  py::class_<GameRecord>(m, "Game")
      .def_readonly("white", &GameRecord::white)
      .def_readonly("black", &GameRecord::black)
      .def_readonly("termination", &GameRecord::termination)
      .def_readonly("seed", &GameRecord::seed)
      .def_property_readonly("winner",
                             [](const GameRecord& g) -> std::optional<std::string> {
                               if (!g.winner) return std::nullopt;
                               return ColorName(*g.winner);
                             })
      .def_property_readonly("half_turns", [](const GameRecord& g) { return g.turns.size(); })
      .def("to_json", &GameToJson);

  m.def("play_game",
        [](const std::string& white, const std::string& black, uint64_t seed,
           int max_half_turns) {
          auto w = ScriptedBot(white, seed * 2 + 1);
          auto b = ScriptedBot(black, seed * 2 + 2);
          GameOptions options;
          options.max_half_turns = max_half_turns;
          py::gil_scoped_release release;
          return PlayGame(*w, *b, seed, options);
        },
        py::arg("white") = "random", py::arg("black") = "random", py::arg("seed") = 0,
        py::arg("max_half_turns") = kDefaultTurnLimit);

  m.def("read_games", &ReadGames, py::arg("path"));
  m.def("game_from_json", [](const std::string& s) { return GameFromJson(s); }, py::arg("line"));

  m.def("information_set",
        [](const GameRecord& g, const std::string& player, size_t turn, size_t cap) {
          const Decision d = FindDecision(g, player, turn, cap);
          std::vector<std::string> fens;
          for (const Board& b : d.boards) fens.push_back(b.Fen());
          py::dict out;
          out["fens"] = fens;
          out["truth"] = d.truth.Fen();
          out["truncated"] = d.truncated;
          return out;
        },
        py::arg("game"), py::arg("player"), py::arg("turn"), py::arg("cap") = kDefaultSetCap);

  m.def("encode_history",
        [](const GameRecord& g, const std::string& player, size_t turn,
           const std::vector<std::string>& roster) {
          const Decision d = FindDecision(g, player, turn, kDefaultSetCap);
          return ToArray(EncodeHistory(d.anchor, Roster(roster)));
        },
        py::arg("game"), py::arg("player"), py::arg("turn"),
        py::arg("roster") = std::vector<std::string>{});

  m.def("weigh",
        [](const GameRecord& g, const std::string& player, size_t turn,
           const std::string& provider, const std::string& checkpoint, double temperature,
           uint64_t seed, size_t cap) {
          auto p = MakeProvider(provider, checkpoint, seed,
                                std::shared_ptr<Evaluator>(MakeEvaluator("material")));
          const Decision d = FindDecision(g, player, turn, cap);
          const auto scores = p->Scores(d.anchor, d.boards);
          const auto weights = SoftminWeights(scores, temperature);
          py::list rows;
          for (size_t i = 0; i < d.boards.size(); ++i) {
            py::dict r;
            r["fen"] = d.boards[i].Fen();
            r["score"] = scores[i];
            r["weight"] = weights[i];
            r["true"] = d.boards[i] == d.truth;
            rows.append(r);
          }
          return rows;
        },
        py::arg("game"), py::arg("player"), py::arg("turn"), py::arg("provider") = "uniform",
        py::arg("checkpoint") = "", py::arg("temperature") = kDefaultTemperature,
        py::arg("seed") = 0, py::arg("cap") = kDefaultSetCap);
}
