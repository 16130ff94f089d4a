#ifndef RBC_EVALUATOR_H_
#define RBC_EVALUATOR_H_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rbc/board.h"
#include "rbc/rules.h"

namespace rbc {

// Perfect-information scoring of single boards, always from the point of
// view of the side to move. The public calls handle king captures and
// finished games; implementations only search ordinary positions.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual std::string Name() const = 0;

  MoveRequest BestMove(const Board& board);
  // Value in [-1, 1] of playing `move` on `board`, judged on the adjudicated
  // successor: +1 if it captures the king, -1 if the reply can capture ours.
  double Evaluate(const Board& board, const MoveRequest& move);
  // Value in [-1, 1] of the position for the side to move.
  double EvaluatePosition(const Board& board);

 protected:
  virtual MoveRequest SearchBestMove(const Board& board) = 0;
  virtual double SearchPosition(const Board& board) = 0;
};

// Centipawns to [-1, 1].
double NormalizeCentipawns(double cp);

// Material plus a small king-proximity term, searched with alpha-beta.
class MaterialEvaluator : public Evaluator {
 public:
  explicit MaterialEvaluator(int depth = 2) : depth_(depth < 1 ? 1 : depth) {}
  std::string Name() const override { return "material"; }
  int depth() const { return depth_; }

  // Static score in centipawns for the side to move.
  static double StaticCentipawns(const Board& board);

 protected:
  MoveRequest SearchBestMove(const Board& board) override;
  double SearchPosition(const Board& board) override;

 private:
  double Negamax(const Board& board, int depth, double alpha, double beta);
  int depth_;
};

struct UciOptions {
  std::string path;
  int depth = 8;
  int movetime_ms = 0;  // used instead of depth when > 0
  std::chrono::milliseconds timeout{10000};
};

// A UCI engine subprocess speaking the subset needed here: uci, isready,
// ucinewgame, position fen, go depth|movetime, bestmove and info score.
class UciEngineEvaluator : public Evaluator {
 public:
  explicit UciEngineEvaluator(UciOptions options);
  ~UciEngineEvaluator() override;
  UciEngineEvaluator(const UciEngineEvaluator&) = delete;
  UciEngineEvaluator& operator=(const UciEngineEvaluator&) = delete;

  std::string Name() const override { return "uci:" + engine_name_; }

  struct Analysis {
    std::optional<MoveRequest> best_move;  // empty for "(none)"
    std::optional<double> score_cp;
    std::optional<int> mate_in;
  };
  Analysis Analyse(const Board& board);

 protected:
  MoveRequest SearchBestMove(const Board& board) override;
  double SearchPosition(const Board& board) override;

 private:
  void Send(const std::string& line);
  std::string ReadLine();
  std::string WaitFor(const std::string& prefix);
  void Stop();

  UciOptions options_;
  std::string engine_name_ = "engine";
  int pid_ = -1;
  int to_engine_ = -1;
  int from_engine_ = -1;
  std::string buffer_;
};

// "material" (optionally "material:N" for depth N) or "uci"; the engine path
// falls back to the RBC_ENGINE_PATH environment variable.
std::unique_ptr<Evaluator> MakeEvaluator(const std::string& spec, const UciOptions& uci = {});

}  // namespace rbc

#endif  // RBC_EVALUATOR_H_
