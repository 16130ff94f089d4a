#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include <spdlog/spdlog.h>

#include "rbc/errors.h"
#include "rbc/evaluator.h"

namespace rbc {

UciEngineEvaluator::UciEngineEvaluator(UciOptions options) : options_(std::move(options)) {
  if (access(options_.path.c_str(), X_OK) != 0) {
    throw EngineError("engine not executable: " + options_.path);
  }
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw EngineError(std::string("pipe failed: ") + std::strerror(errno));
  }
  pid_ = fork();
  if (pid_ < 0) throw EngineError(std::string("fork failed: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl(options_.path.c_str(), options_.path.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_engine_ = in_pipe[1];
  from_engine_ = out_pipe[0];
  signal(SIGPIPE, SIG_IGN);
  try {
    Send("uci");
    for (;;) {
      const std::string line = ReadLine();
      if (line.rfind("id name ", 0) == 0) engine_name_ = line.substr(8);
      if (line == "uciok") break;
    }
    Send("isready");
    WaitFor("readyok");
    Send("ucinewgame");
  } catch (...) {
    Stop();
    throw;
  }
}

UciEngineEvaluator::~UciEngineEvaluator() { Stop(); }

void UciEngineEvaluator::Stop() {
  if (pid_ <= 0) return;
  if (to_engine_ >= 0) {
    const char quit[] = "quit\n";
    (void)!write(to_engine_, quit, sizeof quit - 1);
    close(to_engine_);
    to_engine_ = -1;
  }
  int status = 0;
  for (int i = 0; i < 50; ++i) {
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      break;
    }
    usleep(10000);
  }
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
  if (from_engine_ >= 0) {
    close(from_engine_);
    from_engine_ = -1;
  }
}

void UciEngineEvaluator::Send(const std::string& line) {
  spdlog::trace("uci > {}", line);
  const std::string data = line + "\n";
  size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = write(to_engine_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EngineError("engine write failed: " + std::string(std::strerror(errno)));
    }
    off += static_cast<size_t>(n);
  }
}

std::string UciEngineEvaluator::ReadLine() {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      spdlog::trace("uci < {}", line);
      return line;
    }
    pollfd pfd{from_engine_, POLLIN, 0};
    const int r = poll(&pfd, 1, static_cast<int>(options_.timeout.count()));
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) throw EngineError("engine timed out");
    if (r < 0) throw EngineError("engine poll failed: " + std::string(std::strerror(errno)));
    char chunk[4096];
    const ssize_t n = read(from_engine_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw EngineError("engine closed its output");
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

std::string UciEngineEvaluator::WaitFor(const std::string& prefix) {
  for (;;) {
    std::string line = ReadLine();
    if (line.rfind(prefix, 0) == 0) return line;
  }
}

UciEngineEvaluator::Analysis UciEngineEvaluator::Analyse(const Board& board) {
  Send("position fen " + board.Fen());
  if (options_.movetime_ms > 0) {
    Send("go movetime " + std::to_string(options_.movetime_ms));
  } else {
    Send("go depth " + std::to_string(options_.depth));
  }
  Analysis a;
  for (;;) {
    const std::string line = ReadLine();
    std::istringstream in(line);
    std::string tok;
    in >> tok;
    if (tok == "info") {
      while (in >> tok) {
        if (tok != "score") continue;
        std::string kind;
        long value = 0;
        if (!(in >> kind >> value)) break;
        if (kind == "cp") {
          a.score_cp = static_cast<double>(value);
          a.mate_in.reset();
        } else if (kind == "mate") {
          a.mate_in = static_cast<int>(value);
          a.score_cp.reset();
        }
        break;
      }
    } else if (tok == "bestmove") {
      std::string mv;
      in >> mv;
      if (!mv.empty() && mv != "(none)" && mv != "0000") {
        try {
          a.best_move = MoveRequest::Parse(mv);
        } catch (const InvalidInput&) {
          throw EngineError("engine sent an unparsable move '" + mv + "'");
        }
      }
      return a;
    }
  }
}

MoveRequest UciEngineEvaluator::SearchBestMove(const Board& board) {
  return Analyse(board).best_move.value_or(MoveRequest::Pass());
}

double UciEngineEvaluator::SearchPosition(const Board& board) {
  const Analysis a = Analyse(board);
  if (a.mate_in) return *a.mate_in > 0 ? 1.0 : -1.0;
  if (a.score_cp) return NormalizeCentipawns(*a.score_cp);
  // No score at all: a position with no legal replies, e.g. stalemate.
  return 0.0;
}

}  // namespace rbc
