#ifndef RBC_ERRORS_H_
#define RBC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rbc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed squares, requests, flags or out-of-range arguments.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The information set became empty: the tracker and the real game diverged.
class InconsistentObservation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  explicit ParseError(const std::string& what) : ParseError(what, 0) {}
  long line() const { return line_; }

 private:
  long line_;
};

// A game record whose replay does not reproduce its stored boards.
class CorruptRecord : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

class EngineError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbc

#endif  // RBC_ERRORS_H_
