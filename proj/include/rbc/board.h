#ifndef RBC_BOARD_H_
#define RBC_BOARD_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "rbc/errors.h"

namespace rbc {

enum class Color : uint8_t { kWhite = 0, kBlack = 1 };

constexpr Color Opponent(Color c) {
  return c == Color::kWhite ? Color::kBlack : Color::kWhite;
}
std::string ColorName(Color c);  // "white" / "black"
Color ParseColor(std::string_view name);

enum class PieceType : uint8_t {
  kPawn = 0,
  kKnight = 1,
  kBishop = 2,
  kRook = 3,
  kQueen = 4,
  kKing = 5,
};
inline constexpr int kNumPieceTypes = 6;

struct Piece {
  Color color;
  PieceType type;

  // Index in [0, 12): white P..K then black P..K.
  constexpr int Index() const {
    return static_cast<int>(color) * kNumPieceTypes + static_cast<int>(type);
  }
  static constexpr Piece FromIndex(int index) {
    return Piece{static_cast<Color>(index / kNumPieceTypes),
                 static_cast<PieceType>(index % kNumPieceTypes)};
  }
  char Symbol() const;  // FEN letter, upper case for white
  static std::optional<Piece> FromSymbol(char c);

  auto operator<=>(const Piece&) const = default;
};

class Square {
 public:
  constexpr Square() = default;
  constexpr explicit Square(int index) : index_(static_cast<int8_t>(index)) {
    if (index < 0 || index > 63) {
      throw InvalidInput("square index out of range: " + std::to_string(index));
    }
  }
  static constexpr Square At(int file, int rank) {
    if (file < 0 || file > 7 || rank < 0 || rank > 7) {
      throw InvalidInput("file/rank out of range");
    }
    return Square(rank * 8 + file);
  }
  static constexpr bool OnBoard(int file, int rank) {
    return file >= 0 && file < 8 && rank >= 0 && rank < 8;
  }
  // Algebraic name such as "e4"; throws InvalidInput.
  static Square Parse(std::string_view name);

  constexpr int index() const { return index_; }
  constexpr int file() const { return index_ & 7; }
  constexpr int rank() const { return index_ >> 3; }
  // Files b-g and ranks 2-7.
  constexpr bool IsInterior() const {
    return file() > 0 && file() < 7 && rank() > 0 && rank() < 7;
  }
  std::string Name() const;

  auto operator<=>(const Square&) const = default;

 private:
  int8_t index_ = 0;
};

// A move request: a pass, or from/to with an optional promotion piece.
class MoveRequest {
 public:
  constexpr MoveRequest() = default;  // pass
  MoveRequest(Square from, Square to,
              std::optional<PieceType> promotion = std::nullopt);
  static constexpr MoveRequest Pass() { return MoveRequest(); }
  // UCI long algebraic ("e2e4", "e7e8q"); "0000" or "pass" is a pass.
  static MoveRequest Parse(std::string_view uci);

  bool is_pass() const { return is_pass_; }
  Square from() const { return from_; }
  Square to() const { return to_; }
  std::optional<PieceType> promotion() const { return promotion_; }
  std::string Uci() const;

  auto operator<=>(const MoveRequest&) const = default;

 private:
  bool is_pass_ = true;
  Square from_;
  Square to_;
  std::optional<PieceType> promotion_;
};

enum CastlingRight : uint8_t {
  kWhiteKingside = 1,
  kWhiteQueenside = 2,
  kBlackKingside = 4,
  kBlackQueenside = 8,
};

// Full perfect-information RBC state. Defaulted ordering is the canonical
// board key: placement first, then side, castling, en passant, counters.
class Board {
 public:
  Board() = default;  // empty board, white to move
  static Board Initial();
  static Board FromFen(std::string_view fen);
  std::string Fen() const;

  std::optional<Piece> PieceAt(Square sq) const {
    uint8_t c = cells_[sq.index()];
    if (c == 0) return std::nullopt;
    return Piece::FromIndex(c - 1);
  }
  // 0 for empty, otherwise 1 + Piece::Index().
  uint8_t Code(Square sq) const { return cells_[sq.index()]; }
  void SetPiece(Square sq, std::optional<Piece> piece) {
    cells_[sq.index()] = piece ? static_cast<uint8_t>(piece->Index() + 1) : 0;
  }
  std::optional<Square> KingSquare(Color c) const;

  Color side_to_move() const { return static_cast<Color>(side_); }
  void set_side_to_move(Color c) { side_ = static_cast<uint8_t>(c); }
  uint8_t castling() const { return castling_; }
  bool HasCastling(CastlingRight right) const { return castling_ & right; }
  void set_castling(uint8_t rights) { castling_ = rights & 15; }
  std::optional<Square> en_passant() const {
    if (ep_ < 0) return std::nullopt;
    return Square(ep_);
  }
  void set_en_passant(std::optional<Square> sq) {
    ep_ = sq ? static_cast<int8_t>(sq->index()) : int8_t{-1};
  }
  int progress_counter() const { return progress_; }
  void set_progress_counter(int v) { progress_ = static_cast<uint16_t>(v); }
  int fullmove_number() const { return fullmove_; }
  void set_fullmove_number(int v) { fullmove_ = static_cast<uint16_t>(v); }

  int PieceCount() const;
  // Board holding only the pieces of one color; other fields copied.
  Board OnlyColor(Color c) const;
  size_t Hash() const;
  // Human-readable 8x8 diagram.
  std::string Diagram() const;

  auto operator<=>(const Board&) const = default;
  bool operator==(const Board&) const = default;

 private:
  std::array<uint8_t, 64> cells_{};
  uint8_t side_ = 0;
  uint8_t castling_ = 0;
  int8_t ep_ = -1;
  uint16_t progress_ = 0;
  uint16_t fullmove_ = 1;
};

}  // namespace rbc

template <>
struct std::hash<rbc::Board> {
  size_t operator()(const rbc::Board& b) const { return b.Hash(); }
};

#endif  // RBC_BOARD_H_
