#include "rbc/board.h"

#include <cctype>
#include <sstream>
#include <vector>

namespace rbc {

namespace {

constexpr char kSymbols[] = "PNBRQKpnbrqk";

std::vector<std::string_view> SplitSpaces(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

int ParseCounter(std::string_view s, std::string_view fen) {
  if (s.empty() || s.size() > 5) throw ParseError("bad FEN counter: " + std::string(fen));
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("bad FEN counter: " + std::string(fen));
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

std::string ColorName(Color c) { return c == Color::kWhite ? "white" : "black"; }

Color ParseColor(std::string_view name) {
  if (name == "white" || name == "w") return Color::kWhite;
  if (name == "black" || name == "b") return Color::kBlack;
  throw InvalidInput("unknown color: " + std::string(name));
}

char Piece::Symbol() const { return kSymbols[Index()]; }

std::optional<Piece> Piece::FromSymbol(char c) {
  for (int i = 0; i < 12; ++i) {
    if (kSymbols[i] == c) return Piece::FromIndex(i);
  }
  return std::nullopt;
}

Square Square::Parse(std::string_view name) {
  if (name.size() != 2 || name[0] < 'a' || name[0] > 'h' || name[1] < '1' ||
      name[1] > '8') {
    throw InvalidInput("bad square name: '" + std::string(name) + "'");
  }
  return Square::At(name[0] - 'a', name[1] - '1');
}

std::string Square::Name() const {
  return std::string{static_cast<char>('a' + file()),
                     static_cast<char>('1' + rank())};
}

MoveRequest::MoveRequest(Square from, Square to,
                         std::optional<PieceType> promotion)
    : is_pass_(false), from_(from), to_(to), promotion_(promotion) {
  if (from == to) throw InvalidInput("move request with from == to");
}

MoveRequest MoveRequest::Parse(std::string_view uci) {
  if (uci == "0000" || uci == "pass") return Pass();
  if (uci.size() != 4 && uci.size() != 5) {
    throw InvalidInput("bad move request: '" + std::string(uci) + "'");
  }
  Square from = Square::Parse(uci.substr(0, 2));
  Square to = Square::Parse(uci.substr(2, 2));
  std::optional<PieceType> promo;
  if (uci.size() == 5) {
    switch (uci[4]) {
      case 'n': promo = PieceType::kKnight; break;
      case 'b': promo = PieceType::kBishop; break;
      case 'r': promo = PieceType::kRook; break;
      case 'q': promo = PieceType::kQueen; break;
      default:
        throw InvalidInput("bad promotion in '" + std::string(uci) + "'");
    }
  }
  return MoveRequest(from, to, promo);
}

std::string MoveRequest::Uci() const {
  if (is_pass_) return "0000";
  std::string s = from_.Name() + to_.Name();
  if (promotion_) {
    s += static_cast<char>(
        std::tolower(Piece{Color::kBlack, *promotion_}.Symbol()));
  }
  return s;
}

Board Board::Initial() {
  return FromFen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

Board Board::FromFen(std::string_view fen) {
  auto fields = SplitSpaces(fen);
  if (fields.size() != 4 && fields.size() != 6) {
    throw ParseError("FEN needs 4 or 6 fields: '" + std::string(fen) + "'");
  }
  Board b;
  int rank = 7, file = 0;
  for (char c : fields[0]) {
    if (c == '/') {
      if (file != 8 || rank == 0) throw ParseError("bad FEN rows: " + std::string(fen));
      --rank;
      file = 0;
    } else if (c >= '1' && c <= '8') {
      file += c - '0';
      if (file > 8) throw ParseError("bad FEN row: " + std::string(fen));
    } else {
      auto piece = Piece::FromSymbol(c);
      if (!piece || file > 7) throw ParseError("bad FEN piece: " + std::string(fen));
      b.SetPiece(Square::At(file, rank), piece);
      ++file;
    }
  }
  if (rank != 0 || file != 8) throw ParseError("bad FEN board: " + std::string(fen));

  if (fields[1] == "w") {
    b.side_ = 0;
  } else if (fields[1] == "b") {
    b.side_ = 1;
  } else {
    throw ParseError("bad FEN side: " + std::string(fen));
  }

  if (fields[2] != "-") {
    for (char c : fields[2]) {
      switch (c) {
        case 'K': b.castling_ |= kWhiteKingside; break;
        case 'Q': b.castling_ |= kWhiteQueenside; break;
        case 'k': b.castling_ |= kBlackKingside; break;
        case 'q': b.castling_ |= kBlackQueenside; break;
        default: throw ParseError("bad FEN castling: " + std::string(fen));
      }
    }
  }
  if (fields[3] != "-") {
    try {
      b.set_en_passant(Square::Parse(fields[3]));
    } catch (const InvalidInput&) {
      throw ParseError("bad FEN en passant: " + std::string(fen));
    }
  }
  if (fields.size() == 6) {
    b.progress_ = static_cast<uint16_t>(ParseCounter(fields[4], fen));
    b.fullmove_ = static_cast<uint16_t>(ParseCounter(fields[5], fen));
    if (b.fullmove_ < 1) throw ParseError("FEN fullmove must be >= 1");
  }
  return b;
}

std::string Board::Fen() const {
  std::string s;
  for (int rank = 7; rank >= 0; --rank) {
    int empty = 0;
    for (int file = 0; file < 8; ++file) {
      auto p = PieceAt(Square::At(file, rank));
      if (!p) {
        ++empty;
        continue;
      }
      if (empty) s += static_cast<char>('0' + empty);
      empty = 0;
      s += p->Symbol();
    }
    if (empty) s += static_cast<char>('0' + empty);
    if (rank > 0) s += '/';
  }
  s += side_ == 0 ? " w " : " b ";
  if (castling_ == 0) {
    s += '-';
  } else {
    if (castling_ & kWhiteKingside) s += 'K';
    if (castling_ & kWhiteQueenside) s += 'Q';
    if (castling_ & kBlackKingside) s += 'k';
    if (castling_ & kBlackQueenside) s += 'q';
  }
  s += ' ';
  s += ep_ < 0 ? std::string("-") : Square(ep_).Name();
  s += ' ' + std::to_string(progress_) + ' ' + std::to_string(fullmove_);
  return s;
}

std::optional<Square> Board::KingSquare(Color c) const {
  const uint8_t code = Piece{c, PieceType::kKing}.Index() + 1;
  for (int i = 0; i < 64; ++i) {
    if (cells_[i] == code) return Square(i);
  }
  return std::nullopt;
}

int Board::PieceCount() const {
  int n = 0;
  for (uint8_t c : cells_) n += c != 0;
  return n;
}

Board Board::OnlyColor(Color c) const {
  Board b = *this;
  for (auto& cell : b.cells_) {
    if (cell != 0 && Piece::FromIndex(cell - 1).color != c) cell = 0;
  }
  return b;
}

size_t Board::Hash() const {
  // FNV-1a over the fields that define equality.
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (uint8_t c : cells_) mix(c);
  mix(side_);
  mix(castling_);
  mix(static_cast<uint8_t>(ep_));
  mix(progress_);
  mix(fullmove_);
  return static_cast<size_t>(h);
}

std::string Board::Diagram() const {
  std::ostringstream out;
  for (int rank = 7; rank >= 0; --rank) {
    out << (rank + 1) << ' ';
    for (int file = 0; file < 8; ++file) {
      auto p = PieceAt(Square::At(file, rank));
      out << (p ? p->Symbol() : '.');
    }
    out << '\n';
  }
  out << "  abcdefgh\n";
  return out.str();
}

}  // namespace rbc
