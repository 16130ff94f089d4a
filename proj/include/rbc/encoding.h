#ifndef RBC_ENCODING_H_
#define RBC_ENCODING_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbc/board.h"
#include "rbc/infoset.h"

namespace rbc {

inline constexpr int kBoardChannels = 12;
inline constexpr int kMovePlanes = 73;
inline constexpr int kTurnChannels = 1 + kMovePlanes + 1 + 1 + 6 + 1 + 6 + 1;
inline constexpr int kHistoryTurns = 20;
inline constexpr int kRosterSize = 50;
inline constexpr int kHistoryChannels = kHistoryTurns * kTurnChannels + kRosterSize;
inline constexpr int kPairChannels = kHistoryChannels + kBoardChannels;

// Channel offsets inside one turn encoding.
namespace turn_plane {
inline constexpr int kOpponentCapture = 0;
inline constexpr int kMove = 1;
inline constexpr int kOwnCapture = kMove + kMovePlanes;  // 74
inline constexpr int kIllegal = kOwnCapture + 1;         // 75
inline constexpr int kOwnPieces = kIllegal + 1;          // 76..81
inline constexpr int kSenseWindow = kOwnPieces + 6;      // 82
inline constexpr int kSenseResult = kSenseWindow + 1;    // 83..88
inline constexpr int kColor = kSenseResult + 6;          // 89
}  // namespace turn_plane

static_assert(kTurnChannels == 90);
static_assert(kHistoryChannels == 1850);
static_assert(kPairChannels == 1862);

// C x 8 x 8 binary planes; cell (rank, file) of channel c lives at
// c * 64 + rank * 8 + file (rank 0 is the first rank for both colors).
class PlaneStack {
 public:
  explicit PlaneStack(int channels = 0)
      : channels_(channels), data_(static_cast<size_t>(channels) * 64, 0.0f) {}

  int channels() const { return channels_; }
  const std::vector<float>& data() const { return data_; }
  float At(int channel, Square sq) const {
    return data_[static_cast<size_t>(channel) * 64 + sq.index()];
  }
  void Set(int channel, Square sq) {
    data_[static_cast<size_t>(channel) * 64 + sq.index()] = 1.0f;
  }
  void Fill(int channel) {
    std::fill_n(data_.begin() + static_cast<long>(channel) * 64, 64, 1.0f);
  }
  int PlaneCount(int channel) const;
  int Total() const;
  // Copies `other` into channels [offset, offset + other.channels()).
  void Paste(const PlaneStack& other, int offset);

  bool operator==(const PlaneStack&) const = default;

 private:
  int channels_;
  std::vector<float> data_;
};

// Ordered opponent names; position = one-hot plane index.
class Roster {
 public:
  Roster() = default;
  explicit Roster(std::vector<std::string> names);
  // One name per line; blank lines and '#' comments are skipped.
  static Roster Load(const std::string& path);

  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> IndexOf(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

// Plane order: white P,N,B,R,Q,K then black P,N,B,R,Q,K.
PlaneStack EncodeBoard(const Board& board);
// Placement recovered from a 12-channel stack (other fields default).
Board DecodeBoardPlacement(const PlaneStack& planes);

// AlphaZero move layout: planes 0-55 are 8 directions x 7 distances
// (N, NE, E, SE, S, SW, W, NW), 56-63 knight jumps, 64-72 underpromotions
// (knight, bishop, rook) x (left, straight, right). The bit goes on the
// from-square. Throws InvalidInput for a pass or an unencodable move.
std::pair<int, Square> EncodeMove73(const MoveRequest& move);

PlaneStack EncodeTurn(const TurnObservation& obs);
// 20 most recent turns, oldest first and zero-padded at the old end, then the
// opponent one-hot planes.
PlaneStack EncodeHistory(const ObservationHistory& history, const Roster& roster);
PlaneStack EncodePair(const ObservationHistory& history, const Board& board,
                      const Roster& roster);

std::vector<std::string> ChannelNames(int channels);

}  // namespace rbc

#endif  // RBC_ENCODING_H_
