// A scripted UCI engine for protocol tests. Its reply to "go" depends on the
// fullmove number of the last position: 96 sends a garbled move, 97 a mate
// score and no move, 98 stays silent, 99 exits; anything else scores +200cp
// and plays e2e4 or e7e5.
#include <iostream>
#include <sstream>
#include <string>

int main() {
  std::string line;
  int fullmove = 1;
  bool white = true;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    if (cmd == "uci") {
      std::cout << "id name FakeFish\nid author nobody\nuciok" << std::endl;
    } else if (cmd == "isready") {
      std::cout << "readyok" << std::endl;
    } else if (cmd == "position") {
      std::string fen_kw, placement, side, castling, ep, half;
      in >> fen_kw >> placement >> side >> castling >> ep >> half >> fullmove;
      white = side == "w";
    } else if (cmd == "go") {
      switch (fullmove) {
        case 96:
          std::cout << "bestmove zz99" << std::endl;
          break;
        case 97:
          std::cout << "info depth 3 score mate -2\nbestmove (none)" << std::endl;
          break;
        case 98:
          break;
        case 99:
          return 0;
        default:
          std::cout << "info depth 1 score cp 50\ninfo depth 2 seldepth 3 score cp 200 nodes 10 pv "
                    << (white ? "e2e4" : "e7e5") << "\nbestmove " << (white ? "e2e4" : "e7e5")
                    << std::endl;
      }
    } else if (cmd == "quit") {
      return 0;
    }
  }
  return 0;
}
