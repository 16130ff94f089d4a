// rbc: self-play, training, evaluation, weighting inspection and arena runs.

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "rbc/arena.h"
#include "rbc/bots.h"
#include "rbc/data.h"
#include "rbc/encoding.h"
#include "rbc/errors.h"
#include "rbc/metrics.h"
#include "rbc/model.h"
#include "rbc/parallel.h"
#include "rbc/train.h"
#include "rbc/weighting.h"

namespace fs = std::filesystem;
using namespace rbc;

namespace {

// Bad flags or arguments detected after parsing; exits with the usage code.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDataError = 3,
  kCheckpointFailure = 4,
  kEngineFailure = 5,
  kIoFailure = 6,
};

struct Globals {
  uint64_t seed = 0;
  int threads = DefaultThreads();
  std::string log_level = "info";
  bool force = false;
};

// Options shared by every subcommand that builds bots.
struct BotOptions {
  std::string checkpoint;
  std::string cnn_checkpoint;
  std::string evaluator = "material";
  std::string engine_path;
  int engine_depth = 8;
  AgentConfig agent;
};

const std::vector<std::string> kBotNames = {"random", "attacker", "trout", "passive",
                                            "uniform", "siamese", "cnn"};

bool IsAgentName(const std::string& name) {
  return name == "uniform" || name == "siamese" || name == "cnn";
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void CheckBotName(const std::string& name) {
  if (std::find(kBotNames.begin(), kBotNames.end(), name) == kBotNames.end()) {
    throw UsageError(fmt::format("unknown bot '{}' (known: {})", name,
                                 fmt::join(kBotNames, ", ")));
  }
}

// Output paths must be fresh unless --force is given.
// A directory of .rbcl logs or a single log file.
std::vector<GameRecord> LoadGames(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("no such file or directory: " + path);
  return fs::is_directory(path) ? ReadGameDir(path) : ReadGames(path);
}

void CheckFreshFile(const std::string& path, const Globals& g) {
  if (!g.force && fs::exists(path)) {
    throw UsageError(path + " exists; pass --force to overwrite");
  }
}

void PrepareOutputDir(const std::string& dir, const Globals& g) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw UsageError(dir + " exists and is not a directory");
    if (!g.force && !fs::is_empty(dir)) {
      throw UsageError(dir + " is not empty; pass --force to overwrite");
    }
  }
  fs::create_directories(dir);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

std::shared_ptr<Evaluator> BuildEvaluator(const BotOptions& o) {
  UciOptions uci;
  uci.path = o.engine_path;
  uci.depth = o.engine_depth;
  return std::shared_ptr<Evaluator>(MakeEvaluator(o.evaluator, uci));
}

// Builds one factory per bot name. Models are loaded once and shared.
class BotFactoryBuilder {
 public:
  explicit BotFactoryBuilder(BotOptions options) : options_(std::move(options)) {}

  BotFactory Make(const std::string& name, double temperature) {
    CheckBotName(name);
    if (name == "random") return [](uint64_t s) { return std::make_unique<RandomBot>(s); };
    if (name == "attacker") return [](uint64_t s) { return std::make_unique<AttackerBot>(s); };
    if (name == "trout") return [](uint64_t s) { return std::make_unique<TroutBot>(s); };
    if (name == "passive") return [](uint64_t) { return std::make_unique<PassiveBot>(); };
    std::shared_ptr<const WeightProvider> provider = Provider(name);
    AgentConfig config = options_.agent;
    config.temperature = temperature;
    config.Validate();
    const BotOptions opts = options_;
    const std::string label = name;
    return [provider, config, opts, label](uint64_t s) -> std::unique_ptr<Bot> {
      AgentConfig c = config;
      c.seed = s;
      return std::make_unique<Agent>(label, provider, BuildEvaluator(opts), c);
    };
  }

 private:
  std::shared_ptr<const WeightProvider> Provider(const std::string& name) {
    auto it = providers_.find(name);
    if (it != providers_.end()) return it->second;
    std::shared_ptr<const WeightProvider> p;
    if (name == "uniform") {
      p = std::make_shared<UniformProvider>();
    } else if (name == "siamese") {
      if (options_.checkpoint.empty()) throw UsageError("bot 'siamese' needs --ckpt");
      p = std::make_shared<SiameseProvider>(
          std::shared_ptr<const SiameseModel>(LoadSiamese(options_.checkpoint)));
    } else {
      const std::string& path =
          options_.cnn_checkpoint.empty() ? options_.checkpoint : options_.cnn_checkpoint;
      if (path.empty()) throw UsageError("bot 'cnn' needs --cnn-ckpt");
      p = std::make_shared<CnnProvider>(std::shared_ptr<const CnnModel>(LoadCnn(path)));
    }
    providers_[name] = p;
    return p;
  }

  BotOptions options_;
  std::map<std::string, std::shared_ptr<const WeightProvider>> providers_;
};

void AddBotOptions(CLI::App* cmd, BotOptions& o) {
  cmd->add_option("--ckpt", o.checkpoint, "Siamese checkpoint for agent bots");
  cmd->add_option("--cnn-ckpt", o.cnn_checkpoint, "CNN checkpoint for the cnn bot");
  cmd->add_option("--evaluator", o.evaluator, "material | material:DEPTH | uci")
      ->capture_default_str();
  cmd->add_option("--engine", o.engine_path, "UCI engine binary (else RBC_ENGINE_PATH)");
  cmd->add_option("--engine-depth", o.engine_depth, "UCI search depth")->capture_default_str();
  cmd->add_option("--set-cap", o.agent.set_cap, "information set cap for agents")
      ->capture_default_str();
  cmd->add_option("--sense-budget", o.agent.sense_board_budget,
                  "boards considered when sensing")
      ->capture_default_str();
  cmd->add_option("--move-budget", o.agent.move_board_budget, "boards considered when moving")
      ->capture_default_str();
  cmd->add_option("--candidates", o.agent.candidate_cap, "candidate move cap")
      ->capture_default_str();
}

// ---------------------------------------------------------------- selfplay

struct SelfplayArgs {
  std::string white = "random";
  std::string black = "random";
  int games = 1;
  std::string out;
  int max_half_turns = kDefaultTurnLimit;
  size_t record_fens = 0;
  double temperature = kDefaultTemperature;
  BotOptions bots;
};

int RunSelfplay(const SelfplayArgs& a, const Globals& g) {
  CheckBotName(a.white);
  CheckBotName(a.black);
  if (a.games < 0) throw UsageError("--games must be >= 0");
  BotFactoryBuilder builder(a.bots);
  const BotFactory white = builder.Make(a.white, a.temperature);
  const BotFactory black = builder.Make(a.black, a.temperature);
  PrepareOutputDir(a.out, g);
  GameOptions options;
  options.max_half_turns = a.max_half_turns;
  options.record_set_fens = a.record_fens;

  const size_t n = static_cast<size_t>(a.games);
  std::vector<GameRecord> records(n);
  ParallelFor(n, g.threads, [&](size_t i) {
    const uint64_t seed = GameSeed(g.seed, 0, i);
    auto w = white(GameSeed(seed, 1, 0));
    auto b = black(GameSeed(seed, 2, 0));
    records[i] = PlayGame(*w, *b, seed, options);
  });
  std::map<std::string, int> results;
  for (size_t i = 0; i < n; ++i) {
    WriteGames((fs::path(a.out) / fmt::format("game-{:06}.rbcl", i)).string(), {records[i]});
    const GameRecord& r = records[i];
    ++results[r.winner ? std::string(ColorName(*r.winner)) : std::string("draw")];
  }
  spdlog::info("wrote {} games to {}", n, a.out);
  for (const auto& [k, v] : results) spdlog::info("  {}: {}", k, v);
  return kOk;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::string model = "siamese";
  std::string preset = "desk";
  std::string out;
  std::string resume;
  std::string roster;
  std::string loss_csv;
  double split = 0.9;
  size_t set_cap = kDefaultSetCap;
  int epochs = 0;
  int batch_size = 0;
  double learning_rate = 0;
  double target_loss = -1;
  int patience = 0;
};

Roster RosterFor(const TrainArgs& a, const std::vector<GameRecord>& games) {
  if (!a.roster.empty()) return Roster::Load(a.roster);
  std::set<std::string> names;
  for (const auto& game : games) {
    names.insert(game.white);
    names.insert(game.black);
  }
  return Roster(std::vector<std::string>(names.begin(), names.end()));
}

template <typename Model>
void ResumeModel(const std::string& path, Model& model, nn::AdamW<float>& opt) {
  try {
    LoadCheckpoint(path, model, &opt);
  } catch (const CheckpointError& e) {
    if (std::string(e.what()).find("no optimizer state") == std::string::npos) throw;
    spdlog::warn("{}: no optimizer state, resuming with fresh moments", path);
    LoadCheckpoint(path, model);
  }
}

int RunTrain(const TrainArgs& a, const Globals& g) {
  if (a.model != "siamese" && a.model != "cnn") {
    throw UsageError("--model must be siamese or cnn");
  }
  if (!(a.split > 0 && a.split < 1)) throw UsageError("--split must lie in (0, 1)");
  const NetworkConfig network = NetworkConfig::FromPreset(a.preset);
  TrainConfig config = a.preset == "desk" ? TrainConfig::Desk() : TrainConfig();
  config.seed = g.seed;
  if (a.epochs > 0) config.max_epochs = a.epochs;
  if (a.batch_size > 0) config.batch_size = a.batch_size;
  if (a.learning_rate > 0) config.learning_rate = a.learning_rate;
  if (a.patience > 0) config.patience = a.patience;
  config.target_loss = a.target_loss;
  config.Validate();
  const std::string csv_path = a.loss_csv.empty() ? a.out + ".csv" : a.loss_csv;
  CheckFreshFile(a.out, g);
  CheckFreshFile(csv_path, g);

  const std::vector<GameRecord> games = LoadGames(a.data);
  if (games.empty()) throw InvalidInput("no games in " + a.data);
  const auto [train_games, test_games] = Split(games, a.split, g.seed);
  TripletStats train_stats, test_stats;
  const auto train = BuildDataset(train_games, a.set_cap, &train_stats, g.threads);
  const auto test = BuildDataset(test_games, a.set_cap, &test_stats, g.threads);
  spdlog::info("{} games: {} train / {} test; {} train records, {} test records",
               games.size(), train_games.size(), test_games.size(), train.size(), test.size());
  spdlog::info("skipped: {} singleton, {} clipped decisions",
               train_stats.singleton_skipped + test_stats.singleton_skipped,
               train_stats.clipped_skipped + test_stats.clipped_skipped);
  if (train.empty()) throw InvalidInput("no training records in " + a.data);
  const Roster roster = RosterFor(a, games);

  std::string csv = "epoch,train_loss,eval_loss,train_accuracy,samples,records\n";
  auto on_epoch = [&](const EpochStats& s) {
    csv += fmt::format("{},{},{},{},{},{}\n", s.epoch, s.train_loss, s.eval_loss,
                       s.train_accuracy, s.samples, s.records);
    return true;
  };
  auto report = [&](const TrainResult& r) {
    spdlog::info("trained {} epochs; best epoch {} with eval loss {:.6f}{}{}", r.epochs.size(),
                 r.best_epoch, r.best_eval_loss, r.early_stopped ? "; stopped early" : "",
                 r.reached_target ? "; reached target" : "");
  };

  if (a.model == "siamese") {
    SiameseModel model(network, roster, g.seed);
    nn::AdamW<float> opt(model.net().Params(), config.Optimizer());
    if (!a.resume.empty()) ResumeModel(a.resume, model, opt);
    report(TrainSiamese(train, test, model, config, &opt, on_epoch));
    spdlog::info("test top-1 {:.4f} over {} records", SiameseTop1(model, test), test.size());
    SaveCheckpoint(a.out, model, &opt);
  } else {
    CnnModel model(network, roster, g.seed);
    nn::AdamW<float> opt(model.net().Params(), config.Optimizer());
    if (!a.resume.empty()) ResumeModel(a.resume, model, opt);
    report(TrainCnn(train, test, model, config, &opt, on_epoch));
    spdlog::info("test pair accuracy {:.4f}", CnnAccuracy(model, test, g.seed));
    SaveCheckpoint(a.out, model, &opt);
  }
  WriteText(csv_path, csv);
  spdlog::info("wrote {} and {}", a.out, csv_path);
  return kOk;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string data;
  std::string provider = "uniform";
  std::string checkpoint;
  std::string report;
  std::string subset = "all";
  double split = 0.9;
  size_t set_cap = kDefaultSetCap;
  double temperature = kDefaultTemperature;
  BotOptions bots;
};

std::vector<GameRecord> SelectGames(const std::string& path, const std::string& subset,
                                    double split, uint64_t seed) {
  std::vector<GameRecord> games = LoadGames(path);
  if (subset == "all") return games;
  if (subset != "train" && subset != "test") throw UsageError("--subset must be all|train|test");
  auto [train, test] = Split(games, split, seed);
  return subset == "train" ? train : test;
}

int RunEval(const EvalArgs& a, const Globals& g) {
  CheckFreshFile(a.report, g);
  const std::string stem = fs::path(a.report).replace_extension().string();
  CheckFreshFile(stem + ".csv", g);
  CheckFreshFile(stem + ".txt", g);
  auto provider = MakeProvider(a.provider, a.checkpoint, g.seed, BuildEvaluator(a.bots));
  const auto games = SelectGames(a.data, a.subset, a.split, g.seed);
  EvalOptions options;
  options.cap = a.set_cap;
  options.temperature = a.temperature;
  options.tie_seed = g.seed;
  // Engine evaluators keep per-process state.
  options.threads = a.provider == "engine" ? 1 : g.threads;
  const RankingEval eval = EvaluateProvider(*provider, games, options);
  WriteText(a.report, eval.ToJson());
  WriteText(stem + ".csv", eval.CurveCsv());
  WriteText(stem + ".txt", eval.ToText());
  std::cout << eval.ToText();
  spdlog::info("wrote {}, {}.csv and {}.txt", a.report, stem, stem);
  return kOk;
}

// ------------------------------------------------------------------- weigh

struct WeighArgs {
  std::string data;
  std::string provider = "siamese";
  std::string checkpoint;
  std::string out;
  size_t game = 0;
  std::string player = "white";
  size_t turn = 0;
  size_t set_cap = kDefaultSetCap;
  double temperature = kDefaultTemperature;
  BotOptions bots;
};

int RunWeigh(const WeighArgs& a, const Globals& g) {
  if (!a.out.empty()) CheckFreshFile(a.out, g);
  const Color player = a.player == "white"   ? Color::kWhite
                       : a.player == "black" ? Color::kBlack
                                             : throw UsageError("--player must be white|black");
  const std::vector<GameRecord> games = LoadGames(a.data);
  if (a.game >= games.size()) {
    throw UsageError(fmt::format("--game {} out of range ({} games)", a.game, games.size()));
  }
  auto provider = MakeProvider(a.provider, a.checkpoint, g.seed, BuildEvaluator(a.bots));
  nlohmann::json out;
  bool found = false;
  ForEachDecision(games[a.game], player, a.set_cap, g.threads, [&](const DecisionView& v) {
    if (v.turn != a.turn) return;
    found = true;
    const ObservationHistory anchor = AnchorHistory(v.history, v.turn);
    const auto& boards = v.set.boards();
    const auto scores = provider->Scores(anchor, boards);
    const auto weights = provider->Weights(anchor, boards, a.temperature);
    const auto order = Rank(scores);
    std::vector<size_t> rank(boards.size());
    for (size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
    nlohmann::json rows = nlohmann::json::array();
    for (size_t r = 0; r < order.size(); ++r) {
      const size_t i = order[r];
      rows.push_back({{"fen", boards[i].Fen()},
                      {"distance", scores[i]},
                      {"weight", weights[i]},
                      {"rank", rank[i]},
                      {"true", boards[i] == v.truth}});
    }
    out = {{"provider", provider->Name()},
           {"game", a.game},
           {"player", a.player},
           {"turn", a.turn},
           {"temperature", a.temperature},
           {"set_size", boards.size()},
           {"truncated", v.set.truncated()},
           {"boards", rows}};
  });
  if (!found) throw UsageError(fmt::format("no decision at turn {} for {}", a.turn, a.player));
  const std::string text = out.dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    WriteText(a.out, text);
    spdlog::info("wrote {}", a.out);
  }
  return kOk;
}

// ------------------------------------------------------------------- arena

struct ArenaArgs {
  std::string bots = "uniform,random";
  int games = 10;
  std::string temps;
  std::string out;
  int max_half_turns = kDefaultTurnLimit;
  BotOptions bot_options;
};

std::string TempLabel(double t) { return fmt::format("{}", t); }

int RunArena(const ArenaArgs& a, const Globals& g) {
  const std::vector<std::string> names = SplitList(a.bots);
  for (const auto& n : names) CheckBotName(n);
  if (names.size() < 2 && a.temps.empty()) throw UsageError("--bots needs at least two bots");
  std::vector<double> temps;
  for (const auto& t : SplitList(a.temps)) {
    try {
      temps.push_back(std::stod(t));
    } catch (const std::exception&) {
      throw UsageError("bad temperature '" + t + "'");
    }
  }
  if (temps.empty()) temps.push_back(kDefaultTemperature);
  if (a.games < 1) throw UsageError("--games must be >= 1");
  PrepareOutputDir(a.out, g);

  BotFactoryBuilder builder(a.bot_options);
  std::vector<BotEntry> entries;
  std::vector<std::pair<size_t, size_t>> pairs;
  if (temps.size() == 1) {
    for (const auto& n : names) entries.push_back({n, builder.Make(n, temps[0])});
    pairs = RoundRobinPairs(entries.size());
  } else {
    // Sweep: each agent at each temperature against every other bot.
    for (const auto& n : names) {
      if (!IsAgentName(n)) continue;
      for (double t : temps) entries.push_back({n + "@t=" + TempLabel(t), builder.Make(n, t)});
    }
    const size_t agents = entries.size();
    if (agents == 0) throw UsageError("--temps needs an agent bot (siamese, cnn or uniform)");
    for (const auto& n : names) {
      if (!IsAgentName(n)) entries.push_back({n, builder.Make(n, kDefaultTemperature)});
    }
    pairs = agents == entries.size() ? RoundRobinPairs(entries.size())
                                     : SweepPairs(agents, entries.size());
  }
  if (entries.size() < 2) throw UsageError("the arena needs at least two bots");

  GameOptions options;
  options.max_half_turns = a.max_half_turns;
  std::ofstream log((fs::path(a.out) / "games.rbcl").string(), std::ios::binary);
  const TournamentReport report =
      RunTournament(entries, pairs, a.games, g.seed, g.threads, options,
                    [&](size_t, int, const GameRecord& r) { AppendGame(log, r); });
  log.close();
  if (!log) throw std::ios_base::failure("cannot write games.rbcl");
  WriteText((fs::path(a.out) / "report.json").string(), report.ToJson() + "\n");
  WriteText((fs::path(a.out) / "report.txt").string(), report.ToText());
  std::cout << report.ToText();
  spdlog::info("wrote {}/report.json, report.txt and games.rbcl", a.out);
  return kOk;
}

// ------------------------------------------------------------- encode-dump

struct EncodeArgs {
  std::string fen;
  std::string data;
  std::string roster;
  std::string out;
  size_t game = 0;
  std::string player = "white";
  size_t turn = 0;
};

// NPY v1.0: magic, version, little-endian header length, a Python dict
// literal padded to a 64-byte boundary, then raw little-endian float32.
std::string NpyBytes(const PlaneStack& planes) {
  std::string header = fmt::format("{{'descr': '<f4', 'fortran_order': False, 'shape': ({}, 8, 8), }}",
                                   planes.channels());
  const size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header += '\n';
  std::string out("\x93NUMPY\x01\x00", 8);
  const uint16_t len = static_cast<uint16_t>(header.size());
  out += static_cast<char>(len & 0xff);
  out += static_cast<char>(len >> 8);
  out += header;
  out.append(reinterpret_cast<const char*>(planes.data().data()),
             planes.data().size() * sizeof(float));
  return out;
}

std::string PlaneGrid(const PlaneStack& planes, int c) {
  std::string out;
  for (int rank = 7; rank >= 0; --rank) {
    for (int file = 0; file < 8; ++file) {
      out += planes.At(c, Square::At(file, rank)) != 0.0f ? '1' : '.';
    }
    out += '\n';
  }
  return out;
}

int RunEncodeDump(const EncodeArgs& a, const Globals& g) {
  static_assert(std::endian::native == std::endian::little);
  PlaneStack planes;
  if (!a.data.empty()) {
    const std::vector<GameRecord> games = LoadGames(a.data);
    if (a.game >= games.size()) throw UsageError("--game out of range");
    const Color player = a.player == "black" ? Color::kBlack : Color::kWhite;
    const ObservationHistory full = games[a.game].History(player);
    if (a.turn >= full.turns.size()) throw UsageError("--turn out of range");
    const Roster roster = a.roster.empty() ? Roster() : Roster::Load(a.roster);
    const ObservationHistory anchor = AnchorHistory(full, a.turn);
    planes = a.fen.empty() ? EncodeHistory(anchor, roster)
                           : EncodePair(anchor, Board::FromFen(a.fen), roster);
  } else if (!a.fen.empty()) {
    planes = EncodeBoard(Board::FromFen(a.fen));
  } else {
    throw UsageError("encode-dump needs --fen, --data or both");
  }
  const std::vector<std::string> names = ChannelNames(planes.channels());
  if (a.out.empty()) {
    for (int c = 0; c < planes.channels(); ++c) {
      if (planes.PlaneCount(c) == 0) continue;
      std::cout << "channel " << c << " " << names[c] << "\n" << PlaneGrid(planes, c);
    }
    return kOk;
  }
  const std::string sidecar = fs::path(a.out).replace_extension(".json").string();
  CheckFreshFile(a.out, g);
  CheckFreshFile(sidecar, g);
  WriteText(a.out, NpyBytes(planes));
  nlohmann::json j = {{"shape", {planes.channels(), 8, 8}},
                      {"dtype", "float32"},
                      {"layout", "channel, rank, file; rank 0 is the first rank"},
                      {"channels", names}};
  WriteText(sidecar, j.dump(2) + "\n");
  spdlog::info("wrote {} and {}", a.out, sidecar);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconnaissance Blind Chess toolkit"};
  app.set_config("--config", "", "TOML config file; flags override it");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off")
      ->capture_default_str();
  app.add_flag("--force", g.force, "overwrite existing outputs");

  SelfplayArgs sp;
  auto* selfplay = app.add_subcommand("selfplay", "play games and write .rbcl logs");
  selfplay->add_option("--white", sp.white, "white bot")->capture_default_str();
  selfplay->add_option("--black", sp.black, "black bot")->capture_default_str();
  selfplay->add_option("--games", sp.games, "number of games")->capture_default_str();
  selfplay->add_option("--out", sp.out, "output directory")->required();
  selfplay->add_option("--max-half-turns", sp.max_half_turns, "arena turn limit")
      ->capture_default_str();
  selfplay->add_option("--record-fens", sp.record_fens, "store tracked sets up to this size")
      ->capture_default_str();
  selfplay->add_option("--temperature", sp.temperature, "agent softmin temperature")
      ->capture_default_str();
  AddBotOptions(selfplay, sp.bots);

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "train a Siamese or CNN model on game logs");
  train->add_option("--data", tr.data, ".rbcl log file or directory of logs")->required();
  train->add_option("--model", tr.model, "siamese | cnn")->capture_default_str();
  train->add_option("--preset", tr.preset, "paper | desk")->capture_default_str();
  train->add_option("--out", tr.out, "checkpoint path")->required();
  train->add_option("--resume", tr.resume, "checkpoint to continue from");
  train->add_option("--roster", tr.roster, "opponent roster, one name per line");
  train->add_option("--loss-csv", tr.loss_csv, "per-epoch CSV (default OUT.csv)");
  train->add_option("--split", tr.split, "training fraction of games")->capture_default_str();
  train->add_option("--set-cap", tr.set_cap, "information set cap")->capture_default_str();
  train->add_option("--epochs", tr.epochs, "maximum epochs (0 = preset)");
  train->add_option("--batch-size", tr.batch_size, "batch size (0 = preset)");
  train->add_option("--lr", tr.learning_rate, "learning rate (0 = preset)");
  train->add_option("--patience", tr.patience, "early stopping patience (0 = preset)");
  train->add_option("--target-loss", tr.target_loss, "stop once the eval loss drops below")
      ->capture_default_str();

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "rank information sets and report accuracy");
  eval->add_option("--data", ev.data, ".rbcl log file or directory of logs")->required();
  eval->add_option("--provider", ev.provider, "uniform|random|engine|siamese|cnn")
      ->capture_default_str();
  eval->add_option("--ckpt", ev.checkpoint, "model checkpoint");
  eval->add_option("--report", ev.report, "report JSON path (.csv and .txt next to it)")
      ->required();
  eval->add_option("--subset", ev.subset, "all | train | test")->capture_default_str();
  eval->add_option("--split", ev.split, "training fraction for --subset")->capture_default_str();
  eval->add_option("--set-cap", ev.set_cap, "information set cap")->capture_default_str();
  eval->add_option("--temperature", ev.temperature, "softmin temperature")
      ->capture_default_str();
  eval->add_option("--evaluator", ev.bots.evaluator, "evaluator for the engine provider")
      ->capture_default_str();
  eval->add_option("--engine", ev.bots.engine_path, "UCI engine binary");

  WeighArgs wg;
  auto* weigh = app.add_subcommand("weigh", "print the weighted information set of a decision");
  weigh->add_option("--data", wg.data, ".rbcl file or directory")->required();
  weigh->add_option("--provider", wg.provider, "uniform|random|engine|siamese|cnn")
      ->capture_default_str();
  weigh->add_option("--ckpt", wg.checkpoint, "model checkpoint");
  weigh->add_option("--game", wg.game, "game index")->capture_default_str();
  weigh->add_option("--player", wg.player, "white | black")->capture_default_str();
  weigh->add_option("--turn", wg.turn, "the player's turn index")->capture_default_str();
  weigh->add_option("--set-cap", wg.set_cap, "information set cap")->capture_default_str();
  weigh->add_option("--temperature", wg.temperature, "softmin temperature")
      ->capture_default_str();
  weigh->add_option("--out", wg.out, "output JSON (default stdout)");
  weigh->add_option("--evaluator", wg.bots.evaluator, "evaluator for the engine provider")
      ->capture_default_str();

  ArenaArgs ar;
  auto* arena = app.add_subcommand("arena", "run a tournament");
  arena->add_option("--bots", ar.bots, "comma separated bots")->capture_default_str();
  arena->add_option("--games", ar.games, "games per pair")->capture_default_str();
  arena->add_option("--temps", ar.temps, "comma separated agent temperatures");
  arena->add_option("--out", ar.out, "output directory")->required();
  arena->add_option("--max-half-turns", ar.max_half_turns, "turn limit")->capture_default_str();
  AddBotOptions(arena, ar.bot_options);

  EncodeArgs en;
  auto* encode = app.add_subcommand("encode-dump", "print network input planes");
  encode->add_option("--fen", en.fen, "board to encode (12 planes, or the pair with --data)");
  encode->add_option("--data", en.data, ".rbcl log (file or directory) for a history encoding");
  encode->add_option("--roster", en.roster, "opponent roster for history planes");
  encode->add_option("--out", en.out, "NPY output (a JSON sidecar goes next to it)");
  encode->add_option("--game", en.game, "game index")->capture_default_str();
  encode->add_option("--player", en.player, "white | black")->capture_default_str();
  encode->add_option("--turn", en.turn, "the player's turn index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  // No timestamps, so reruns produce identical logs.
  auto logger = spdlog::stderr_logger_st("rbc");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const auto level = spdlog::level::from_str(g.log_level);
  if (level == spdlog::level::off && g.log_level != "off") {
    std::cerr << "error: bad --log-level '" << g.log_level << "'\n";
    return kUsage;
  }
  spdlog::set_level(level);

  // The resolved config: globals, then the chosen subcommand's options.
  std::cerr << "# resolved config\n"
            << fmt::format("seed={}\nthreads={}\nlog-level=\"{}\"\nforce={}\n", g.seed,
                           g.threads, g.log_level, g.force);
  for (const CLI::App* sub : app.get_subcommands()) {
    std::cerr << "[" << sub->get_name() << "]\n" << sub->config_to_str(true, false);
  }
  std::cerr << "\n";
  try {
    if (*selfplay) return RunSelfplay(sp, g);
    if (*train) return RunTrain(tr, g);
    if (*eval) return RunEval(ev, g);
    if (*weigh) return RunWeigh(wg, g);
    if (*arena) return RunArena(ar, g);
    if (*encode) return RunEncodeDump(en, g);
  } catch (const UsageError& e) {
    spdlog::error("usage: {}", e.what());
    return kUsage;
  } catch (const InvalidInput& e) {
    spdlog::error("invalid input: {}", e.what());
    return kUsage;
  } catch (const ParseError& e) {
    spdlog::error("data error: {}", e.what());
    return kDataError;
  } catch (const CorruptRecord& e) {
    spdlog::error("data error: {}", e.what());
    return kDataError;
  } catch (const CheckpointError& e) {
    spdlog::error("checkpoint error: {}", e.what());
    return kCheckpointFailure;
  } catch (const EngineError& e) {
    spdlog::error("engine error: {}", e.what());
    return kEngineFailure;
  } catch (const std::ios_base::failure& e) {
    spdlog::error("i/o error: {}", e.what());
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("i/o error: {}", e.what());
    return kIoFailure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFailure;
  }
  return kFailure;
}
