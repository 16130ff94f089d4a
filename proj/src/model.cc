#include "rbc/model.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "rbc/errors.h"

namespace rbc {

namespace {

constexpr char kMagic[] = "RBCW1";
constexpr uint8_t kVersion = 1;
constexpr size_t kBoardChunk = 256;
constexpr size_t kPairChunk = 64;

using Json = nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

Json ConfigJson(const NetworkConfig& c) {
  return {{"encoder_layers", c.encoder_layers}, {"encoder_filters", c.encoder_filters},
          {"trunk_layers", c.trunk_layers},     {"trunk_filters", c.trunk_filters},
          {"embedding_dim", c.embedding_dim},   {"margin", c.margin}};
}

NetworkConfig ConfigFromJson(const Json& j) {
  NetworkConfig c;
  c.encoder_layers = j.at("encoder_layers").get<int>();
  c.encoder_filters = j.at("encoder_filters").get<int>();
  c.trunk_layers = j.at("trunk_layers").get<int>();
  c.trunk_filters = j.at("trunk_filters").get<int>();
  c.embedding_dim = j.at("embedding_dim").get<int>();
  c.margin = j.at("margin").get<double>();
  c.Validate();
  return c;
}

template <typename U>
void PutLe(std::ostream& out, U v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename U>
U GetLe(std::istream& in, const std::string& path) {
  U v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw CheckpointError(path + ": truncated checkpoint");
  }
  return v;
}

void PutArray(std::ostream& out, const std::string& name, const nn::Matrix<float>& m) {
  PutLe<uint32_t>(out, static_cast<uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  PutLe<uint32_t>(out, 2);
  PutLe<uint32_t>(out, static_cast<uint32_t>(m.rows()));
  PutLe<uint32_t>(out, static_cast<uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    PutLe<uint32_t>(out, std::bit_cast<uint32_t>(m.data()[i]));
  }
}

struct CheckpointFile {
  Json header;
  std::map<std::string, nn::Matrix<float>> arrays;
};

CheckpointFile ReadFile(const std::string& path, bool header_only) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0) {
    throw CheckpointError(path + ": bad magic header");
  }
  const auto version = GetLe<uint8_t>(in, path);
  if (version != kVersion) {
    throw CheckpointError(path + ": unsupported checkpoint version " +
                          std::to_string(version));
  }
  CheckpointFile file;
  const auto json_len = GetLe<uint32_t>(in, path);
  std::string text(json_len, '\0');
  if (!in.read(text.data(), json_len)) throw CheckpointError(path + ": truncated checkpoint");
  try {
    file.header = Json::parse(text);
  } catch (const Json::exception& e) {
    throw CheckpointError(path + ": bad config block: " + e.what());
  }
  if (header_only) return file;
  const auto count = GetLe<uint32_t>(in, path);
  for (uint32_t a = 0; a < count; ++a) {
    const auto name_len = GetLe<uint32_t>(in, path);
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) throw CheckpointError(path + ": truncated checkpoint");
    const auto dims = GetLe<uint32_t>(in, path);
    if (dims != 2) throw CheckpointError(path + ": array " + name + " is not 2-D");
    const auto rows = GetLe<uint32_t>(in, path);
    const auto cols = GetLe<uint32_t>(in, path);
    nn::Matrix<float> m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = std::bit_cast<float>(GetLe<uint32_t>(in, path));
    }
    file.arrays.emplace(std::move(name), std::move(m));
  }
  return file;
}

void Save(const std::string& path, const std::string& kind, const NetworkConfig& config,
          const Roster& roster, int epochs, std::vector<nn::Parameter<float>*> params,
          nn::AdamW<float>* optimizer) {
  Json header = {{"kind", kind},
                 {"network", ConfigJson(config)},
                 {"roster", roster.names()},
                 {"epoch", epochs},
                 {"optimizer", optimizer != nullptr}};
  if (optimizer) {
    const auto& c = optimizer->config();
    header["adamw"] = {{"step", optimizer->step()},
                       {"learning_rate", c.learning_rate},
                       {"beta1", c.beta1},
                       {"beta2", c.beta2},
                       {"epsilon", c.epsilon},
                       {"weight_decay", c.weight_decay}};
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  out.write(kMagic, 5);
  PutLe<uint8_t>(out, kVersion);
  const std::string text = header.dump();
  PutLe<uint32_t>(out, static_cast<uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  const uint32_t count = static_cast<uint32_t>(params.size() * (optimizer ? 3 : 1));
  PutLe<uint32_t>(out, count);
  for (auto* p : params) PutArray(out, p->name, p->value);
  if (optimizer) {
    for (size_t i = 0; i < params.size(); ++i) {
      PutArray(out, "adamw.m/" + params[i]->name, optimizer->first_moments()[i]);
    }
    for (size_t i = 0; i < params.size(); ++i) {
      PutArray(out, "adamw.v/" + params[i]->name, optimizer->second_moments()[i]);
    }
  }
  if (!out) throw CheckpointError("failed writing checkpoint " + path);
}

void Assign(const std::string& path, CheckpointFile& file, const std::string& name,
            nn::Matrix<float>& target) {
  auto it = file.arrays.find(name);
  if (it == file.arrays.end()) throw CheckpointError(path + ": missing array " + name);
  if (it->second.rows() != target.rows() || it->second.cols() != target.cols()) {
    throw CheckpointError(path + ": shape mismatch for " + name);
  }
  target = it->second;
}

void Load(const std::string& path, const std::string& kind, const NetworkConfig& config,
          const Roster& roster, int& epochs, std::vector<nn::Parameter<float>*> params,
          nn::AdamW<float>* optimizer) {
  CheckpointFile file = ReadFile(path, false);
  try {
    if (file.header.at("kind").get<std::string>() != kind) {
      throw CheckpointError(path + ": checkpoint holds a " +
                            file.header.at("kind").get<std::string>() + " model, expected " +
                            kind);
    }
    if (!(ConfigFromJson(file.header.at("network")) == config)) {
      throw CheckpointError(path + ": network config mismatch");
    }
    if (file.header.at("roster").get<std::vector<std::string>>() != roster.names()) {
      throw CheckpointError(path + ": opponent roster mismatch");
    }
    for (auto* p : params) Assign(path, file, p->name, p->value);
    if (optimizer) {
      if (!file.header.at("optimizer").get<bool>()) {
        throw CheckpointError(path + ": checkpoint has no optimizer state");
      }
      for (size_t i = 0; i < params.size(); ++i) {
        Assign(path, file, "adamw.m/" + params[i]->name, optimizer->first_moments()[i]);
        Assign(path, file, "adamw.v/" + params[i]->name, optimizer->second_moments()[i]);
      }
      optimizer->set_step(file.header.at("adamw").at("step").get<long>());
    }
    epochs = file.header.at("epoch").get<int>();
  } catch (const Json::exception& e) {
    throw CheckpointError(path + ": bad config block: " + e.what());
  }
}

std::pair<NetworkConfig, Roster> PeekConfig(const std::string& path, const std::string& kind) {
  CheckpointFile file = ReadFile(path, true);
  try {
    if (file.header.at("kind").get<std::string>() != kind) {
      throw CheckpointError(path + ": checkpoint is not a " + kind + " model");
    }
    return {ConfigFromJson(file.header.at("network")),
            Roster(file.header.at("roster").get<std::vector<std::string>>())};
  } catch (const Json::exception& e) {
    throw CheckpointError(path + ": bad config block: " + e.what());
  }
}

}  // namespace

std::vector<int> ActiveIndices(const PlaneStack& planes) {
  std::vector<int> out;
  const auto& d = planes.data();
  for (size_t i = 0; i < d.size(); ++i) {
    if (d[i] != 0.0f) out.push_back(static_cast<int>(i));
  }
  return out;
}

nn::SparseBatch MakeBatch(int channels, std::vector<std::vector<int>> active) {
  nn::SparseBatch batch;
  batch.channels = channels;
  batch.positions = 64;
  batch.active = std::move(active);
  return batch;
}

nn::SparseBatch BoardBatch(const std::vector<Board>& boards) {
  std::vector<std::vector<int>> active;
  active.reserve(boards.size());
  for (const Board& b : boards) active.push_back(ActiveIndices(EncodeBoard(b)));
  return MakeBatch(kBoardChannels, std::move(active));
}

SiameseModel::SiameseModel(const NetworkConfig& config, Roster roster, uint64_t seed)
    : config_(config), roster_(std::move(roster)),
      net_(config, kHistoryChannels, kBoardChannels) {
  net_.Init(seed);
}

Embedding SiameseModel::Embed(const PlaneStack& input) const {
  if (input.channels() == kBoardChannels) {
    return net_.EmbedBoards(MakeBatch(kBoardChannels, {ActiveIndices(input)})).col(0);
  }
  if (input.channels() == kHistoryChannels) {
    ++history_passes_;
    return net_.EmbedHistories(MakeBatch(kHistoryChannels, {ActiveIndices(input)})).col(0);
  }
  throw InvalidInput("cannot embed a stack with " + std::to_string(input.channels()) +
                     " channels (expected 12 or 1850)");
}

Embedding SiameseModel::EmbedHistory(const ObservationHistory& history) const {
  return Embed(EncodeHistory(history, roster_));
}

nn::Matrix<float> SiameseModel::EmbedBoards(const std::vector<Board>& boards) const {
  nn::Matrix<float> out(config_.embedding_dim, static_cast<Eigen::Index>(boards.size()));
  for (size_t start = 0; start < boards.size(); start += kBoardChunk) {
    const size_t end = std::min(boards.size(), start + kBoardChunk);
    std::vector<Board> chunk(boards.begin() + static_cast<long>(start),
                             boards.begin() + static_cast<long>(end));
    out.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) =
        net_.EmbedBoards(BoardBatch(chunk));
  }
  return out;
}

CnnModel::CnnModel(const NetworkConfig& config, Roster roster, uint64_t seed)
    : config_(config), roster_(std::move(roster)), net_(config, kPairChannels) {
  net_.Init(seed);
}

std::vector<double> CnnModel::Probabilities(const ObservationHistory& history,
                                            const std::vector<Board>& boards) const {
  const std::vector<int> hist = ActiveIndices(EncodeHistory(history, roster_));
  std::vector<double> out;
  out.reserve(boards.size());
  for (size_t start = 0; start < boards.size(); start += kPairChunk) {
    const size_t end = std::min(boards.size(), start + kPairChunk);
    std::vector<std::vector<int>> active;
    for (size_t i = start; i < end; ++i) {
      std::vector<int> a = hist;
      for (int idx : ActiveIndices(EncodeBoard(boards[i]))) {
        a.push_back(idx + kHistoryChannels * 64);
      }
      active.push_back(std::move(a));
    }
    const nn::Matrix<float> logits = net_.Logits(MakeBatch(kPairChannels, std::move(active)));
    for (Eigen::Index i = 0; i < logits.cols(); ++i) {
      out.push_back(nn::Sigmoid<double>(logits(0, i)));
    }
  }
  return out;
}

void SaveCheckpoint(const std::string& path, SiameseModel& model,
                    nn::AdamW<float>* optimizer) {
  Save(path, "siamese", model.config(), model.roster(), model.epochs_trained,
       model.net().Params(), optimizer);
}

void SaveCheckpoint(const std::string& path, CnnModel& model, nn::AdamW<float>* optimizer) {
  Save(path, "cnn", model.config(), model.roster(), model.epochs_trained, model.net().Params(),
       optimizer);
}

void LoadCheckpoint(const std::string& path, SiameseModel& model,
                    nn::AdamW<float>* optimizer) {
  Load(path, "siamese", model.config(), model.roster(), model.epochs_trained,
       model.net().Params(), optimizer);
}

void LoadCheckpoint(const std::string& path, CnnModel& model, nn::AdamW<float>* optimizer) {
  Load(path, "cnn", model.config(), model.roster(), model.epochs_trained, model.net().Params(),
       optimizer);
}

std::string CheckpointKind(const std::string& path) {
  CheckpointFile file = ReadFile(path, true);
  if (!file.header.contains("kind") || !file.header["kind"].is_string()) {
    throw CheckpointError(path + ": bad config block");
  }
  return file.header["kind"].get<std::string>();
}

std::unique_ptr<SiameseModel> LoadSiamese(const std::string& path) {
  auto [config, roster] = PeekConfig(path, "siamese");
  auto model = std::make_unique<SiameseModel>(config, std::move(roster), 0);
  LoadCheckpoint(path, *model);
  return model;
}

std::unique_ptr<CnnModel> LoadCnn(const std::string& path) {
  auto [config, roster] = PeekConfig(path, "cnn");
  auto model = std::make_unique<CnnModel>(config, std::move(roster), 0);
  LoadCheckpoint(path, *model);
  return model;
}

}  // namespace rbc
