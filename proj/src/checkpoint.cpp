#include "gazekit/train/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gazekit/errors.hpp"

namespace gazekit {

namespace {

constexpr char kMagic[8] = {'G', 'Z', 'K', 'C', 'K', 'P', 'T', '1'};

static_assert(sizeof(float) == 4, "checkpoint format assumes 32-bit floats");

bool host_is_little_endian() {
  const std::uint32_t probe = 1;
  char byte0;
  std::memcpy(&byte0, &probe, 1);
  return byte0 == 1;
}

void byteswap_floats(std::vector<float>& v) {
  for (float& f : v) {
    char* p = reinterpret_cast<char*>(&f);
    std::swap(p[0], p[3]);
    std::swap(p[1], p[2]);
  }
}

nlohmann::json gen_spec_json(const nn::GeneratorSpec& s) {
  return {{"in_channels", s.in_channels},
          {"out_channels", s.out_channels},
          {"depth", s.depth},
          {"base_filters", s.base_filters},
          {"dropout_rate", s.dropout_rate}};
}

nn::GeneratorSpec gen_spec_from_json(const nlohmann::json& j) {
  nn::GeneratorSpec s;
  s.in_channels = j.at("in_channels").get<int>();
  s.out_channels = j.at("out_channels").get<int>();
  s.depth = j.at("depth").get<int>();
  s.base_filters = j.at("base_filters").get<int>();
  s.dropout_rate = j.at("dropout_rate").get<float>();
  return s;
}

nlohmann::json disc_spec_json(const nn::DiscriminatorSpec& s) {
  return {{"in_channels", s.in_channels}, {"layers", s.layers}, {"base_filters", s.base_filters}};
}

nn::DiscriminatorSpec disc_spec_from_json(const nlohmann::json& j) {
  nn::DiscriminatorSpec s;
  s.in_channels = j.at("in_channels").get<int>();
  s.layers = j.at("layers").get<int>();
  s.base_filters = j.at("base_filters").get<int>();
  return s;
}

void append_params(const std::string& prefix, std::vector<nn::Param<float>*>& params,
                   nn::RmsProp<float>& opt, CheckpointData& out) {
  for (auto* p : params) {
    std::vector<float> values(p->value.data(), p->value.data() + p->value.size());
    out.arrays.emplace_back(p->name, std::move(values));
  }
  for (auto& [name, sq] : opt.sq_avg()) {
    std::vector<float> values(sq.data(), sq.data() + sq.size());
    out.arrays.emplace_back(prefix + ".opt_sq." + name, std::move(values));
  }
  for (auto& [name, buf] : opt.momentum_buf()) {
    std::vector<float> values(buf.data(), buf.data() + buf.size());
    out.arrays.emplace_back(prefix + ".opt_mom." + name, std::move(values));
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointData& data) {
  nlohmann::json header;
  header["format_version"] = data.format_version;
  header["regime"] = data.regime;
  header["epoch"] = data.epoch;
  header["generator_spec"] = gen_spec_json(data.gen_spec);
  header["discriminator_spec"] = disc_spec_json(data.disc_spec);
  header["config"] = nlohmann::json::parse(config_to_json(data.config));
  header["rng_state"] = {{"dropout", data.dropout_rng_state},
                         {"shuffle", data.shuffle_rng_state}};
  auto arrays = nlohmann::json::array();
  for (const auto& [name, values] : data.arrays)
    arrays.push_back({{"name", name}, {"count", values.size()}});
  header["arrays"] = arrays;
  const std::string header_text = header.dump();
  if (header_text.size() > 0xffffffffull)
    throw IoError("save_checkpoint: header too large");

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("save_checkpoint: cannot open " + tmp);
    out.write(kMagic, sizeof(kMagic));
    const auto len = static_cast<std::uint32_t>(header_text.size());
    char len_bytes[4] = {static_cast<char>(len & 0xff), static_cast<char>((len >> 8) & 0xff),
                         static_cast<char>((len >> 16) & 0xff),
                         static_cast<char>((len >> 24) & 0xff)};
    out.write(len_bytes, 4);
    out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
    const bool little = host_is_little_endian();
    for (const auto& [name, values] : data.arrays) {
      if (little) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * 4));
      } else {
        std::vector<float> swapped = values;
        byteswap_floats(swapped);
        out.write(reinterpret_cast<const char*>(swapped.data()),
                  static_cast<std::streamsize>(swapped.size() * 4));
      }
    }
    if (!out) throw IoError("save_checkpoint: write to " + tmp + " failed");
  }
  std::filesystem::rename(tmp, path);
}

CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw DataError("load_checkpoint: " + path + " is not a checkpoint file");
  char len_bytes[4];
  in.read(len_bytes, 4);
  if (!in) throw DataError("load_checkpoint: truncated header length");
  const std::uint32_t len = static_cast<std::uint8_t>(len_bytes[0]) |
                            (static_cast<std::uint8_t>(len_bytes[1]) << 8) |
                            (static_cast<std::uint8_t>(len_bytes[2]) << 16) |
                            (static_cast<std::uint8_t>(len_bytes[3]) << 24);
  std::string header_text(len, '\0');
  in.read(header_text.data(), len);
  if (!in) throw DataError("load_checkpoint: truncated header");

  CheckpointData data;
  try {
    const nlohmann::json header = nlohmann::json::parse(header_text);
    data.format_version = header.at("format_version").get<int>();
    if (data.format_version != 1)
      throw DataError("load_checkpoint: unsupported format_version " +
                      std::to_string(data.format_version));
    data.regime = header.at("regime").get<std::string>();
    data.epoch = header.at("epoch").get<int>();
    data.gen_spec = gen_spec_from_json(header.at("generator_spec"));
    data.disc_spec = disc_spec_from_json(header.at("discriminator_spec"));
    data.config = config_from_json(header.at("config").dump());
    data.dropout_rng_state = header.at("rng_state").at("dropout").get<std::string>();
    data.shuffle_rng_state = header.at("rng_state").at("shuffle").get<std::string>();
    for (const auto& entry : header.at("arrays")) {
      const auto name = entry.at("name").get<std::string>();
      const auto count = entry.at("count").get<std::size_t>();
      std::vector<float> values(count);
      in.read(reinterpret_cast<char*>(values.data()),
              static_cast<std::streamsize>(count * 4));
      if (!in) throw DataError("load_checkpoint: truncated array '" + name + "'");
      if (!host_is_little_endian()) byteswap_floats(values);
      data.arrays.emplace_back(name, std::move(values));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("load_checkpoint: malformed header: ") + e.what());
  }
  return data;
}

CheckpointData snapshot_checkpoint(nn::UnetGenerator<float>& gen,
                                   nn::PatchDiscriminator<float>& disc,
                                   nn::RmsProp<float>& g_opt, nn::RmsProp<float>& d_opt,
                                   const TrainConfig& config, int epoch,
                                   const std::string& shuffle_rng_state) {
  CheckpointData data;
  data.regime = regime_to_string(config.regime);
  data.epoch = epoch;
  data.gen_spec = gen.spec();
  data.disc_spec = disc.spec();
  data.config = config;
  std::ostringstream dropout_state;
  dropout_state << gen.dropout_rng();
  data.dropout_rng_state = dropout_state.str();
  data.shuffle_rng_state = shuffle_rng_state;
  append_params("g", gen.params(), g_opt, data);
  append_params("d", disc.params(), d_opt, data);
  return data;
}

void restore_checkpoint(const CheckpointData& data, nn::UnetGenerator<float>* gen,
                        nn::PatchDiscriminator<float>* disc, nn::RmsProp<float>* g_opt,
                        nn::RmsProp<float>* d_opt) {
  std::map<std::string, nn::Param<float>*> by_name;
  if (gen)
    for (auto* p : gen->params()) by_name[p->name] = p;
  if (disc)
    for (auto* p : disc->params()) by_name[p->name] = p;

  const auto as_vec = [](const std::vector<float>& values) {
    return Eigen::Map<const nn::Vec<float>>(values.data(),
                                            static_cast<Eigen::Index>(values.size()));
  };
  for (const auto& [name, values] : data.arrays) {
    if (name.rfind("g.opt_sq.", 0) == 0 || name.rfind("d.opt_sq.", 0) == 0) {
      nn::RmsProp<float>* opt = name[0] == 'g' ? g_opt : d_opt;
      if (opt) opt->sq_avg()[name.substr(9)] = as_vec(values);
      continue;
    }
    if (name.rfind("g.opt_mom.", 0) == 0 || name.rfind("d.opt_mom.", 0) == 0) {
      nn::RmsProp<float>* opt = name[0] == 'g' ? g_opt : d_opt;
      if (opt) opt->momentum_buf()[name.substr(10)] = as_vec(values);
      continue;
    }
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      const bool skipped_model = (!gen && name.rfind("g.", 0) == 0) ||
                                 (!disc && name.rfind("d.", 0) == 0);
      if (skipped_model) continue;
      throw DataError("restore_checkpoint: array '" + name + "' matches no model parameter");
    }
    if (static_cast<std::size_t>(it->second->value.size()) != values.size())
      throw DataError("restore_checkpoint: array '" + name + "' has " +
                      std::to_string(values.size()) + " values, model expects " +
                      std::to_string(it->second->value.size()));
    it->second->value = as_vec(values);
  }

  if (gen && !data.dropout_rng_state.empty()) {
    std::istringstream dropout_state(data.dropout_rng_state);
    dropout_state >> gen->dropout_rng();
    if (!dropout_state) throw DataError("restore_checkpoint: malformed dropout rng state");
  }
}

}  // namespace gazekit
