#include "convexlse/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "convexlse/catalog.hpp"

namespace convexlse {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

Pmf pmf_from_json(const json& j) {
  if (!j.contains("mass")) throw std::runtime_error("pmf JSON: missing \"mass\"");
  return Pmf(j.at("mass").get<std::vector<double>>());
}

MixtureWeights weights_from_json(const json& j) {
  if (!j.contains("pi")) throw std::runtime_error("weights JSON: missing \"pi\"");
  const auto& entries = j.at("pi");
  int j_max = 0;
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    j_max = std::max(j_max, std::stoi(it.key()));
  }
  if (j_max < 1) throw std::runtime_error("weights JSON: no components");
  std::vector<double> pi(static_cast<std::size_t>(j_max), 0.0);
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    const int idx = std::stoi(it.key());
    if (idx < 1) throw std::runtime_error("weights JSON: component index must be >= 1");
    pi[static_cast<std::size_t>(idx - 1)] = it.value().get<double>();
  }
  return MixtureWeights(std::move(pi));
}

}  // namespace

std::string pmf_to_json_string(const Pmf& p) {
  json j;
  j["mass"] = p.mass();
  return j.dump();
}

Pmf pmf_from_json_string(const std::string& text) { return pmf_from_json(json::parse(text)); }

Pmf read_pmf_json(const std::filesystem::path& path) { return pmf_from_json(read_json_file(path)); }

void write_pmf_json(const std::filesystem::path& path, const Pmf& p) {
  write_text_file(path, pmf_to_json_string(p) + "\n");
}

std::string weights_to_json_string(const MixtureWeights& w) {
  json entries = json::object();
  for (int j = 1; j <= w.max_component(); ++j) {
    if (w(j) != 0.0) entries[std::to_string(j)] = w(j);
  }
  json out;
  out["pi"] = entries;
  return out.dump();
}

MixtureWeights weights_from_json_string(const std::string& text) {
  return weights_from_json(json::parse(text));
}

Pmf load_pmf(const std::string& id_or_path) {
  if (id_or_path.size() == 2 && id_or_path[0] == 'p' && id_or_path[1] >= '0' &&
      id_or_path[1] <= '5') {
    return catalog(id_or_path);
  }
  return read_pmf_json(id_or_path);
}

Sample read_sample_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::runtime_error("sample file is empty");

  std::vector<int> values;
  if (text[first] == '{') {
    const json j = json::parse(text);
    if (!j.contains("counts")) throw std::runtime_error("sample JSON: missing \"counts\"");
    for (auto it = j.at("counts").begin(); it != j.at("counts").end(); ++it) {
      const int value = std::stoi(it.key());
      const long long count = it.value().get<long long>();
      if (value < 0 || count < 0) throw std::runtime_error("sample JSON: negative entry");
      values.insert(values.end(), static_cast<std::size_t>(count), value);
    }
  } else {
    std::istringstream stream(text);
    int v;
    while (stream >> v) values.push_back(v);
    if (!stream.eof()) throw std::runtime_error("sample file: non-integer token");
  }
  return Sample(std::move(values));
}

void write_sample_file(const std::filesystem::path& path, const Sample& s) {
  std::ostringstream out;
  for (int v : s.values) out << v << '\n';
  write_text_file(path, out.str());
}

ExperimentConfig read_config_json(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  ExperimentConfig cfg;
  if (j.contains("pmfs")) {
    cfg.pmfs = j.at("pmfs").get<std::vector<std::string>>();
  } else if (j.contains("pmf")) {
    cfg.pmfs = {j.at("pmf").get<std::string>()};
  }
  if (j.contains("sample_sizes")) cfg.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
  if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
  if (j.contains("limit_draws")) cfg.limit_draws = j.at("limit_draws").get<int>();
  if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("grid_lo")) cfg.grid_lo = j.at("grid_lo").get<double>();
  if (j.contains("grid_hi")) cfg.grid_hi = j.at("grid_hi").get<double>();
  if (j.contains("grid_step")) cfg.grid_step = j.at("grid_step").get<double>();
  if (j.contains("mode")) cfg.mode = exec_mode_from_string(j.at("mode").get<std::string>());
  return cfg;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  json j;
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  j["mode"] = manifest.mode;
  j["threads"] = manifest.threads;
  j["elapsed_seconds"] = manifest.elapsed_seconds;
  j["version"] = manifest.version;
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace convexlse
