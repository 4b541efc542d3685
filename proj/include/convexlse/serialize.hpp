#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "convexlse/estimator.hpp"
#include "convexlse/experiments.hpp"
#include "convexlse/pmf.hpp"

namespace convexlse {

// Pmf files: {"mass": [m0, ..., mS]}.
std::string pmf_to_json_string(const Pmf& p);
Pmf pmf_from_json_string(const std::string& text);
Pmf read_pmf_json(const std::filesystem::path& path);
void write_pmf_json(const std::filesystem::path& path, const Pmf& p);

// Weight files: {"pi": {"2": w2, ...}} with component indices as keys;
// zero weights may be omitted.
std::string weights_to_json_string(const MixtureWeights& w);
MixtureWeights weights_from_json_string(const std::string& text);

// A catalog id (p0..p5) or a path to a pmf JSON file.
Pmf load_pmf(const std::string& id_or_path);

// Sample files: either whitespace/newline-separated nonnegative integers
// or JSON {"counts": {"0": c0, ...}}.
Sample read_sample_file(const std::filesystem::path& path);
void write_sample_file(const std::filesystem::path& path, const Sample& s);

ExperimentConfig read_config_json(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  std::string mode;
  int threads = 1;
  double elapsed_seconds = 0.0;
  std::string version;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace convexlse
