#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uwimg/image.hpp"
#include "uwimg/imaging.hpp"

namespace uwimg {

struct RgbdPair {
  Image image;
  DepthMap depth;  // same dimensions as image after loading
  std::string source_id;
};

// Loads `<id>.png` (8-bit RGB) and its 16-bit depth map; depth is
// resampled to the image dimensions with nearest-neighbor when they differ.
RgbdPair load_rgbd_pair(const std::filesystem::path& image_path,
                        const std::filesystem::path& depth_path,
                        double depth_scale = 0.001);

// Clamps to [0, max_range] and fills zero (missing) pixels with the median
// of the valid depths. All-zero maps are rejected.
DepthMap normalize_depth(const DepthMap& depth, double max_range = 10.0);

using Range = std::pair<double, double>;

// Uniform per-component sampler of WaterParams, deterministic in
// (seed, index). Water types stand in for learned formation parameters.
struct ParamSampler {
  std::string water_type;
  std::array<Range, 3> beta_ranges{};     // (r, g, b), 1/m
  std::array<Range, 3> ambient_ranges{};  // (r, g, b), [0, 1]
  Range alpha_range{1.0, 1.0};
  uint64_t seed = 0;
  // Sort sampled betas descending so red attenuates fastest; built-in
  // presets have ordered range bounds, which keeps sorted draws in range.
  bool enforce_beta_order = true;

  static ParamSampler for_preset(std::string_view name, uint64_t seed);
  void validate() const;
};

WaterParams sample_params(const ParamSampler& sampler, uint64_t index);

struct ManifestEntry {
  std::string source_id;
  int sample_index = 0;
  WaterParams params;
  double depth_min = 0.0;
  double depth_max = 0.0;
  std::string degraded_path;  // relative to the output directory
  std::string clear_path;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  uint64_t seed = 0;
  std::string preset;
  std::vector<std::string> errors;  // per-entry failures, generation continues
};

struct GenerateConfig {
  int output_size = 256;       // square output, center-crop then resize
  double depth_scale = 0.001;  // meters per 16-bit unit on disk
  double max_range = 10.0;     // depth clamp in meters
  int threads = 1;

  void validate() const;
};

// Writes degraded/<id>_<k>.png, clear/<id>_<k>.png, depth/<id>_<k>.png and
// manifest.csv under out_dir. Both PNG inputs of each degraded image are
// quantized before synthesis, so every output is exactly reproducible from
// the files plus the manifest parameters.
DatasetManifest generate_batch(const std::vector<RgbdPair>& pairs,
                               const ParamSampler& sampler,
                               int samples_per_pair,
                               const std::filesystem::path& out_dir,
                               const GenerateConfig& cfg = {});

extern const char* const kManifestHeader[13];

void write_manifest_csv(const DatasetManifest& manifest,
                        const std::filesystem::path& path);
DatasetManifest read_manifest_csv(const std::filesystem::path& path);

// depth/<id>_<k>.png sibling of a manifest entry.
std::string manifest_depth_path(const ManifestEntry& entry);

}  // namespace uwimg
