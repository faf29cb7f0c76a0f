#include "uwimg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include "uwimg/errors.hpp"
#include "uwimg/filters.hpp"
#include "uwimg/parallel.hpp"
#include "uwimg/png_io.hpp"
#include "uwimg/rng.hpp"
#include "uwimg/table.hpp"

namespace uwimg {

namespace fs = std::filesystem;

RgbdPair load_rgbd_pair(const fs::path& image_path, const fs::path& depth_path,
                        double depth_scale) {
  RgbdPair pair;
  pair.image = read_image_png(image_path);
  pair.depth = read_depth_png(depth_path, depth_scale);
  if (pair.depth.rows() != pair.image.rows() ||
      pair.depth.cols() != pair.image.cols())
    pair.depth = resize_nearest(pair.depth, pair.image.rows(), pair.image.cols());
  pair.source_id = image_path.stem().string();
  return pair;
}

DepthMap normalize_depth(const DepthMap& depth, double max_range) {
  if (!(max_range > 0.0))
    throw InvalidParameter("normalize_depth: max_range must be > 0");
  require_depth(depth);
  std::vector<double> valid;
  valid.reserve(size_t(depth.size()));
  for (Eigen::Index i = 0; i < depth.size(); ++i)
    if (depth(i) > 0.0) valid.push_back(depth(i));
  if (valid.empty())
    throw InvalidInput("normalize_depth: depth map has no valid (> 0) pixels");
  std::sort(valid.begin(), valid.end());
  const size_t n = valid.size();
  const double median =
      (n % 2 == 1) ? valid[n / 2] : 0.5 * (valid[n / 2 - 1] + valid[n / 2]);
  DepthMap out = (depth > 0.0).select(depth, median);
  return out.min(max_range);
}

ParamSampler ParamSampler::for_preset(std::string_view name, uint64_t seed) {
  ParamSampler s;
  s.water_type = std::string(name);
  s.seed = seed;
  if (name == "clear-oceanic") {
    s.beta_ranges = {Range{0.30, 0.55}, Range{0.10, 0.18}, Range{0.05, 0.10}};
    s.ambient_ranges = {Range{0.12, 0.28}, Range{0.35, 0.55}, Range{0.50, 0.72}};
    s.alpha_range = {0.6, 1.0};
  } else if (name == "coastal-green") {
    s.beta_ranges = {Range{0.50, 0.85}, Range{0.22, 0.40}, Range{0.15, 0.30}};
    s.ambient_ranges = {Range{0.10, 0.25}, Range{0.40, 0.60}, Range{0.30, 0.50}};
    s.alpha_range = {0.8, 1.3};
  } else if (name == "turbid-green") {
    s.beta_ranges = {Range{0.90, 1.40}, Range{0.45, 0.80}, Range{0.35, 0.62}};
    s.ambient_ranges = {Range{0.15, 0.32}, Range{0.42, 0.62}, Range{0.28, 0.46}};
    s.alpha_range = {1.1, 1.8};
  } else {
    throw InvalidParameter("unknown water preset: " + std::string(name));
  }
  return s;
}

void ParamSampler::validate() const {
  auto check = [](const Range& r, const char* what) {
    if (!std::isfinite(r.first) || !std::isfinite(r.second) ||
        r.first > r.second)
      throw InvalidParameter(std::string("ParamSampler: bad ") + what +
                             " range");
  };
  for (int c = 0; c < 3; ++c) {
    check(beta_ranges[size_t(c)], "beta");
    check(ambient_ranges[size_t(c)], "ambient");
    if (beta_ranges[size_t(c)].first < 0.0)
      throw InvalidParameter("ParamSampler: beta range must be >= 0");
    if (ambient_ranges[size_t(c)].first < 0.0 ||
        ambient_ranges[size_t(c)].second > 1.0)
      throw InvalidParameter("ParamSampler: ambient range must lie in [0, 1]");
  }
  check(alpha_range, "alpha");
  if (alpha_range.first < 0.0)
    throw InvalidParameter("ParamSampler: alpha range must be >= 0");
  if (enforce_beta_order) {
    // Ordered bounds guarantee sorted draws stay inside their ranges.
    for (int c = 0; c + 1 < 3; ++c)
      if (beta_ranges[size_t(c)].first < beta_ranges[size_t(c) + 1].first ||
          beta_ranges[size_t(c)].second < beta_ranges[size_t(c) + 1].second)
        throw InvalidParameter(
            "ParamSampler: beta ranges must have non-increasing bounds "
            "(r >= g >= b) when ordering is enforced");
  }
}

WaterParams sample_params(const ParamSampler& sampler, uint64_t index) {
  sampler.validate();
  Rng rng(sampler.seed, index);
  WaterParams p;
  for (int c = 0; c < 3; ++c)
    p.beta[c] = rng.uniform(sampler.beta_ranges[size_t(c)].first,
                            sampler.beta_ranges[size_t(c)].second);
  if (sampler.enforce_beta_order) {
    std::array<double, 3> b{p.beta[0], p.beta[1], p.beta[2]};
    std::sort(b.begin(), b.end(), std::greater<double>());
    for (int c = 0; c < 3; ++c)
      p.beta[c] = std::clamp(b[size_t(c)], sampler.beta_ranges[size_t(c)].first,
                             sampler.beta_ranges[size_t(c)].second);
  }
  for (int c = 0; c < 3; ++c)
    p.ambient[c] = rng.uniform(sampler.ambient_ranges[size_t(c)].first,
                               sampler.ambient_ranges[size_t(c)].second);
  p.alpha = rng.uniform(sampler.alpha_range.first, sampler.alpha_range.second);
  p.validate();
  return p;
}

const char* const kManifestHeader[13] = {
    "source_id", "sample_index", "beta_r",    "beta_g",        "beta_b",
    "alpha",     "ambient_r",    "ambient_g", "ambient_b",     "depth_min",
    "depth_max", "degraded_path", "clear_path"};

void write_manifest_csv(const DatasetManifest& manifest, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (int i = 0; i < 13; ++i) out << (i ? "," : "") << kManifestHeader[i];
  out << '\n';
  for (const auto& e : manifest.entries) {
    out << csv_escape(e.source_id) << ',' << e.sample_index << ','
        << format_double(e.params.beta[0]) << ','
        << format_double(e.params.beta[1]) << ','
        << format_double(e.params.beta[2]) << ','
        << format_double(e.params.alpha) << ','
        << format_double(e.params.ambient[0]) << ','
        << format_double(e.params.ambient[1]) << ','
        << format_double(e.params.ambient[2]) << ','
        << format_double(e.depth_min) << ',' << format_double(e.depth_max)
        << ',' << csv_escape(e.degraded_path) << ','
        << csv_escape(e.clear_path) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

DatasetManifest read_manifest_csv(const fs::path& path) {
  const auto rows = parse_csv(path);
  if (rows.empty()) throw FormatError(path.string() + ": empty manifest");
  if (rows[0].size() != 13)
    throw FormatError(path.string() + ": expected 13 manifest columns");
  for (int i = 0; i < 13; ++i)
    if (rows[0][size_t(i)] != kManifestHeader[i])
      throw FormatError(path.string() + ": unexpected manifest header '" +
                        rows[0][size_t(i)] + "'");
  DatasetManifest m;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 13)
      throw FormatError(path.string() + ": ragged manifest row");
    ManifestEntry e;
    e.source_id = row[0];
    e.sample_index = std::stoi(row[1]);
    e.params.beta << std::stod(row[2]), std::stod(row[3]), std::stod(row[4]);
    e.params.alpha = std::stod(row[5]);
    e.params.ambient << std::stod(row[6]), std::stod(row[7]), std::stod(row[8]);
    e.depth_min = std::stod(row[9]);
    e.depth_max = std::stod(row[10]);
    e.degraded_path = row[11];
    e.clear_path = row[12];
    m.entries.push_back(std::move(e));
  }
  return m;
}

std::string manifest_depth_path(const ManifestEntry& entry) {
  return "depth/" + entry.source_id + "_" +
         std::to_string(entry.sample_index) + ".png";
}

void GenerateConfig::validate() const {
  if (output_size < 2)
    throw InvalidParameter("GenerateConfig: output_size must be >= 2");
  if (!(depth_scale > 0.0))
    throw InvalidParameter("GenerateConfig: depth_scale must be > 0");
  if (!(max_range > 0.0))
    throw InvalidParameter("GenerateConfig: max_range must be > 0");
}

namespace {

struct PreparedPair {
  Image clear;     // quantized to the 8-bit grid
  DepthMap depth;  // quantized to the 16-bit grid, in meters
  std::string source_id;
  std::string error;
};

PreparedPair prepare_pair(const RgbdPair& pair, const GenerateConfig& cfg) {
  PreparedPair out;
  out.source_id = pair.source_id;
  try {
    require_image(pair.image, "image");
    require_depth(pair.depth);
    require_same_shape(pair.image, pair.depth, "image/depth");
    const Eigen::Index size = cfg.output_size;
    Image clear = resize_bilinear(center_crop_square(pair.image), size, size);
    DepthMap depth =
        resize_nearest(center_crop_square(pair.depth), size, size);
    depth = normalize_depth(depth, cfg.max_range);
    // Snap to the on-disk grids so the stored files regenerate the
    // degraded image exactly.
    for (int c = 0; c < 3; ++c)
      clear[c] = (clear[c].max(0.0).min(1.0) * 255.0).round() / 255.0;
    out.depth = (depth / cfg.depth_scale).round().min(65535.0).max(0.0) *
                cfg.depth_scale;
    out.clear = std::move(clear);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

DatasetManifest generate_batch(const std::vector<RgbdPair>& pairs,
                               const ParamSampler& sampler,
                               int samples_per_pair, const fs::path& out_dir,
                               const GenerateConfig& cfg) {
  if (pairs.empty()) throw InvalidInput("generate_batch: no input pairs");
  if (samples_per_pair < 1)
    throw InvalidParameter("generate_batch: samples_per_pair must be >= 1");
  sampler.validate();
  cfg.validate();

  std::error_code ec;
  for (const char* sub : {"degraded", "clear", "depth"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec)
      throw IoError("cannot create " + (out_dir / sub).string() + ": " +
                    ec.message());
  }

  // Stable processing order: sorted by source_id, ties by input position.
  std::vector<size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return pairs[a].source_id < pairs[b].source_id;
  });

  std::vector<PreparedPair> prepared(pairs.size());
  parallel_for(int64_t(pairs.size()), cfg.threads, [&](int64_t i) {
    prepared[size_t(i)] = prepare_pair(pairs[order[size_t(i)]], cfg);
  });

  const int64_t total = int64_t(pairs.size()) * samples_per_pair;
  std::vector<ManifestEntry> entries(size_t(total));
  std::vector<std::string> errors(size_t(total));
  parallel_for(total, cfg.threads, [&](int64_t idx) {
    const auto& prep = prepared[size_t(idx / samples_per_pair)];
    const int k = int(idx % samples_per_pair);
    ManifestEntry& e = entries[size_t(idx)];
    e.source_id = prep.source_id;
    e.sample_index = k;
    const std::string stem = prep.source_id + "_" + std::to_string(k) + ".png";
    e.degraded_path = "degraded/" + stem;
    e.clear_path = "clear/" + stem;
    if (!prep.error.empty()) {
      errors[size_t(idx)] = prep.source_id + ": " + prep.error;
      return;
    }
    try {
      e.params = sample_params(sampler, uint64_t(idx));
      e.depth_min = prep.depth.minCoeff();
      e.depth_max = prep.depth.maxCoeff();
      const Image degraded = synthesize_improved(prep.clear, prep.depth, e.params);
      write_image_png(out_dir / e.degraded_path, degraded);
      write_image_png(out_dir / e.clear_path, prep.clear);
      write_depth_png(out_dir / ("depth/" + stem), prep.depth, cfg.depth_scale);
    } catch (const Error& err) {
      errors[size_t(idx)] = prep.source_id + ": " + err.what();
    }
  });

  DatasetManifest manifest;
  manifest.seed = sampler.seed;
  manifest.preset = sampler.water_type;
  for (int64_t idx = 0; idx < total; ++idx) {
    if (!errors[size_t(idx)].empty())
      manifest.errors.push_back(errors[size_t(idx)]);
    else
      manifest.entries.push_back(std::move(entries[size_t(idx)]));
  }
  write_manifest_csv(manifest, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace uwimg
