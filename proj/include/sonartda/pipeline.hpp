#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sonartda/echo_analysis.hpp"
#include "sonartda/rips.hpp"
#include "sonartda/types.hpp"

namespace sonartda {

// All knobs for one end-to-end run.  A config file sets these as
// `key = value` lines (comma-separated lists for the vector fields); the
// CLI exposes them as flags with the same names.
struct RunConfig {
  // Scene: built-in generator or ingested array.
  std::string scene = "pipe";  // pipe | two_scatter | three_scatter | input
  std::string input;           // array path when scene == input
  double pipe_length = 1.0;
  double pipe_width = 0.1;
  int pipe_scatterers_per_side = 40;
  double pipe_reflectivity_re = 1.0;
  double pipe_reflectivity_im = 0.0;
  // Rigid world offset of the scene; a nonzero offset models a target that
  // is not centered on the turntable axis.
  double scene_offset_x = 0.0;
  double scene_offset_y = 0.0;
  double scene_offset_z = 0.0;

  // Collection geometry.
  std::string trajectory = "circle";  // circle | sphere
  int n_angles = 360;
  int n_azimuth = 90;
  int n_elevation = 45;
  double radius = 3.0;
  double k_min = 18.0;
  double k_max = 30.0;
  int n_wavenumbers = 100;

  // Conditioning.
  double normalize_peak = 0.7;  // 0 disables peak normalization
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;

  // Embedding.
  std::string embed_method = "delay";  // delay | tangent
  std::vector<double> offsets_deg = {0.0, 4.0, 25.0};
  std::string reducer = "max";  // identity | magnitude | max | l2

  // Persistence.
  std::string metric = "euclidean";  // euclidean | geodesic
  int max_dim = 1;
  double max_eps = 0.0;  // 0 = cloud diameter

  // Analysis.
  double threshold_fraction = 0.1;
  double tolerance = 0.1;

  // Noise sweep.
  std::vector<double> sigmas = {0.0, 0.002, 0.004, 0.006, 0.008, 0.01};

  std::string out_dir = "out";
};

RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

// Canonical `key = value` rendering (fixed key order) and its FNV-1a hash,
// used to stamp the manifest.
std::string canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// Throws ValidationError on out-of-range parameters or missing inputs.
// The CLI runs this before any computation.
void validate_config(const RunConfig& cfg);

struct PipelineSummary {
  std::vector<std::string> artifacts;  // paths written, manifest last
  EchoReport report;
  PersistenceDiagram diagram;
};

// simulate/ingest -> normalize -> noise -> embed -> persist -> analyze,
// writing signal.csv, cloud.csv, cloud_pca.csv, diagram.csv,
// echo_report.json, diagram.svg, pca.svg and manifest.json under
// cfg.out_dir.  Reruns with an identical config are byte-identical except
// for the timestamp inside the manifest.  Errors carry the stage name.
PipelineSummary run_pipeline(const RunConfig& cfg);

struct NoiseSweepRow {
  double sigma = 0.0;
  double top_death = 0.0;
  double top_persistence = 0.0;
};

// Re-runs embed+persist per noise level on one collected map and writes
// noise_sweep.csv (columns sigma, top_death, top_persistence).
std::vector<NoiseSweepRow> run_noise_sweep(const RunConfig& cfg);

// Stage helpers shared by the CLI subcommands.
SignalMap acquire_map(const RunConfig& cfg);
SignalMap condition_map(const RunConfig& cfg, const SignalMap& raw,
                        double noise_sigma);
PointCloud embed_map(const RunConfig& cfg, const SignalMap& map);
PersistenceDiagram persist_cloud(const RunConfig& cfg, const PointCloud& cloud);
EchoReport analyze_map(const RunConfig& cfg, const SignalMap& map,
                       const PersistenceDiagram& diag);
void write_echo_report_json(const EchoReport& report, const std::string& path);

}  // namespace sonartda
