// Command-line front end: simulate, ingest, embed, persist, analyze,
// pipeline and sweep-noise subcommands over the library stages.
// Exit codes: 0 success, 2 configuration/input validation error,
// 3 computation error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sonartda/array_io.hpp"
#include "sonartda/pipeline.hpp"
#include "sonartda/rips.hpp"
#include "sonartda/signal_ops.hpp"

namespace {

using namespace sonartda;

// Flags shared by every subcommand that builds a RunConfig.
void add_config_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--scene", cfg.scene,
                  "pipe | two_scatter | three_scatter | input");
  app->add_option("--input", cfg.input, "array file for --scene input");
  app->add_option("--pipe-length", cfg.pipe_length);
  app->add_option("--pipe-width", cfg.pipe_width);
  app->add_option("--pipe-scatterers-per-side", cfg.pipe_scatterers_per_side);
  app->add_option("--pipe-reflectivity-re", cfg.pipe_reflectivity_re);
  app->add_option("--pipe-reflectivity-im", cfg.pipe_reflectivity_im);
  app->add_option("--scene-offset-x", cfg.scene_offset_x);
  app->add_option("--scene-offset-y", cfg.scene_offset_y);
  app->add_option("--scene-offset-z", cfg.scene_offset_z);
  app->add_option("--trajectory", cfg.trajectory, "circle | sphere");
  app->add_option("--n-angles", cfg.n_angles);
  app->add_option("--n-azimuth", cfg.n_azimuth);
  app->add_option("--n-elevation", cfg.n_elevation);
  app->add_option("--radius", cfg.radius, "orbit radius, meters");
  app->add_option("--k-min", cfg.k_min, "lowest wavenumber, rad/m");
  app->add_option("--k-max", cfg.k_max, "highest wavenumber, rad/m");
  app->add_option("--n-wavenumbers", cfg.n_wavenumbers);
  app->add_option("--normalize-peak", cfg.normalize_peak,
                  "scale so the peak magnitude equals this (0 = off)");
  app->add_option("--noise-sigma", cfg.noise_sigma);
  app->add_option("--seed", cfg.seed);
  app->add_option("--embed-method", cfg.embed_method, "delay | tangent");
  app->add_option("--offsets-deg", cfg.offsets_deg, "delay offsets, degrees")
      ->delimiter(',');
  app->add_option("--reducer", cfg.reducer,
                  "identity | magnitude | max | l2");
  app->add_option("--metric", cfg.metric, "euclidean | geodesic");
  app->add_option("--max-dim", cfg.max_dim);
  app->add_option("--max-eps", cfg.max_eps, "0 = cloud diameter");
  app->add_option("--threshold-fraction", cfg.threshold_fraction);
  app->add_option("--tolerance", cfg.tolerance);
  app->add_option("--sigmas", cfg.sigmas, "noise sweep levels")
      ->delimiter(',');
  app->add_option("--out-dir", cfg.out_dir);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ComputeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-scatterer sonar simulation, delay embedding and "
               "Vietoris-Rips persistence toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string out_path;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Collect a scene and write the raw array (.bin + .json)");
  add_config_flags(simulate, cfg);
  simulate->add_option("--out", out_path, "payload path (.bin or .csv)")
      ->required();

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Validate an array file and rewrite it canonically");
  ingest->add_option("--input", config_path, "array file")->required();
  ingest->add_option("--out", out_path, "payload path (.bin or .csv)")
      ->required();

  CLI::App* embed = app.add_subcommand(
      "embed", "Embed an array file into a labeled point cloud CSV");
  add_config_flags(embed, cfg);
  embed->add_option("--out", out_path, "cloud CSV path")->required();

  CLI::App* persist = app.add_subcommand(
      "persist", "Vietoris-Rips persistence of a cloud CSV");
  add_config_flags(persist, cfg);
  persist->add_option("--cloud", config_path, "cloud CSV path")->required();
  persist->add_option("--out", out_path, "diagram CSV path")->required();

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Detect prominent echos and verify death bounds");
  add_config_flags(analyze, cfg);
  analyze->add_option("--diagram", config_path, "diagram CSV path")
      ->required();
  analyze->add_option("--out", out_path, "echo report JSON path")->required();

  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "Full simulate/ingest -> embed -> persist -> analyze run");
  add_config_flags(pipeline, cfg);
  pipeline->add_option("--config", config_path, "key = value config file");

  CLI::App* sweep = app.add_subcommand(
      "sweep-noise", "Track the top loop across additive noise levels");
  add_config_flags(sweep, cfg);
  sweep->add_option("--config", config_path, "key = value config file");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    return guarded([&] {
      validate_config(cfg);
      const SignalMap raw = acquire_map(cfg);
      const SignalMap map = condition_map(cfg, raw, cfg.noise_sigma);
      if (out_path.ends_with(".csv")) write_array_csv(map, out_path);
      else write_array_binary(map, out_path);
      std::cout << "wrote " << out_path << " (" << map.grid_size()
                << " rows x " << map.channels() << " channels)\n";
      return 0;
    });
  }
  if (ingest->parsed()) {
    return guarded([&] {
      const SignalMap map = ingest_array(config_path);
      if (out_path.ends_with(".csv")) write_array_csv(map, out_path);
      else write_array_binary(map, out_path);
      std::cout << "ingested " << map.grid_size() << " rows x "
                << map.channels() << " channels\n";
      return 0;
    });
  }
  if (embed->parsed()) {
    return guarded([&] {
      validate_config(cfg);
      if (cfg.scene == "input" || !cfg.input.empty()) {
        cfg.scene = "input";
        validate_config(cfg);
      }
      const SignalMap raw = acquire_map(cfg);
      const SignalMap map = condition_map(cfg, raw, cfg.noise_sigma);
      write_cloud_csv(embed_map(cfg, map), out_path);
      std::cout << "wrote " << out_path << '\n';
      return 0;
    });
  }
  if (persist->parsed()) {
    return guarded([&] {
      const PointCloud cloud = read_cloud_csv(config_path);
      const PersistenceDiagram diag = persist_cloud(cfg, cloud);
      write_diagram_csv(diag, out_path);
      std::cout << "wrote " << out_path << " (" << diag.features.size()
                << " features)\n";
      return 0;
    });
  }
  if (analyze->parsed()) {
    return guarded([&] {
      validate_config(cfg);
      const PersistenceDiagram diag = read_diagram_csv(config_path);
      const SignalMap raw = acquire_map(cfg);
      const SignalMap map = condition_map(cfg, raw, cfg.noise_sigma);
      const EchoReport report = analyze_map(cfg, map, diag);
      write_echo_report_json(report, out_path);
      std::cout << "wrote " << out_path << " (" << report.echos.size()
                << " echos)\n";
      return 0;
    });
  }
  if (pipeline->parsed()) {
    return guarded([&] {
      if (!config_path.empty()) {
        RunConfig file_cfg = parse_config_file(config_path);
        // CLI flags already set on cfg win over file values only for
        // out_dir to keep the rule simple.
        if (cfg.out_dir != "out") file_cfg.out_dir = cfg.out_dir;
        cfg = file_cfg;
      }
      const PipelineSummary summary = run_pipeline(cfg);
      for (const std::string& a : summary.artifacts)
        std::cout << "wrote " << a << '\n';
      return 0;
    });
  }
  if (sweep->parsed()) {
    return guarded([&] {
      if (!config_path.empty()) {
        RunConfig file_cfg = parse_config_file(config_path);
        if (cfg.out_dir != "out") file_cfg.out_dir = cfg.out_dir;
        cfg = file_cfg;
      }
      const auto rows = run_noise_sweep(cfg);
      for (const auto& r : rows)
        std::printf("sigma %.4g  top death %.6g  persistence %.6g\n", r.sigma,
                    r.top_death, r.top_persistence);
      return 0;
    });
  }
  return 0;
}
