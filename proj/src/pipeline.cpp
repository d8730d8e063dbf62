#include "sonartda/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sonartda/array_io.hpp"
#include "sonartda/embedding.hpp"
#include "sonartda/scatter.hpp"
#include "sonartda/signal_ops.hpp"
#include "sonartda/svg_plot.hpp"

namespace sonartda {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_double_list(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::string render_double_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt17(v[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

ChannelReducer reducer_from_name(const std::string& name) {
  if (name == "magnitude") return ChannelReducer::kMagnitude;
  if (name == "max") return ChannelReducer::kMaxMagnitude;
  if (name == "l2") return ChannelReducer::kL2Magnitude;
  throw ValidationError("unknown reducer '" + name +
                        "' (want identity, magnitude, max or l2)");
}

template <typename F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    throw ComputeError(name + ": " + e.what());
  } catch (const ComputeError& e) {
    throw ComputeError(name + ": " + e.what());
  }
}

Scene build_scene(const RunConfig& cfg) {
  Scene scene = [&] {
    if (cfg.scene == "pipe")
      return pipe_scene(cfg.pipe_length, cfg.pipe_width,
                        cfg.pipe_scatterers_per_side,
                        Complex(cfg.pipe_reflectivity_re,
                                cfg.pipe_reflectivity_im));
    if (cfg.scene == "two_scatter")
      return Scene({{{0.0, 0.0, 0.0}, {1.0, 0.0}},
                    {{2.0, 0.0, 0.0}, {-0.5, 0.0}}});
    if (cfg.scene == "three_scatter")
      return Scene({{{0.0, 0.0, 0.0}, {1.0, 0.0}},
                    {{2.0, 0.0, 0.0}, {-0.5, 0.0}},
                    {{0.0, 1.0, 0.0}, {0.75, 0.0}}});
    throw ValidationError("unknown scene '" + cfg.scene + "'");
  }();
  if (cfg.scene_offset_x != 0.0 || cfg.scene_offset_y != 0.0 ||
      cfg.scene_offset_z != 0.0)
    scene = scene.translated(
        {cfg.scene_offset_x, cfg.scene_offset_y, cfg.scene_offset_z});
  return scene;
}

CollectionGeometry build_geometry(const RunConfig& cfg) {
  std::vector<double> ks;
  if (cfg.trajectory == "sphere" || cfg.n_wavenumbers == 1) {
    ks.push_back(cfg.k_min);
  } else {
    for (int q = 0; q < cfg.n_wavenumbers; ++q)
      ks.push_back(cfg.k_min +
                   (cfg.k_max - cfg.k_min) * q / (cfg.n_wavenumbers - 1));
  }
  const DomainDescriptor traj =
      cfg.trajectory == "sphere"
          ? DomainDescriptor::sphere_grid(cfg.n_azimuth, cfg.n_elevation)
          : DomainDescriptor::circle(cfg.n_angles);
  return {traj, cfg.radius, std::move(ks)};
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "scene") cfg.scene = value;
  else if (key == "input") cfg.input = value;
  else if (key == "pipe_length") cfg.pipe_length = std::stod(value);
  else if (key == "pipe_width") cfg.pipe_width = std::stod(value);
  else if (key == "pipe_scatterers_per_side")
    cfg.pipe_scatterers_per_side = std::stoi(value);
  else if (key == "pipe_reflectivity_re")
    cfg.pipe_reflectivity_re = std::stod(value);
  else if (key == "pipe_reflectivity_im")
    cfg.pipe_reflectivity_im = std::stod(value);
  else if (key == "scene_offset") {
    const auto v = parse_double_list(value);
    if (v.size() != 3)
      throw ValidationError("scene_offset needs three comma-separated values");
    cfg.scene_offset_x = v[0];
    cfg.scene_offset_y = v[1];
    cfg.scene_offset_z = v[2];
  } else if (key == "trajectory") cfg.trajectory = value;
  else if (key == "n_angles") cfg.n_angles = std::stoi(value);
  else if (key == "n_azimuth") cfg.n_azimuth = std::stoi(value);
  else if (key == "n_elevation") cfg.n_elevation = std::stoi(value);
  else if (key == "radius") cfg.radius = std::stod(value);
  else if (key == "k_min") cfg.k_min = std::stod(value);
  else if (key == "k_max") cfg.k_max = std::stod(value);
  else if (key == "n_wavenumbers") cfg.n_wavenumbers = std::stoi(value);
  else if (key == "normalize_peak") cfg.normalize_peak = std::stod(value);
  else if (key == "noise_sigma") cfg.noise_sigma = std::stod(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "embed_method") cfg.embed_method = value;
  else if (key == "offsets_deg") cfg.offsets_deg = parse_double_list(value);
  else if (key == "reducer") cfg.reducer = value;
  else if (key == "metric") cfg.metric = value;
  else if (key == "max_dim") cfg.max_dim = std::stoi(value);
  else if (key == "max_eps") cfg.max_eps = std::stod(value);
  else if (key == "threshold_fraction")
    cfg.threshold_fraction = std::stod(value);
  else if (key == "tolerance") cfg.tolerance = std::stod(value);
  else if (key == "sigmas") cfg.sigmas = parse_double_list(value);
  else if (key == "out_dir") cfg.out_dir = value;
  else throw ValidationError("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            " is not 'key = value'");
    try {
      apply_config_entry(cfg, trim(stripped.substr(0, eq)),
                         trim(stripped.substr(eq + 1)));
    } catch (const std::invalid_argument&) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            " has a malformed value");
    }
  }
  return cfg;
}

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream s;
  s << "embed_method = " << cfg.embed_method << '\n'
    << "input = " << cfg.input << '\n'
    << "k_max = " << fmt17(cfg.k_max) << '\n'
    << "k_min = " << fmt17(cfg.k_min) << '\n'
    << "max_dim = " << cfg.max_dim << '\n'
    << "max_eps = " << fmt17(cfg.max_eps) << '\n'
    << "metric = " << cfg.metric << '\n'
    << "n_angles = " << cfg.n_angles << '\n'
    << "n_azimuth = " << cfg.n_azimuth << '\n'
    << "n_elevation = " << cfg.n_elevation << '\n'
    << "n_wavenumbers = " << cfg.n_wavenumbers << '\n'
    << "noise_sigma = " << fmt17(cfg.noise_sigma) << '\n'
    << "normalize_peak = " << fmt17(cfg.normalize_peak) << '\n'
    << "offsets_deg = " << render_double_list(cfg.offsets_deg) << '\n'
    << "pipe_length = " << fmt17(cfg.pipe_length) << '\n'
    << "pipe_reflectivity_im = " << fmt17(cfg.pipe_reflectivity_im) << '\n'
    << "pipe_reflectivity_re = " << fmt17(cfg.pipe_reflectivity_re) << '\n'
    << "pipe_scatterers_per_side = " << cfg.pipe_scatterers_per_side << '\n'
    << "pipe_width = " << fmt17(cfg.pipe_width) << '\n'
    << "radius = " << fmt17(cfg.radius) << '\n'
    << "reducer = " << cfg.reducer << '\n'
    << "scene = " << cfg.scene << '\n'
    << "scene_offset = " << fmt17(cfg.scene_offset_x) << ','
    << fmt17(cfg.scene_offset_y) << ',' << fmt17(cfg.scene_offset_z) << '\n'
    << "seed = " << cfg.seed << '\n'
    << "sigmas = " << render_double_list(cfg.sigmas) << '\n'
    << "threshold_fraction = " << fmt17(cfg.threshold_fraction) << '\n'
    << "tolerance = " << fmt17(cfg.tolerance) << '\n'
    << "trajectory = " << cfg.trajectory << '\n';
  return s.str();
}

std::string config_hash(const RunConfig& cfg) {
  // FNV-1a, 64 bit.
  const std::string canon = canonical_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.scene != "pipe" && cfg.scene != "two_scatter" &&
      cfg.scene != "three_scatter" && cfg.scene != "input")
    throw ValidationError("unknown scene '" + cfg.scene + "'");
  if (cfg.scene == "input" && !fs::exists(cfg.input))
    throw ValidationError("input file does not exist: " + cfg.input);
  if (cfg.trajectory != "circle" && cfg.trajectory != "sphere")
    throw ValidationError("trajectory must be circle or sphere");
  if (cfg.embed_method != "delay" && cfg.embed_method != "tangent")
    throw ValidationError("embed_method must be delay or tangent");
  if (cfg.reducer != "identity") reducer_from_name(cfg.reducer);
  if (cfg.metric != "euclidean" && cfg.metric != "geodesic")
    throw ValidationError("metric must be euclidean or geodesic");
  if (cfg.max_dim < 0 || cfg.max_dim > 2)
    throw ValidationError("max_dim must be 0, 1 or 2");
  if (cfg.n_angles < 2) throw ValidationError("n_angles must be >= 2");
  if (cfg.n_azimuth < 2 || cfg.n_elevation < 2)
    throw ValidationError("sphere grid counts must be >= 2");
  if (!(cfg.radius > 0.0)) throw ValidationError("radius must be > 0");
  if (cfg.n_wavenumbers < 1)
    throw ValidationError("n_wavenumbers must be >= 1");
  if (cfg.n_wavenumbers > 1 && !(cfg.k_max > cfg.k_min))
    throw ValidationError("k_max must exceed k_min");
  if (!(cfg.k_min > 0.0)) throw ValidationError("k_min must be > 0");
  if (cfg.noise_sigma < 0.0) throw ValidationError("noise_sigma must be >= 0");
  if (cfg.normalize_peak < 0.0)
    throw ValidationError("normalize_peak must be >= 0");
  if (!(cfg.threshold_fraction > 0.0) || !(cfg.threshold_fraction < 1.0))
    throw ValidationError("threshold_fraction must lie in (0, 1)");
  if (!(cfg.tolerance >= 0.0) || cfg.tolerance >= 1.0)
    throw ValidationError("tolerance must lie in [0, 1)");
  if (cfg.max_eps < 0.0) throw ValidationError("max_eps must be >= 0");
  if (cfg.offsets_deg.empty())
    throw ValidationError("offsets_deg must not be empty");
  for (double s : cfg.sigmas)
    if (s < 0.0) throw ValidationError("sweep sigmas must be >= 0");
}

SignalMap acquire_map(const RunConfig& cfg) {
  if (cfg.scene == "input") return ingest_array(cfg.input);
  const Scene scene = build_scene(cfg);
  const CollectionGeometry geom = build_geometry(cfg);
  return cfg.trajectory == "sphere" ? sphere_collect(scene, geom)
                                    : csas_collect(scene, geom);
}

SignalMap condition_map(const RunConfig& cfg, const SignalMap& raw,
                        double noise_sigma) {
  SignalMap map = raw;
  if (cfg.normalize_peak > 0.0) {
    const double peak = peak_magnitude(map);
    if (peak == 0.0)
      throw ComputeError("cannot normalize an all-zero collection");
    map = scale_map(map, cfg.normalize_peak / peak);
  }
  if (noise_sigma > 0.0) map = add_awgn(map, noise_sigma, cfg.seed);
  return map;
}

PointCloud embed_map(const RunConfig& cfg, const SignalMap& map) {
  if (cfg.embed_method == "tangent" ||
      map.domain().kind() == DomainKind::kSphereGrid)
    return tangent_map(map);
  DelayConfig dc;
  dc.offsets_deg = cfg.offsets_deg;
  if (cfg.reducer != "identity") dc.reducer = reducer_from_name(cfg.reducer);
  return delay_embed(map, dc);
}

PersistenceDiagram persist_cloud(const RunConfig& cfg,
                                 const PointCloud& cloud) {
  const MetricTag tag = cfg.metric == "geodesic" ? MetricTag::kPolylineGeodesic
                                                 : MetricTag::kEuclidean;
  const DistanceMatrix d = distance_matrix(cloud, tag);
  double eps = cfg.max_eps;
  if (eps <= 0.0) {
    eps = d.diameter();
    if (eps <= 0.0) eps = 1.0;  // degenerate cloud of identical points
  }
  return rips_persistence(d, cfg.max_dim, eps);
}

EchoReport analyze_map(const RunConfig& cfg, const SignalMap& map,
                       const PersistenceDiagram& diag) {
  EchoReport report;
  report.threshold_fraction = cfg.threshold_fraction;
  const SignalMap trace = magnitude_channel(map, ChannelReducer::kMaxMagnitude);
  if (map.domain().kind() == DomainKind::kCircle) {
    report.echos = detect_prominent_echos(trace, cfg.threshold_fraction);
    report.threshold_value = cfg.threshold_fraction * peak_magnitude(trace);
    report.expected_betti =
        expected_betti(static_cast<int>(report.echos.size()), 1);
    report.verdicts = check_death_bound(report.echos, diag, 1, cfg.tolerance);
  } else {
    // Sphere-grid data: echo supports are regions, not intervals; report
    // only the predicted Betti numbers from the region count.
    report.threshold_value =
        cfg.threshold_fraction * peak_magnitude(trace);
    const int regions =
        count_threshold_regions(trace, report.threshold_value, true);
    report.expected_betti = expected_betti(regions, 2);
  }
  return report;
}

void write_echo_report_json(const EchoReport& report,
                            const std::string& path) {
  ojson j;
  j["threshold"] = report.threshold_value;
  j["threshold_fraction"] = report.threshold_fraction;
  j["expected_betti"] = {report.expected_betti[0], report.expected_betti[1],
                         report.expected_betti[2]};
  j["echos"] = ojson::array();
  // Verdicts are aligned with echos sorted by descending cross section.
  std::vector<int> order(report.echos.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return report.echos[a].cross_section > report.echos[b].cross_section;
  });
  std::vector<int> verdict_of(report.echos.size(), -1);
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    verdict_of[order[rank]] = static_cast<int>(rank);

  for (std::size_t e = 0; e < report.echos.size(); ++e) {
    const EchoSupport& echo = report.echos[e];
    ojson je;
    je["start_deg"] = echo.start_deg;
    je["end_deg"] = echo.end_deg;
    je["peak_deg"] = echo.peak_angle_deg;
    je["sigma"] = echo.cross_section;
    je["loop_length"] = echo.loop_length;
    je["predicted_death_lb"] = 0.5 * echo.cross_section;
    const int v = verdict_of[e];
    if (v >= 0 && v < static_cast<int>(report.verdicts.size())) {
      const DeathBoundVerdict& dv = report.verdicts[v];
      if (std::isfinite(dv.matched_death))
        je["matched_death"] = dv.matched_death;
      else
        je["matched_death"] = nullptr;
      je["verdict"] = dv.pass ? "PASS" : "FAIL";
    } else {
      je["matched_death"] = nullptr;
      je["verdict"] = "FAIL";
    }
    j["echos"].push_back(je);
  }
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);
  f << j.dump(2) << '\n';
}

namespace {

void write_manifest(const RunConfig& cfg, const std::string& path) {
  ojson j;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  j["version"] = "0.1.0";
  j["format_version"] = 1;
  const auto now = std::chrono::system_clock::now();
  j["generated_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          now.time_since_epoch())
          .count();
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);
  f << j.dump(2) << '\n';
}

}  // namespace

PipelineSummary run_pipeline(const RunConfig& cfg) {
  validate_config(cfg);
  fs::create_directories(cfg.out_dir);
  const auto out = [&](const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
  };

  PipelineSummary summary;
  const SignalMap raw = stage("simulate", [&] { return acquire_map(cfg); });
  const SignalMap map =
      stage("condition", [&] { return condition_map(cfg, raw, cfg.noise_sigma); });

  stage("signal", [&] {
    write_array_csv(magnitude_channel(map, ChannelReducer::kMagnitude),
                    out("signal.csv"));
    return 0;
  });

  const PointCloud cloud = stage("embed", [&] { return embed_map(cfg, map); });
  stage("embed", [&] {
    write_cloud_csv(cloud, out("cloud.csv"));
    return 0;
  });

  stage("pca", [&] {
    const int out_dim = std::min(3, cloud.ambient_dim());
    const PointCloud projected = pca_project(cloud, out_dim);
    write_cloud_csv(projected, out("cloud_pca.csv"));
    write_cloud_svg(projected, out("pca.svg"));
    return 0;
  });

  summary.diagram =
      stage("persist", [&] { return persist_cloud(cfg, cloud); });
  stage("persist", [&] {
    write_diagram_csv(summary.diagram, out("diagram.csv"));
    write_diagram_svg(summary.diagram, out("diagram.svg"));
    return 0;
  });

  summary.report =
      stage("analyze", [&] { return analyze_map(cfg, map, summary.diagram); });
  stage("analyze", [&] {
    write_echo_report_json(summary.report, out("echo_report.json"));
    return 0;
  });

  write_manifest(cfg, out("manifest.json"));
  summary.artifacts = {out("signal.csv"),      out("cloud.csv"),
                       out("cloud_pca.csv"),   out("diagram.csv"),
                       out("echo_report.json"), out("diagram.svg"),
                       out("pca.svg"),         out("manifest.json")};
  return summary;
}

std::vector<NoiseSweepRow> run_noise_sweep(const RunConfig& cfg) {
  validate_config(cfg);
  fs::create_directories(cfg.out_dir);

  const SignalMap raw = stage("simulate", [&] { return acquire_map(cfg); });
  SignalMap clean = raw;
  if (cfg.normalize_peak > 0.0) {
    const double peak = peak_magnitude(clean);
    if (peak == 0.0)
      throw ComputeError("sweep: cannot normalize an all-zero collection");
    clean = scale_map(clean, cfg.normalize_peak / peak);
  }

  std::vector<NoiseSweepRow> rows;
  for (std::size_t s = 0; s < cfg.sigmas.size(); ++s) {
    RunConfig step = cfg;
    step.seed = cfg.seed + s;  // independent draw per noise level
    const SignalMap noisy = stage("noise", [&] {
      return cfg.sigmas[s] > 0.0 ? add_awgn(clean, cfg.sigmas[s], step.seed)
                                 : clean;
    });
    const PointCloud cloud =
        stage("embed", [&] { return embed_map(step, noisy); });
    const PersistenceDiagram diag =
        stage("persist", [&] { return persist_cloud(step, cloud); });
    const auto top = top_k_features(diag, 1, 1);
    NoiseSweepRow row;
    row.sigma = cfg.sigmas[s];
    row.top_death = top.empty() ? std::nan("") : top[0].death;
    row.top_persistence = top.empty() ? std::nan("") : top[0].lifetime();
    rows.push_back(row);
  }

  const std::string path =
      (fs::path(cfg.out_dir) / "noise_sweep.csv").string();
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);
  f << "sigma,top_death,top_persistence\n";
  for (const NoiseSweepRow& r : rows)
    f << fmt17(r.sigma) << ',' << fmt17(r.top_death) << ','
      << fmt17(r.top_persistence) << '\n';
  write_manifest(cfg, (fs::path(cfg.out_dir) / "manifest.json").string());
  return rows;
}

}  // namespace sonartda
