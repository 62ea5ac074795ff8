#include "dmcluster/cli.hpp"

#include "dmcluster/io_kitti.hpp"
#include "dmcluster/metrics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace dmc::cli {

namespace {

std::vector<fs::path> list_with_extension(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Calls fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 64));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

ClusterResult run_pipeline(const PointCloud& cloud, std::span<const std::uint32_t> semantics,
                           const RunOptions& options) {
  return options.baseline ? cluster_frame_baseline(cloud, semantics, options.pipeline)
                          : cluster_frame(cloud, semantics, options.pipeline);
}

/// Writes through a temporary file so readers never see a partial frame.
void write_labels_atomic(std::span<const std::uint32_t> semantics,
                         std::span<const std::uint32_t> instances, const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_labels(semantics, instances, tmp);
  fs::rename(tmp, path);
}

EvalConfig raw_eval_config(const std::set<std::uint32_t>& present) {
  EvalConfig cfg;
  for (std::uint32_t c : present) {
    if (c != 0) cfg.classes.push_back(c);
  }
  const auto things = semantic_kitti_thing_classes();
  cfg.things.insert(things.begin(), things.end());
  if (cfg.classes.empty()) cfg.classes.push_back(1);
  return cfg;
}

PanopticFrame maybe_remap(PanopticFrame f, bool remap) {
  if (remap) f.semantics = learning_map(f.semantics);
  return f;
}

}  // namespace

std::vector<fs::path> list_scans(const fs::path& dir) { return list_with_extension(dir, ".bin"); }

int cmd_cluster(const fs::path& scan_dir, const fs::path& semantic_dir, const fs::path& out_dir,
                const RunOptions& options, std::ostream& log) {
  std::vector<fs::path> scans;
  try {
    scans = list_scans(scan_dir);
    if (!fs::is_directory(semantic_dir)) throw IoError("not a directory: " + semantic_dir.string());
    const auto labels = list_with_extension(semantic_dir, ".label");
    if (labels.size() != scans.size()) {
      log << "error: " << scans.size() << " scans but " << labels.size() << " label files\n";
      return 1;
    }
    fs::create_directories(out_dir);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }

  struct Outcome {
    bool ok = false;
    std::string message;
    FrameDiagnostics diag;
  };
  std::vector<Outcome> outcomes(scans.size());

  parallel_for(scans.size(), options.threads, [&](std::size_t i) {
    const fs::path& scan = scans[i];
    Outcome& o = outcomes[i];
    try {
      const PointCloud cloud = read_scan(scan);
      const fs::path label_path = semantic_dir / (scan.stem().string() + ".label");
      if (!fs::exists(label_path)) throw IoError("missing " + label_path.string());
      const PanopticFrame sem = read_labels(label_path, static_cast<std::size_t>(cloud.rows()));
      const ClusterResult result = run_pipeline(cloud, sem.semantics, options);
      write_labels_atomic(sem.semantics, result.instances,
                          out_dir / (scan.stem().string() + ".label"));
      o.ok = true;
      o.diag = result.diagnostics;
    } catch (const std::exception& e) {
      o.message = e.what();
    }
  });

  int failures = 0;
  double total_ms = 0;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (!o.ok) {
      ++failures;
      log << scans[i].stem().string() << ": error: " << o.message << "\n";
      continue;
    }
    char line[200];
    std::snprintf(line, sizeof line, "%s: points %zu masked %zu m %d k %d  %.2f ms\n",
                  scans[i].stem().string().c_str(), o.diag.n_points, o.diag.n_masked, o.diag.m,
                  o.diag.k, o.diag.timings.total_ms);
    log << line;
    total_ms += o.diag.timings.total_ms;
  }
  const auto done = scans.size() - static_cast<std::size_t>(failures);
  if (done > 0) {
    char line[120];
    std::snprintf(line, sizeof line, "%zu frames, mean %.2f ms/frame\n", done,
                  total_ms / static_cast<double>(done));
    log << line;
  }
  return failures == 0 ? 0 : 1;
}

int cmd_eval(const fs::path& pred_dir, const fs::path& gt_dir, const EvalOptions& options,
             std::ostream& out, std::ostream& log) {
  try {
    const auto gts = list_with_extension(gt_dir, ".label");
    if (!fs::is_directory(pred_dir)) throw IoError("not a directory: " + pred_dir.string());

    std::vector<std::pair<PanopticFrame, PanopticFrame>> frames;
    std::set<std::uint32_t> present;
    for (const fs::path& gt_path : gts) {
      const fs::path pred_path = pred_dir / gt_path.filename();
      if (!fs::exists(pred_path)) throw IoError("missing prediction " + pred_path.string());
      PanopticFrame gt = maybe_remap(read_labels(gt_path), options.remap);
      PanopticFrame pred =
          maybe_remap(read_labels(pred_path, gt.semantics.size()), options.remap);
      if (!options.remap) {
        present.insert(gt.semantics.begin(), gt.semantics.end());
        present.insert(pred.semantics.begin(), pred.semantics.end());
      }
      frames.emplace_back(std::move(pred), std::move(gt));
    }

    PanopticAccumulator acc(options.remap ? semantic_kitti_eval_config() : raw_eval_config(present));
    for (const auto& [pred, gt] : frames) acc.add(pred, gt);
    const PanopticReport report = acc.report();
    out << (options.json ? to_json(report) + "\n" : to_text(report));
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<SweepRow> cmd_sweep(const fs::path& scan_dir, const fs::path& gt_dir,
                                const std::vector<double>& edges, const RunOptions& options,
                                bool remap) {
  if (edges.empty()) throw std::invalid_argument("sweep needs at least one voxel size");
  for (double l : edges) {
    if (!(l > 0)) throw std::invalid_argument("voxel sizes must be positive");
  }

  const auto scans = list_scans(scan_dir);
  std::vector<PointCloud> clouds;
  std::vector<PanopticFrame> truths;
  std::set<std::uint32_t> present;
  for (const fs::path& scan : scans) {
    clouds.push_back(read_scan(scan));
    truths.push_back(read_labels(gt_dir / (scan.stem().string() + ".label"),
                                 static_cast<std::size_t>(clouds.back().rows())));
    present.insert(truths.back().semantics.begin(), truths.back().semantics.end());
  }
  const EvalConfig eval = remap ? semantic_kitti_eval_config() : raw_eval_config(present);

  std::vector<SweepRow> rows;
  for (double l : edges) {
    RunOptions run = options;
    run.pipeline.voxel_edge = l;
    std::vector<ClusterResult> results(clouds.size());
    parallel_for(clouds.size(), options.threads, [&](std::size_t i) {
      results[i] = run_pipeline(clouds[i], truths[i].semantics, run);
    });

    PanopticAccumulator acc(eval);
    SweepRow row{l, 0, 0, 0};
    for (std::size_t i = 0; i < clouds.size(); ++i) {
      row.mean_m += results[i].diagnostics.m;
      row.mean_ms += results[i].diagnostics.timings.total_ms;
      const PanopticFrame pred{truths[i].semantics, results[i].instances};
      acc.add(maybe_remap(pred, remap), maybe_remap(truths[i], remap));
    }
    if (!clouds.empty()) {
      row.mean_m /= static_cast<double>(clouds.size());
      row.mean_ms /= static_cast<double>(clouds.size());
    }
    row.pq = acc.report().pq;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "l,mean_m,mean_ms,PQ\n";
  char line[128];
  for (const SweepRow& r : rows) {
    std::snprintf(line, sizeof line, "%g,%.2f,%.3f,%.4f\n", r.l, r.mean_m, r.mean_ms, r.pq);
    os << line;
  }
  return os.str();
}

void cmd_synth(const fs::path& out_dir, int frames, std::uint64_t seed,
               const RandomSceneOptions& options) {
  if (frames < 0) throw std::invalid_argument("frame count must be non-negative");
  const fs::path scans = out_dir / "velodyne";
  const fs::path labels = out_dir / "labels";
  fs::create_directories(scans);
  fs::create_directories(labels);
  for (int f = 0; f < frames; ++f) {
    const std::uint64_t frame_seed = seed + static_cast<std::uint64_t>(f);
    const SyntheticFrame frame = synth_scene(random_scene(frame_seed, options), frame_seed);
    char stem[16];
    std::snprintf(stem, sizeof stem, "%06d", f);
    write_scan(frame.cloud, scans / (std::string(stem) + ".bin"));
    write_labels(frame.truth.semantics, frame.truth.instances, labels / (std::string(stem) + ".label"));
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Divide-and-merge LiDAR instance clustering"};
  app.require_subcommand(1);

  RunOptions run_opts;
  double euclidean = 0;
  auto add_pipeline_flags = [&](CLI::App* sub) {
    PipelineConfig& p = run_opts.pipeline;
    sub->add_option("--voxel-size", p.voxel_edge, "Voxel edge l in meters")->capture_default_str();
    sub->add_option("--theta", p.theta_deg, "Angle threshold in degrees")->capture_default_str();
    sub->add_option("--rows", p.projection.rows, "Range image rows")->capture_default_str();
    sub->add_option("--cols", p.projection.cols, "Range image columns")->capture_default_str();
    sub->add_option("--fov-up", p.projection.fov_up_deg, "Upper vertical FOV (deg)")->capture_default_str();
    sub->add_option("--fov-down", p.projection.fov_down_deg, "Lower vertical FOV (deg)")->capture_default_str();
    sub->add_flag("--no-postprocess", [&](std::int64_t) { p.postprocess = false; },
                  "Skip the bird's-eye-view merge");
    sub->add_flag("--no-wrap", [&](std::int64_t) { p.wrap = false; }, "Disable column wraparound");
    sub->add_flag("--baseline", run_opts.baseline, "Use single-pass depth clustering");
    sub->add_option("--euclidean", euclidean,
                    "Use a Euclidean distance predicate with this threshold (m)");
    sub->add_option("--threads", run_opts.threads, "Frames processed in parallel")->capture_default_str();
  };
  auto apply_predicate = [&] {
    if (euclidean > 0) {
      run_opts.pipeline.condition = ConditionKind::kEuclidean;
      run_opts.pipeline.euclidean_threshold = euclidean;
    }
  };

  std::string scan_dir, sem_dir, out_dir, pred_dir, gt_dir;

  auto* cluster = app.add_subcommand("cluster", "Cluster a directory of scans");
  cluster->add_option("scans", scan_dir, "Directory of .bin scans")->required();
  cluster->add_option("semantics", sem_dir, "Directory of .label semantic predictions")->required();
  cluster->add_option("out", out_dir, "Output directory for panoptic .label files")->required();
  add_pipeline_flags(cluster);

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Panoptic quality of predictions against ground truth");
  eval->add_option("predictions", pred_dir, "Directory of predicted .label files")->required();
  eval->add_option("groundtruth", gt_dir, "Directory of ground-truth .label files")->required();
  eval->add_flag("--json", eval_opts.json, "Emit JSON instead of text");
  eval->add_flag("--no-remap", [&](std::int64_t) { eval_opts.remap = false; },
                 "Score raw class ids without the SemanticKITTI learning map");

  std::vector<double> edges;
  bool sweep_no_remap = false;
  auto* sweep = app.add_subcommand("sweep", "Runtime/accuracy trade-off over voxel sizes");
  sweep->add_option("scans", scan_dir, "Directory of .bin scans")->required();
  sweep->add_option("groundtruth", gt_dir, "Directory of ground-truth .label files")->required();
  sweep->add_option("-l,--sizes", edges, "Voxel sizes in meters")->required()->delimiter(',');
  sweep->add_flag("--no-remap", sweep_no_remap, "Score raw class ids");
  add_pipeline_flags(sweep);

  int frames = 1;
  std::uint64_t seed = 0;
  RandomSceneOptions scene;
  auto* synth = app.add_subcommand("synth", "Write random synthetic scans with ground truth");
  synth->add_option("out", out_dir, "Output directory")->required();
  synth->add_option("--frames", frames, "Number of frames")->capture_default_str();
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();
  synth->add_option("--cars", scene.cars)->capture_default_str();
  synth->add_option("--pedestrians", scene.pedestrians)->capture_default_str();
  synth->add_option("--noise", scene.sensor.range_noise, "Range noise std-dev (m)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  apply_predicate();

  try {
    if (*cluster) return cmd_cluster(scan_dir, sem_dir, out_dir, run_opts, std::cerr);
    if (*eval) return cmd_eval(pred_dir, gt_dir, eval_opts, std::cout, std::cerr);
    if (*sweep) {
      std::cout << sweep_table(cmd_sweep(scan_dir, gt_dir, edges, run_opts, !sweep_no_remap));
      return 0;
    }
    if (*synth) {
      cmd_synth(out_dir, frames, seed, scene);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dmc::cli
