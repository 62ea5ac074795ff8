#pragma once

#include "dmcluster/pipeline.hpp"
#include "dmcluster/synth_scene.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dmc::cli {

namespace fs = std::filesystem;

struct RunOptions {
  PipelineConfig pipeline = PipelineConfig::kitti();
  bool baseline = false;
  int threads = 1;
};

/// Clusters every `<stem>.bin` in scan_dir using the class ids in
/// `semantic_dir/<stem>.label` and writes `out_dir/<stem>.label`.
/// Returns 0 iff every frame succeeded.
int cmd_cluster(const fs::path& scan_dir, const fs::path& semantic_dir, const fs::path& out_dir,
                const RunOptions& options, std::ostream& log);

struct EvalOptions {
  /// Map raw SemanticKITTI ids to the 19 evaluation classes first.
  bool remap = true;
  bool json = false;
};

/// Evaluates every ground-truth `<stem>.label` in gt_dir against the
/// prediction with the same stem. Returns 0 on success; a missing or
/// mismatched prediction is an error.
int cmd_eval(const fs::path& pred_dir, const fs::path& gt_dir, const EvalOptions& options,
             std::ostream& out, std::ostream& log);

struct SweepRow {
  double l = 0;
  double mean_m = 0;
  double mean_ms = 0;
  double pq = 0;
};

/// Runs the pipeline over the scans once per voxel edge, taking semantics
/// from the ground-truth labels, and scores each run.
std::vector<SweepRow> cmd_sweep(const fs::path& scan_dir, const fs::path& gt_dir,
                                const std::vector<double>& edges, const RunOptions& options,
                                bool remap = true);

/// Comma-separated table with header `l,mean_m,mean_ms,PQ`.
std::string sweep_table(const std::vector<SweepRow>& rows);

/// Writes `frames` random scenes as `out_dir/velodyne/NNNNNN.bin` and
/// `out_dir/labels/NNNNNN.label`.
void cmd_synth(const fs::path& out_dir, int frames, std::uint64_t seed,
               const RandomSceneOptions& options);

/// Sorted `<stem>.bin` files of a directory.
std::vector<fs::path> list_scans(const fs::path& dir);

int run(int argc, char** argv);

}  // namespace dmc::cli
