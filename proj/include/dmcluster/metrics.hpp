#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dmc {

/// Per-point (class, instance) labels of one frame. Stuff classes carry
/// instance 0.
struct PanopticFrame {
  std::vector<std::uint32_t> semantics;
  std::vector<std::uint32_t> instances;
};

struct PanopticView {
  std::span<const std::uint32_t> semantics;
  std::span<const std::uint32_t> instances;

  PanopticView() = default;
  PanopticView(std::span<const std::uint32_t> sem, std::span<const std::uint32_t> inst)
      : semantics(sem), instances(inst) {}
  PanopticView(const PanopticFrame& f) : semantics(f.semantics), instances(f.instances) {}  // NOLINT
};

struct EvalConfig {
  std::vector<std::uint32_t> classes;
  std::set<std::uint32_t> things;
  /// Points whose ground-truth class equals this are dropped before matching.
  std::optional<std::uint32_t> ignore = 0;
  /// Unmatched segments smaller than this are counted as neither FP nor FN.
  std::int64_t min_points = 0;

  bool is_thing(std::uint32_t c) const { return things.contains(c); }
};

/// Class ids 1..19 of the remapped SemanticKITTI label set, things 1..8,
/// ignore 0, and the benchmark's 50-point floor for FP/FN segments.
EvalConfig semantic_kitti_eval_config();

struct SegmentPair {
  std::uint32_t pred = 0;
  std::uint32_t gt = 0;
  double iou = 0.0;
};

struct SegmentMatch {
  std::vector<SegmentPair> tp;
  std::vector<std::uint32_t> fp;  ///< unmatched predicted instance ids
  std::vector<std::uint32_t> fn;  ///< unmatched ground-truth instance ids
};

/// Segments of class `class_id` in both frames and their IoU > 0.5 matching.
/// A segment is the set of points sharing (class, instance). For stuff
/// classes the whole class is one segment; for thing classes instance 0 is
/// not a segment. Unmatched segments below cfg.min_points are dropped.
/// Results are sorted by instance id.
SegmentMatch match_segments(const PanopticView& pred, const PanopticView& gt,
                            std::uint32_t class_id, const EvalConfig& cfg);

struct ClassReport {
  std::uint32_t class_id = 0;
  bool thing = false;
  double pq = 0, rq = 0, sq = 0, pq_dagger = 0, iou = 0;
  std::int64_t tp = 0, fp = 0, fn = 0;
  double iou_sum = 0;
};

struct PanopticReport {
  std::vector<ClassReport> classes;  ///< only classes present in pred or gt
  double pq = 0, pq_dagger = 0, rq = 0, sq = 0;
  double pq_th = 0, rq_th = 0, sq_th = 0;
  double pq_st = 0, rq_st = 0, sq_st = 0;
  double miou = 0;
};

/// Sums matching counts and semantic confusion over any number of frames.
/// Accumulators combine associatively with merge().
class PanopticAccumulator {
 public:
  explicit PanopticAccumulator(EvalConfig cfg);

  void add(const PanopticView& pred, const PanopticView& gt);
  void merge(const PanopticAccumulator& other);
  PanopticReport report() const;

  const EvalConfig& config() const { return cfg_; }

 private:
  struct Counts {
    std::int64_t tp = 0, fp = 0, fn = 0;
    double iou_sum = 0;
    std::int64_t sem_inter = 0, sem_pred = 0, sem_gt = 0;
  };

  EvalConfig cfg_;
  std::vector<Counts> counts_;
};

/// Single-frame convenience wrapper around PanopticAccumulator.
PanopticReport panoptic_quality(const PanopticView& pred, const PanopticView& gt,
                                const EvalConfig& cfg);

std::string to_text(const PanopticReport& report);
std::string to_json(const PanopticReport& report);

}  // namespace dmc
