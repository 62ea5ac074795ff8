#include "dmcluster/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dmc {

namespace {

void check_frame(const PanopticView& f, const char* what) {
  if (f.semantics.size() != f.instances.size()) {
    throw std::invalid_argument(std::string(what) + " semantics and instances differ in length");
  }
}

void check_pair(const PanopticView& pred, const PanopticView& gt) {
  check_frame(pred, "prediction");
  check_frame(gt, "ground truth");
  if (pred.semantics.size() != gt.semantics.size()) {
    throw std::invalid_argument("prediction and ground truth differ in point count");
  }
}

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

EvalConfig semantic_kitti_eval_config() {
  EvalConfig cfg;
  for (std::uint32_t c = 1; c <= 19; ++c) cfg.classes.push_back(c);
  for (std::uint32_t c = 1; c <= 8; ++c) cfg.things.insert(c);
  cfg.ignore = 0;
  cfg.min_points = 50;
  return cfg;
}

SegmentMatch match_segments(const PanopticView& pred, const PanopticView& gt,
                            std::uint32_t class_id, const EvalConfig& cfg) {
  check_pair(pred, gt);
  const bool thing = cfg.is_thing(class_id);

  std::map<std::uint32_t, std::int64_t> pred_size, gt_size;
  std::unordered_map<std::uint64_t, std::int64_t> inter;
  for (std::size_t i = 0; i < gt.semantics.size(); ++i) {
    if (cfg.ignore && gt.semantics[i] == *cfg.ignore) continue;
    const bool in_pred = pred.semantics[i] == class_id;
    const bool in_gt = gt.semantics[i] == class_id;
    if (!in_pred && !in_gt) continue;
    const std::uint32_t pid = thing ? pred.instances[i] : 0;
    const std::uint32_t gid = thing ? gt.instances[i] : 0;
    const bool pred_seg = in_pred && (!thing || pid != 0);
    const bool gt_seg = in_gt && (!thing || gid != 0);
    if (pred_seg) ++pred_size[pid];
    if (gt_seg) ++gt_size[gid];
    if (pred_seg && gt_seg) ++inter[(std::uint64_t{pid} << 32) | gid];
  }

  SegmentMatch out;
  std::set<std::uint32_t> matched_pred, matched_gt;
  for (const auto& [key, n] : inter) {
    const auto pid = static_cast<std::uint32_t>(key >> 32);
    const auto gid = static_cast<std::uint32_t>(key & 0xffffffffu);
    const double uni = static_cast<double>(pred_size[pid] + gt_size[gid] - n);
    const double iou = static_cast<double>(n) / uni;
    if (iou > 0.5) {
      out.tp.push_back({pid, gid, iou});
      matched_pred.insert(pid);
      matched_gt.insert(gid);
    }
  }
  std::sort(out.tp.begin(), out.tp.end(),
            [](const SegmentPair& a, const SegmentPair& b) { return a.pred < b.pred; });
  for (const auto& [pid, n] : pred_size) {
    if (!matched_pred.contains(pid) && n >= cfg.min_points) out.fp.push_back(pid);
  }
  for (const auto& [gid, n] : gt_size) {
    if (!matched_gt.contains(gid) && n >= cfg.min_points) out.fn.push_back(gid);
  }
  return out;
}

PanopticAccumulator::PanopticAccumulator(EvalConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.classes.empty()) {
    throw std::invalid_argument("evaluation needs at least one class");
  }
  counts_.resize(cfg_.classes.size());
}

void PanopticAccumulator::add(const PanopticView& pred, const PanopticView& gt) {
  check_pair(pred, gt);
  std::unordered_map<std::uint32_t, std::size_t> slot;
  for (std::size_t k = 0; k < cfg_.classes.size(); ++k) slot[cfg_.classes[k]] = k;

  for (std::size_t i = 0; i < gt.semantics.size(); ++i) {
    if (cfg_.ignore && gt.semantics[i] == *cfg_.ignore) continue;
    const auto p = slot.find(pred.semantics[i]);
    const auto g = slot.find(gt.semantics[i]);
    if (p != slot.end()) ++counts_[p->second].sem_pred;
    if (g != slot.end()) ++counts_[g->second].sem_gt;
    if (p != slot.end() && g != slot.end() && p->second == g->second) {
      ++counts_[p->second].sem_inter;
    }
  }

  for (std::size_t k = 0; k < cfg_.classes.size(); ++k) {
    Counts& c = counts_[k];
    const SegmentMatch match = match_segments(pred, gt, cfg_.classes[k], cfg_);
    c.tp += static_cast<std::int64_t>(match.tp.size());
    c.fp += static_cast<std::int64_t>(match.fp.size());
    c.fn += static_cast<std::int64_t>(match.fn.size());
    for (const SegmentPair& m : match.tp) c.iou_sum += m.iou;
  }
}

void PanopticAccumulator::merge(const PanopticAccumulator& other) {
  if (other.cfg_.classes != cfg_.classes) {
    throw std::invalid_argument("cannot merge accumulators over different class sets");
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    Counts& a = counts_[k];
    const Counts& b = other.counts_[k];
    a.tp += b.tp;
    a.fp += b.fp;
    a.fn += b.fn;
    a.iou_sum += b.iou_sum;
    a.sem_inter += b.sem_inter;
    a.sem_pred += b.sem_pred;
    a.sem_gt += b.sem_gt;
  }
}

PanopticReport PanopticAccumulator::report() const {
  PanopticReport out;
  struct Mean {
    double sum = 0;
    int n = 0;
    void add(double v) { sum += v, ++n; }
    double get() const { return n ? sum / n : 0.0; }
  };
  Mean pq, pqd, rq, sq, pq_th, rq_th, sq_th, pq_st, rq_st, sq_st, miou;

  for (std::size_t k = 0; k < counts_.size(); ++k) {
    const Counts& c = counts_[k];
    const std::int64_t sem_union = c.sem_pred + c.sem_gt - c.sem_inter;
    const double den = static_cast<double>(c.tp) + 0.5 * static_cast<double>(c.fp + c.fn);
    if (den == 0 && sem_union == 0) continue;

    ClassReport r;
    r.class_id = cfg_.classes[k];
    r.thing = cfg_.is_thing(r.class_id);
    r.tp = c.tp;
    r.fp = c.fp;
    r.fn = c.fn;
    r.iou_sum = c.iou_sum;
    r.pq = ratio(c.iou_sum, den);
    r.rq = ratio(static_cast<double>(c.tp), den);
    r.sq = ratio(c.iou_sum, static_cast<double>(c.tp));
    r.iou = ratio(static_cast<double>(c.sem_inter), static_cast<double>(sem_union));
    r.pq_dagger = r.thing ? r.pq : r.iou;
    out.classes.push_back(r);

    if (sem_union > 0) miou.add(r.iou);
    if (den == 0) continue;
    pq.add(r.pq);
    pqd.add(r.pq_dagger);
    rq.add(r.rq);
    sq.add(r.sq);
    if (r.thing) {
      pq_th.add(r.pq), rq_th.add(r.rq), sq_th.add(r.sq);
    } else {
      pq_st.add(r.pq), rq_st.add(r.rq), sq_st.add(r.sq);
    }
  }

  out.pq = pq.get();
  out.pq_dagger = pqd.get();
  out.rq = rq.get();
  out.sq = sq.get();
  out.pq_th = pq_th.get();
  out.rq_th = rq_th.get();
  out.sq_th = sq_th.get();
  out.pq_st = pq_st.get();
  out.rq_st = rq_st.get();
  out.sq_st = sq_st.get();
  out.miou = miou.get();
  return out;
}

PanopticReport panoptic_quality(const PanopticView& pred, const PanopticView& gt,
                                const EvalConfig& cfg) {
  PanopticAccumulator acc(cfg);
  acc.add(pred, gt);
  return acc.report();
}

std::string to_text(const PanopticReport& r) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "PQ %.4f  PQ+ %.4f  RQ %.4f  SQ %.4f  mIoU %.4f\n", r.pq,
                r.pq_dagger, r.rq, r.sq, r.miou);
  os << line;
  std::snprintf(line, sizeof line, "things: PQ %.4f  RQ %.4f  SQ %.4f\n", r.pq_th, r.rq_th, r.sq_th);
  os << line;
  std::snprintf(line, sizeof line, "stuff:  PQ %.4f  RQ %.4f  SQ %.4f\n", r.pq_st, r.rq_st, r.sq_st);
  os << line;
  os << "class  kind   PQ      RQ      SQ      IoU     TP    FP    FN\n";
  for (const ClassReport& c : r.classes) {
    std::snprintf(line, sizeof line, "%5u  %-5s  %.4f  %.4f  %.4f  %.4f  %4lld  %4lld  %4lld\n",
                  c.class_id, c.thing ? "thing" : "stuff", c.pq, c.rq, c.sq, c.iou,
                  static_cast<long long>(c.tp), static_cast<long long>(c.fp),
                  static_cast<long long>(c.fn));
    os << line;
  }
  return os.str();
}

std::string to_json(const PanopticReport& r) {
  nlohmann::json j;
  j["pq"] = r.pq;
  j["pq_dagger"] = r.pq_dagger;
  j["rq"] = r.rq;
  j["sq"] = r.sq;
  j["pq_th"] = r.pq_th;
  j["rq_th"] = r.rq_th;
  j["sq_th"] = r.sq_th;
  j["pq_st"] = r.pq_st;
  j["rq_st"] = r.rq_st;
  j["sq_st"] = r.sq_st;
  j["miou"] = r.miou;
  auto& classes = j["classes"] = nlohmann::json::array();
  for (const ClassReport& c : r.classes) {
    classes.push_back({{"class", c.class_id},
                       {"thing", c.thing},
                       {"pq", c.pq},
                       {"rq", c.rq},
                       {"sq", c.sq},
                       {"pq_dagger", c.pq_dagger},
                       {"iou", c.iou},
                       {"tp", c.tp},
                       {"fp", c.fp},
                       {"fn", c.fn}});
  }
  return j.dump(2);
}

}  // namespace dmc
