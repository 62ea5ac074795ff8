#include "dmcluster/merge.hpp"

#include <deque>
#include <stdexcept>
#include <string>

namespace dmc {

MergeResult merge_mapping(const VoteMatrix& v_plus, const VoteMatrix& v_minus) {
  if (v_plus.rows() != v_plus.cols() || v_minus.rows() != v_plus.rows() ||
      v_minus.cols() != v_plus.cols()) {
    throw std::invalid_argument("vote matrices must both be m x m");
  }
  const auto m = static_cast<std::int32_t>(v_plus.rows());

  // Folding adds rows, and the merge test only compares plus against minus,
  // so a single working copy of their difference gives the same decisions.
  VoteMatrix margin = v_plus - v_minus;

  MergeResult out;
  out.merged_label_list.assign(static_cast<std::size_t>(m), 0);
  std::vector<bool> consumed(static_cast<std::size_t>(m), false);
  std::vector<std::int32_t> remaining(static_cast<std::size_t>(m));
  for (std::int32_t i = 0; i < m; ++i) remaining[static_cast<std::size_t>(i)] = i;

  auto compact = [&] {
    std::size_t kept = 0;
    for (std::int32_t label : remaining) {
      if (!consumed[static_cast<std::size_t>(label)]) remaining[kept++] = label;
    }
    remaining.resize(kept);
  };

  std::int32_t current = 0;
  std::deque<std::int32_t> queue;
  while (true) {
    compact();
    if (remaining.empty()) break;

    ++current;
    const std::int32_t first = remaining.front();
    consumed[static_cast<std::size_t>(first)] = true;
    out.merged_label_list[static_cast<std::size_t>(first)] = current;
    queue.push_back(first);

    while (!queue.empty()) {
      const std::int32_t target = queue.front();
      queue.pop_front();
      compact();
      for (std::int32_t query : remaining) {
        if (consumed[static_cast<std::size_t>(query)]) continue;
        ++out.stats.vote_evals;
        if (margin(target, query) > 0) {
          consumed[static_cast<std::size_t>(query)] = true;
          out.merged_label_list[static_cast<std::size_t>(query)] = current;
          queue.push_back(query);
          margin.row(query) += margin.row(target);
          ++out.stats.row_folds;
          out.stats.fold_cells += m;
        }
      }
    }
  }
  out.n_instances = current;
  return out;
}

LabelImage relabel(const LabelImage& labels, const std::vector<std::int32_t>& mapping) {
  LabelImage out = labels;
  const auto m = static_cast<std::int32_t>(mapping.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    std::int32_t& v = out.data()[i];
    if (v == 0) continue;
    if (v < 0 || v > m) {
      throw std::invalid_argument("label " + std::to_string(v) + " exceeds merge mapping size");
    }
    v = mapping[static_cast<std::size_t>(v - 1)];
  }
  return out;
}

LabelImage vote_and_merge(const VoteMatrix& v_plus, const VoteMatrix& v_minus,
                          const LabelImage& labels, MergeStats* stats) {
  MergeResult merged = merge_mapping(v_plus, v_minus);
  if (stats) *stats = merged.stats;
  return relabel(labels, merged.merged_label_list);
}

}  // namespace dmc
