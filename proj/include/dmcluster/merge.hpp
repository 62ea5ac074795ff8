#pragma once

#include "dmcluster/types.hpp"

#include <cstdint>
#include <vector>

namespace dmc {

struct MergeStats {
  std::int64_t vote_evals = 0;  ///< (target, query) vote comparisons
  std::int64_t row_folds = 0;   ///< accepted merges
  std::int64_t fold_cells = 0;  ///< matrix cells touched while folding

  std::int64_t operations() const { return vote_evals + fold_cells; }
};

struct MergeResult {
  /// Local label (0-based) -> final instance label (1-based).
  std::vector<std::int32_t> merged_label_list;
  int n_instances = 0;
  MergeStats stats;
};

/// Groups local labels by edge votes.
///
/// Local labels are consumed in ascending order. Each unconsumed label opens a
/// new instance and a breadth-first walk: a query label joins the target's
/// instance iff v_plus[target][query] > v_minus[target][query], after which
/// the target's vote rows are added into the query's rows. The caller's
/// matrices are not modified.
MergeResult merge_mapping(const VoteMatrix& v_plus, const VoteMatrix& v_minus);

/// merge_mapping followed by rewriting every non-zero pixel of `labels`.
LabelImage vote_and_merge(const VoteMatrix& v_plus, const VoteMatrix& v_minus,
                          const LabelImage& labels, MergeStats* stats = nullptr);

/// Rewrites non-zero labels through a merge mapping.
LabelImage relabel(const LabelImage& labels, const std::vector<std::int32_t>& mapping);

}  // namespace dmc
