#pragma once

#include <span>
#include <vector>

#include "recon/network.hpp"

namespace recon {

/// Optimal contiguous k-class partition of 1-D data.
struct JenksResult {
  int k = 0;
  /// Upper bound (largest member) of each class except the last.
  std::vector<double> breaks;
  /// Class index for each input value, in input order.
  std::vector<int> classes;
  /// Within-class sum of squared deviations.
  double ssd = 0.0;
  /// Sum of squared deviations from the overall mean.
  double total_ssd = 0.0;
  /// Goodness of variance fit, 1 - ssd / total_ssd.
  double gvf = 1.0;
};

/// Exact minimum-SSD partition by dynamic programming over the sorted values.
/// Classes never split equal values. Among equal-SSD partitions the
/// lexicographically smallest break sequence wins. Throws DomainError when
/// k < 1 or k exceeds the number of distinct values.
JenksResult jenks_breaks(std::span<const double> values, int k);

/// Classifies every block group with an income and writes `cluster_label`.
/// Groups without income keep an empty label.
JenksResult classify_block_groups(std::vector<BlockGroup>& groups, int k);

struct CanvasArea {
  Rect rect;
  /// Shannon entropy (natural log) of area-weighted income-class shares.
  double spread_score = 0.0;
  std::size_t intersection_count = 0;
  std::vector<int> classes_present;
  /// Distinct road classes among edges touching the window. Reported only.
  std::size_t road_class_count = 0;
  /// Rectangle area not covered by any classified block group.
  double unclassified_area_m2 = 0.0;
};

/// Spread score for one rectangle. Throws EmptyAreaError when no classified
/// block group intersects it.
double score_canvas_area(const Rect& rect, std::span<const BlockGroup> groups,
                         const Projection& projection);

/// Sliding windows over the network bounding box, sorted by spread desc,
/// intersection count desc, then origin x, origin y.
std::vector<CanvasArea> rank_candidate_areas(std::span<const BlockGroup> groups,
                                             const RoadNetwork& network, double window_m,
                                             double stride_m, bool include_degree2 = false);

}  // namespace recon
