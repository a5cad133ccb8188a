#include "recon/income.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "recon/canvass.hpp"
#include "recon/errors.hpp"

namespace recon {

namespace {

double two_pass_ssd(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (const double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ssd = 0.0;
  for (const double x : v) ssd += (x - mean) * (x - mean);
  return ssd;
}

struct ProjectedGroup {
  std::vector<Ring> rings;
  int label;
  Rect bbox;
};

std::vector<ProjectedGroup> project_groups(std::span<const BlockGroup> groups,
                                           const Projection& projection) {
  std::vector<ProjectedGroup> out;
  for (const auto& g : groups) {
    if (!g.cluster_label) continue;
    ProjectedGroup pg;
    pg.label = *g.cluster_label;
    pg.bbox = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& ring : g.polygon) {
      pg.rings.push_back(projection.forward_ring(ring));
      for (const Vec2 p : pg.rings.back()) {
        pg.bbox.min_x = std::min(pg.bbox.min_x, p.x);
        pg.bbox.min_y = std::min(pg.bbox.min_y, p.y);
        pg.bbox.max_x = std::max(pg.bbox.max_x, p.x);
        pg.bbox.max_y = std::max(pg.bbox.max_y, p.y);
      }
    }
    out.push_back(std::move(pg));
  }
  return out;
}

bool overlaps(const Rect& a, const Rect& b) {
  return a.min_x < b.max_x && b.min_x < a.max_x && a.min_y < b.max_y && b.min_y < a.max_y;
}

/// Per-class intersection area; empty map when nothing intersects.
std::map<int, double> class_areas(const Rect& rect, const std::vector<ProjectedGroup>& groups) {
  std::map<int, double> areas;
  for (const auto& g : groups) {
    if (!overlaps(rect, g.bbox)) continue;
    const double a = intersection_area(g.rings, rect);
    if (a > 0.0) areas[g.label] += a;
  }
  return areas;
}

double entropy(const std::map<int, double>& areas) {
  double total = 0.0;
  for (const auto& [label, a] : areas) total += a;
  double h = 0.0;
  for (const auto& [label, a] : areas) {
    const double p = a / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}

}  // namespace

JenksResult jenks_breaks(std::span<const double> values, int k) {
  if (values.empty()) throw DomainError("no values to classify");
  for (const double v : values) {
    if (!std::isfinite(v)) throw DomainError("values must be finite");
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  std::size_t distinct_count = 1;
  for (std::size_t i = 1; i < n; ++i) distinct_count += (v[i] != v[i - 1]) ? 1 : 0;
  if (k < 1 || static_cast<std::size_t>(k) > distinct_count) {
    throw DomainError(fmt::format("k = {} must lie in [1, {}] (distinct values)", k, distinct_count));
  }

  const double total_ssd = two_pass_ssd(v);
  const double eps = 1e-12 * std::max(1.0, total_ssd);
  const double inf = std::numeric_limits<double>::infinity();
  const auto cut_allowed = [&](std::size_t j) { return j == n || (j > 0 && v[j - 1] < v[j]); };

  // cost[c][i]: best SSD for v[i..n) split into c+1 classes; next[c][i]: end
  // of the first class in that optimum.
  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::vector<double>> cost(kk, std::vector<double>(n + 1, inf));
  std::vector<std::vector<std::size_t>> next(kk, std::vector<std::size_t>(n + 1, n));

  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || cut_allowed(i)) {
      double mean = 0.0;
      double m2 = 0.0;
      for (std::size_t j = i; j < n; ++j) {
        const double d = v[j] - mean;
        mean += d / static_cast<double>(j - i + 1);
        m2 += d * (v[j] - mean);
      }
      cost[0][i] = m2;
    }
  }
  for (std::size_t c = 1; c < kk; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(i == 0 || cut_allowed(i))) continue;
      double mean = 0.0;
      double m2 = 0.0;
      double best = inf;
      std::size_t best_j = n;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = v[j - 1] - mean;
        mean += d / static_cast<double>(j - i);
        m2 += d * (v[j - 1] - mean);
        if (!cut_allowed(j) || cost[c - 1][j] == inf) continue;
        const double total = m2 + cost[c - 1][j];
        if (total < best - eps) {
          best = total;
          best_j = j;
        }
      }
      cost[c][i] = best;
      next[c][i] = best_j;
    }
  }

  JenksResult r;
  r.k = k;
  r.total_ssd = total_ssd;
  std::size_t start = 0;
  for (std::size_t c = kk - 1; c >= 1; --c) {
    const std::size_t end = next[c][start];
    r.breaks.push_back(v[end - 1]);
    r.ssd += two_pass_ssd(std::span<const double>(v).subspan(start, end - start));
    start = end;
  }
  r.ssd += two_pass_ssd(std::span<const double>(v).subspan(start));
  r.gvf = total_ssd > 0.0 ? 1.0 - r.ssd / total_ssd : 1.0;

  r.classes.reserve(values.size());
  for (const double x : values) {
    r.classes.push_back(static_cast<int>(
        std::lower_bound(r.breaks.begin(), r.breaks.end(), x) - r.breaks.begin()));
  }
  return r;
}

JenksResult classify_block_groups(std::vector<BlockGroup>& groups, int k) {
  std::vector<double> incomes;
  for (const auto& g : groups) {
    if (g.median_income) incomes.push_back(*g.median_income);
  }
  JenksResult r = jenks_breaks(incomes, k);
  std::size_t i = 0;
  for (auto& g : groups) {
    g.cluster_label.reset();
    if (g.median_income) g.cluster_label = r.classes[i++];
  }
  return r;
}

double score_canvas_area(const Rect& rect, std::span<const BlockGroup> groups,
                         const Projection& projection) {
  const auto areas = class_areas(rect, project_groups(groups, projection));
  if (areas.empty()) throw EmptyAreaError("rectangle intersects no classified block group");
  return entropy(areas);
}

std::vector<CanvasArea> rank_candidate_areas(std::span<const BlockGroup> groups,
                                             const RoadNetwork& network, double window_m,
                                             double stride_m, bool include_degree2) {
  if (!(window_m > 0.0) || !(stride_m > 0.0)) {
    throw DomainError("window_m and stride_m must be positive");
  }
  const auto projected = project_groups(groups, network.projection());
  const Rect box = network.bounds();
  const auto steps = [stride_m](double extent) {
    return std::max<long long>(1, static_cast<long long>(std::ceil(extent / stride_m)));
  };
  const long long nx = steps(box.width());
  const long long ny = steps(box.height());

  std::vector<NodeId> junctions;
  for (const auto& n : network.nodes()) {
    if (is_intersection(network, n.id, include_degree2)) junctions.push_back(n.id);
  }

  std::vector<CanvasArea> out;
  for (long long ix = 0; ix < nx; ++ix) {
    for (long long iy = 0; iy < ny; ++iy) {
      CanvasArea area;
      area.rect.min_x = box.min_x + static_cast<double>(ix) * stride_m;
      area.rect.min_y = box.min_y + static_cast<double>(iy) * stride_m;
      area.rect.max_x = area.rect.min_x + window_m;
      area.rect.max_y = area.rect.min_y + window_m;
      const auto areas = class_areas(area.rect, projected);
      if (areas.empty()) continue;
      area.spread_score = entropy(areas);
      double covered = 0.0;
      for (const auto& [label, a] : areas) {
        area.classes_present.push_back(label);
        covered += a;
      }
      area.unclassified_area_m2 = std::max(0.0, area.rect.area() - covered);
      const Ring ring = area.rect.ring();
      for (const NodeId id : junctions) {
        if (strictly_inside(network.node(id).xy, ring)) ++area.intersection_count;
      }
      std::set<RoadClass> road_classes;
      for (const auto& e : network.edges()) {
        if (road_classes.contains(e.road_class)) continue;
        if (polyline_touches_polygon(e.shape, ring)) road_classes.insert(e.road_class);
      }
      area.road_class_count = road_classes.size();
      out.push_back(std::move(area));
    }
  }
  std::sort(out.begin(), out.end(), [](const CanvasArea& a, const CanvasArea& b) {
    if (a.spread_score != b.spread_score) return a.spread_score > b.spread_score;
    if (a.intersection_count != b.intersection_count) {
      return a.intersection_count > b.intersection_count;
    }
    if (a.rect.min_x != b.rect.min_x) return a.rect.min_x < b.rect.min_x;
    return a.rect.min_y < b.rect.min_y;
  });
  return out;
}

}  // namespace recon
