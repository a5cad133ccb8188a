#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

#include "recon/network.hpp"

namespace recon {

/// 200 ft expressed exactly in meters.
inline constexpr double kDefaultBufferM = 60.96;
inline constexpr double kDefaultBudgetS = 8.0 * 3600.0;
inline constexpr double kDefaultUTurnPenaltyS = 120.0;

/// Spur threshold meaning "remove every spur".
inline constexpr std::size_t kInfiniteThreshold = std::numeric_limits<std::size_t>::max();

/// Cost of an immediate reversal onto an arc's twin. An empty penalty means
/// reversals are prohibited outright.
class TurnModel {
 public:
  TurnModel() = default;
  static TurnModel penalty(double seconds);
  static TurnModel prohibited() { return TurnModel(std::nullopt); }

  [[nodiscard]] bool is_prohibited() const { return !penalty_s_; }
  /// Only valid when not prohibited.
  [[nodiscard]] double penalty_s() const { return *penalty_s_; }

  friend bool operator==(const TurnModel&, const TurnModel&) = default;

 private:
  explicit TurnModel(std::optional<double> p) : penalty_s_(p) {}
  std::optional<double> penalty_s_ = kDefaultUTurnPenaltyS;
};

/// Every numeric knob the engine exposes.
struct SolverConfig {
  /// Meters per second by road class (indexed by RoadClass).
  std::array<std::optional<double>, kRoadClassCount> speed_mps = {25.0, 15.0, 13.0, 11.0, 5.0};
  double traffic_multiplier = 1.0;
  TurnModel turn;
  double buffer_m = kDefaultBufferM;
  double budget_s = kDefaultBudgetS;
  bool closed_tour = true;
  std::size_t move_limit = 100000;
  double seed_grid_cell_m = 500.0;
  double target_cells_fraction = 0.8;
  bool include_degree2_intersections = false;
  std::size_t min_assets_per_spur = kInfiniteThreshold;
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

}  // namespace recon
