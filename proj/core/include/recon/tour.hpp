#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "recon/graph.hpp"

namespace recon {

/// Moves must beat this many seconds to count as improving.
inline constexpr double kMinImprovementS = 1e-9;

/// Cost of visiting `seq` in order. Infinite legs make the total infinite.
double sequence_cost(const TimeMatrix& m, std::span<const std::size_t> seq);

/// Greedy nearest-neighbour order: starts at `start`, visits every index in
/// `visit` (ties to the earliest listed), then appends `end`.
std::vector<std::size_t> nearest_neighbor_order(const TimeMatrix& m, std::size_t start,
                                                std::span<const std::size_t> visit,
                                                std::size_t end);

/// Inserts each index in turn at its cheapest position between the fixed
/// endpoints of `seq` (ties to the earliest position).
void cheapest_insertion(const TimeMatrix& m, std::vector<std::size_t>& seq,
                        std::span<const std::size_t> insert);

/// Best-improvement 2-opt and Or-opt (segments of 1 to 3, either direction)
/// with the first and last entries of `seq` held fixed. Works on asymmetric
/// matrices. Returns the number of moves applied.
std::size_t improve_order(const TimeMatrix& m, std::vector<std::size_t>& seq,
                          std::size_t move_limit);

}  // namespace recon
