#pragma once

#include <memory>
#include <tuple>
#include <vector>

#include "recon/graph.hpp"
#include "recon/network.hpp"

namespace recon::testkit {

struct EdgeSpec {
  NodeId from;
  NodeId to;
  RoadClass road_class = RoadClass::residential;
  bool oneway = false;
};

/// Small planar network from node positions (meters about a Seattle origin)
/// and straight edges.
inline std::shared_ptr<const RoadNetwork> planar_network(const std::vector<Vec2>& nodes,
                                                         const std::vector<EdgeSpec>& edges) {
  NetworkBuilder b{Projection({-122.35, 47.60})};
  for (const Vec2 p : nodes) b.add_node_xy(p);
  for (const auto& e : edges) b.add_edge(e.from, e.to, e.road_class, e.oneway);
  return std::make_shared<const RoadNetwork>(std::move(b).build());
}

/// Asset at a planar position.
inline Asset asset_at(const RoadNetwork& net, std::string id, Vec2 p,
                      Capital capital = Capital::social, std::string type = "library") {
  Asset a;
  a.asset_id = std::move(id);
  a.capital = capital;
  a.component_type = std::move(type);
  a.location = net.projection().inverse(p);
  a.source = "test";
  return a;
}

/// Speeds chosen so every residential meter costs 0.1 s.
inline SolverConfig tenth_second_config() {
  SolverConfig c;
  c.speed_mps = {25.0, 15.0, 13.0, 10.0, 5.0};
  return c;
}

}  // namespace recon::testkit
