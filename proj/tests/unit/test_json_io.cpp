#include <gtest/gtest.h>

#include "grid_city.hpp"
#include "recon/errors.hpp"
#include "recon/json_io.hpp"
#include "recon/route.hpp"

using namespace recon;

TEST(ConfigJson, DefaultsRoundTrip) {
  const SolverConfig c;
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
}

TEST(ConfigJson, SpecialValues) {
  const auto c = config_from_json(Json::parse(
      R"({"u_turn_penalty_s":"PROHIBITED","min_assets_per_spur":"INFINITE",
          "speeds_mps":{"service":null,"primary":20},"closed_tour":false})"));
  EXPECT_TRUE(c.turn.is_prohibited());
  EXPECT_EQ(c.min_assets_per_spur, kInfiniteThreshold);
  EXPECT_FALSE(c.speed_mps[4]);
  EXPECT_DOUBLE_EQ(*c.speed_mps[1], 20.0);
  EXPECT_FALSE(c.closed_tour);
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
}

TEST(ConfigJson, RejectsUnknownAndOutOfRange) {
  EXPECT_THROW(config_from_json(Json::parse(R"({"bufer_m":10})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"buffer_m":-1})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"buffer_m":"wide"})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"traffic_multiplier":0.01})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"speeds_mps":{"alley":3}})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"u_turn_penalty_s":-5})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"min_assets_per_spur":-1})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse("[]")), ConfigError);
}

TEST(RouteJson, RoundTripRevalidates) {
  const auto city = testkit::make_grid_city();
  const auto g = build_graph(city.network, {});
  const TurnModel turn;
  const std::vector<NodeId> stops{0, 77, 200};
  std::vector<std::size_t> pos;
  const auto arcs = expand_stops(g, turn, stops, kNoArc, kNoArc, &pos);
  const Route r = Route::make(g, turn, 0, arcs,
                              {{pos[1], 77, WaypointKind::CAPITAL, "x"},
                               {pos[2], 200, WaypointKind::LOCKED, "y"}});
  const Json j = to_json(r);
  EXPECT_EQ(route_from_json(j, g, turn), r);
  Json broken = j;
  broken["arcs"].erase(broken["arcs"].begin() + 1);
  EXPECT_THROW(route_from_json(broken, g, turn), ValidationError);
}

TEST(EditJson, EveryKindRoundTrips) {
  const std::vector<EditCommand> cmds{
      LockWaypoint{{"a-001", std::nullopt}},
      LockWaypoint{{std::nullopt, 12}},
      ExcludeAsset{"a-002"},
      AddWaypoint{{"a-003", std::nullopt}},
      AvoidArea{{{-122.3, 47.6}, {-122.2, 47.6}, {-122.2, 47.7}}},
      PruneSpurs{3},
      PruneSpurs{},
      SetBudget{5400}};
  Json arr = Json::array();
  for (const auto& c : cmds) arr.push_back(to_json(c));
  EXPECT_EQ(arr[0]["kind"], "LOCK_WAYPOINT");
  EXPECT_EQ(arr[6]["min_assets_per_spur"], "INFINITE");
  EXPECT_EQ(edits_from_json(arr), cmds);
}

TEST(EditJson, RejectsMalformedCommands) {
  EXPECT_THROW(edit_from_json(Json::parse(R"({"kind":"TELEPORT"})")), ParseError);
  EXPECT_THROW(edit_from_json(Json::parse(R"({"kind":"LOCK_WAYPOINT"})")), ParseError);
  EXPECT_THROW(edit_from_json(Json::parse(R"({"kind":"LOCK_WAYPOINT","asset_id":"a","node":3})")),
               ParseError);
  EXPECT_THROW(edit_from_json(Json::parse(R"({"kind":"SET_BUDGET","seconds":"lots"})")), ParseError);
  EXPECT_THROW(edit_from_json(Json::parse(R"({"kind":"AVOID_AREA","polygon":[[0,0],[1,1],[0,0]]})")),
               ParseError);
  EXPECT_THROW(edits_from_json(Json::object()), ParseError);
  EXPECT_THROW(parse_json("{\"a\":"), ParseError);
}

TEST(RingJson, ClosingVertexIsOptional) {
  const auto open = ring_from_json(Json::parse("[[0,0],[1,0],[1,1]]"));
  const auto closed = ring_from_json(Json::parse("[[0,0],[1,0],[1,1],[0,0]]"));
  EXPECT_EQ(open, closed);
}
