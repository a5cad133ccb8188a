#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "recon/errors.hpp"
#include "recon/report.hpp"

using namespace recon;

namespace {

struct Line {
  std::shared_ptr<const RoadNetwork> net =
      testkit::planar_network({{0, 0}, {100, 0}, {200, 0}}, {{0, 1}, {1, 2}});
  SolverConfig config = testkit::tenth_second_config();
  RoutableGraph graph = build_graph(net, config);
  Route route = Route::make(graph, config.turn, 0, {graph.arc_for(0, true), graph.arc_for(1, true)},
                            {{0, 0, WaypointKind::DEPOT, "node:0"},
                             {1, 1, WaypointKind::CAPITAL, "a"},
                             {1, 1, WaypointKind::CAPITAL, "b & <c>"},
                             {2, 2, WaypointKind::CAPITAL, "d"}});
};

}  // namespace

TEST(Clock, ParsesAndFormats) {
  EXPECT_DOUBLE_EQ(parse_clock("08:00"), 8 * 3600.0);
  EXPECT_DOUBLE_EQ(parse_clock("07:05:09"), 7 * 3600.0 + 5 * 60 + 9);
  EXPECT_THROW(parse_clock("8h"), ParseError);
  EXPECT_THROW(parse_clock("08:61"), ParseError);
  EXPECT_THROW(parse_clock("08:00:00x"), ParseError);
  EXPECT_EQ(format_clock(25 * 3600 + 61), "25:01:01");
}

TEST(Report, ArrivalsGroupSharedPositionsAndScale) {
  const Line l;
  const std::vector<Asset> assets{testkit::asset_at(*l.net, "a", {100, 5}),
                                  testkit::asset_at(*l.net, "x", {150, 10})};
  const auto r = make_report(l.route, l.graph, assets, 30.0, parse_clock("08:00"), 2.0);
  EXPECT_NEAR(r.total_time_s, 40.0, 1e-6);
  ASSERT_EQ(r.arrivals.size(), 3u);
  EXPECT_EQ(r.arrivals[1].refs, (std::vector<std::string>{"a", "b & <c>"}));
  EXPECT_EQ(r.arrivals[1].clock, "08:00:20");
  EXPECT_EQ(r.arrivals[2].clock, "08:00:40");
  EXPECT_EQ(r.covered_count, 2u);
  EXPECT_EQ(r.by_capital[0].visited, 1u);
  EXPECT_EQ(r.by_capital[0].opportunistic, 1u);
  EXPECT_THROW(make_report(l.route, l.graph, assets, 30.0, 0, 0.0), ConfigError);
}

TEST(Export, GeoJsonHoldsNodeSequenceAndTotals) {
  const Line l;
  const std::string out = export_route(l.route, l.graph, ExportFormat::geojson);
  const auto j = nlohmann::json::parse(out);
  const auto& line = j["features"][0];
  EXPECT_EQ(line["geometry"]["coordinates"].size(), 3u);
  EXPECT_NE(out.find("\"total_time_s\":20.000"), std::string::npos);
  EXPECT_NE(out.find("\"total_length_m\":200.000"), std::string::npos);
  EXPECT_EQ(j["features"].size(), 5u);
  EXPECT_EQ(j["features"][3]["properties"]["ref"], "b & <c>");
}

TEST(Export, SingleNodeLineIsDuplicated) {
  const Line l;
  const Route r = Route::make(l.graph, l.config.turn, 1, {}, {});
  const auto j = nlohmann::json::parse(export_route(r, l.graph, ExportFormat::geojson));
  const auto& c = j["features"][0]["geometry"]["coordinates"];
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], c[1]);
}

TEST(Export, GpxEscapesNamesAndIsStable) {
  const Line l;
  const std::string a = export_route(l.route, l.graph, ExportFormat::gpx);
  EXPECT_EQ(a, export_route(l.route, l.graph, ExportFormat::gpx));
  EXPECT_NE(a.find("<name>CAPITAL b &amp; &lt;c&gt;</name>"), std::string::npos);
  EXPECT_NE(a.find("<gpx version=\"1.1\""), std::string::npos);
  std::size_t pts = 0;
  for (std::size_t p = a.find("<trkpt"); p != std::string::npos; p = a.find("<trkpt", p + 1)) ++pts;
  EXPECT_EQ(pts, 3u);
  EXPECT_THROW(parse_export_format("kml"), SerializationError);
  EXPECT_EQ(content_etag(a), content_etag(a));
  EXPECT_NE(content_etag(a), content_etag(a + " "));
}
