// Engine hot paths on the 20x20 grid city.

#include <benchmark/benchmark.h>

#include <random>

#include "grid_city.hpp"
#include "recon/canvass.hpp"
#include "recon/design.hpp"
#include "recon/income.hpp"
#include "recon/route_edit.hpp"
#include "recon/transect.hpp"

using namespace recon;

namespace {

const testkit::GridCity& city() {
  static const testkit::GridCity c = testkit::make_grid_city({.spur_count = 3});
  return c;
}

const RoutableGraph& graph() {
  static const RoutableGraph g = build_graph(city().network, SolverConfig{});
  return g;
}

void BM_Jenks(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = 20000.0 + static_cast<double>(rng() % 100000);
  for (auto _ : state) benchmark::DoNotOptimize(jenks_breaks(v, 5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Jenks)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ShortestPathTree(benchmark::State& state) {
  const TurnModel turn;
  NodeId src = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ShortestPathTree(graph(), turn, src));
    src = (src + 37) % static_cast<NodeId>(graph().node_count());
  }
}
BENCHMARK(BM_ShortestPathTree);

void BM_Transect(benchmark::State& state) {
  const auto& net = *city().network;
  const std::vector<std::string> types{"library", "pharmacy", "park", "bank"};
  const auto problem = make_transect_problem(net, city().assets, types, testkit::grid_node(net, 10, 10),
                                             static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_transect(problem, graph(), {}, city().assets));
  state.counters["candidates"] = static_cast<double>(problem.candidates.size());
}
BENCHMARK(BM_Transect)->Arg(1800)->Arg(3600)->Arg(28800)->Unit(benchmark::kMillisecond);

void BM_Canvass(benchmark::State& state) {
  const auto& net = *city().network;
  const double w = static_cast<double>(state.range(0));
  const Ring area{net.projection().forward(testkit::grid_point(2.5, 2.5)),
                  net.projection().forward(testkit::grid_point(2.5 + w, 2.5)),
                  net.projection().forward(testkit::grid_point(2.5 + w, 2.5 + w)),
                  net.projection().forward(testkit::grid_point(2.5, 2.5 + w))};
  const auto problem = make_canvass_problem(net, area, testkit::grid_node(net, 2, 2),
                                            testkit::grid_node(net, 3 + state.range(0), 3 + state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_canvass(problem, graph(), {}));
  state.counters["intersections"] = static_cast<double>(problem.intersections.size());
}
BENCHMARK(BM_Canvass)->Arg(3)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PruneSpurs(benchmark::State& state) {
  const auto& net = *city().network;
  const TurnModel turn;
  std::vector<NodeId> stops{testkit::grid_node(net, 0, 0)};
  for (int k = 0; k < 3; ++k) stops.push_back(testkit::spur_tip(net, k));
  stops.push_back(testkit::grid_node(net, 20, 20));
  const Route r = Route::make(graph(), turn, stops[0], expand_stops(graph(), turn, stops), {});
  for (auto _ : state) benchmark::DoNotOptimize(prune_spurs(r, graph(), turn, city().assets, kDefaultBufferM));
}
BENCHMARK(BM_PruneSpurs);

void BM_DesignWithCanvass(benchmark::State& state) {
  const auto& net = *city().network;
  const DesignContext ctx{city().network, city().assets, SolverConfig{}};
  DesignSpec spec;
  spec.depot = testkit::grid_node(net, 10, 10);
  spec.seed_classes = {"library", "pharmacy"};
  spec.budget_s = 3600;
  spec.canvass.push_back({{testkit::grid_point(11.5, 11.5), testkit::grid_point(14.5, 11.5),
                           testkit::grid_point(14.5, 14.5), testkit::grid_point(11.5, 14.5)},
                          testkit::grid_node(net, 11, 11),
                          testkit::grid_node(net, 15, 15)});
  spec.prune_threshold = kInfiniteThreshold;
  for (auto _ : state) benchmark::DoNotOptimize(solve_design(ctx, spec));
}
BENCHMARK(BM_DesignWithCanvass)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
