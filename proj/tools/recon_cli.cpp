// recon: command-line front end. Every subcommand reads plain files and
// writes JSON (or export bytes) to stdout or --out.

#include <CLI11.hpp>
#include <fmt/core.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "recon/calendar.hpp"
#include "recon/canvass.hpp"
#include "recon/design.hpp"
#include "recon/errors.hpp"
#include "recon/income.hpp"
#include "recon/ingest.hpp"
#include "recon/json_io.hpp"
#include "recon/report.hpp"
#include "recon/route_edit.hpp"
#include "recon/service.hpp"
#include "recon/session.hpp"
#include "recon/transect.hpp"

namespace fs = std::filesystem;
using namespace recon;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

SolverConfig load_config(const Globals& g) {
  SolverConfig c;
  if (!g.config_path.empty()) c = config_from_json(parse_json(read_file(g.config_path)));
  if (g.seed) c.seed = *g.seed;
  c.validate();
  return c;
}

void emit(const std::string& out, const std::string& bytes) {
  if (out.empty() || out == "-") {
    std::cout << bytes;
    if (!bytes.empty() && bytes.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw SerializationError("cannot write " + out);
  f << bytes;
}

void emit(const std::string& out, const Json& j) { emit(out, j.dump(2) + "\n"); }

std::vector<Asset> read_assets(const std::string& path) {
  const bool csv = fs::path(path).extension() == ".csv";
  return load_assets(path, csv ? AssetFormat::csv : AssetFormat::geojson_points);
}

std::shared_ptr<const RoadNetwork> read_network(const std::string& path) {
  return std::make_shared<const RoadNetwork>(load_road_network(path));
}

/// "123" is a node id; "lon,lat" snaps to the nearest node.
NodeId resolve_node(const RoadNetwork& net, const std::string& text) {
  if (const auto comma = text.find(','); comma != std::string::npos) {
    const GeoPoint p{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    return net.nearest_node(net.projection().forward(p));
  }
  const unsigned long id = std::stoul(text);
  if (id >= net.node_count()) throw ValidationError(fmt::format("node {} does not exist", id));
  return static_cast<NodeId>(id);
}

/// Route files are either a bare route or anything carrying a "route" key.
Route read_route(const std::string& path, const RoutableGraph& graph, const TurnModel& turn) {
  const Json j = parse_json(read_file(path));
  return route_from_json(j.contains("route") ? j.at("route") : j, graph, turn);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(',', start);
    const auto piece = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::size_t parse_threshold(const std::string& s) {
  if (s == "INFINITE") return kInfiniteThreshold;
  return std::stoul(s);
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Route design for street-view reconnaissance campaigns", "recon"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--config", globals.config_path, "Solver configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", globals.seed, "Override the configuration seed");

  std::string network_path, assets_path, groups_path, out;
  auto network_opt = [&](CLI::App* sub) {
    return sub->add_option("--network", network_path, "Road network GeoJSON")->required()->check(CLI::ExistingFile);
  };
  auto assets_opt = [&](CLI::App* sub) {
    return sub->add_option("--assets", assets_path, "Assets (.csv or GeoJSON points)")->check(CLI::ExistingFile);
  };
  auto out_opt = [&](CLI::App* sub) { sub->add_option("-o,--out", out, "Output path (default stdout)"); };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate input datasets and summarise them");
  ingest->add_option("--network", network_path)->check(CLI::ExistingFile);
  assets_opt(ingest);
  ingest->add_option("--blockgroups", groups_path)->check(CLI::ExistingFile);
  out_opt(ingest);

  // jenks
  int k = 5;
  std::string labelled_out;
  auto* jenks = app.add_subcommand("jenks", "Natural-breaks classification of block-group incomes");
  jenks->add_option("--blockgroups", groups_path)->required()->check(CLI::ExistingFile);
  jenks->add_option("-k", k, "Number of classes")->capture_default_str();
  jenks->add_option("--labelled-out", labelled_out, "Write the labelled block groups here");
  out_opt(jenks);

  // areas
  double window_m = 600.0, stride_m = 0.0;
  std::size_t limit = 10;
  auto* areas = app.add_subcommand("areas", "Rank candidate canvass windows by income spread");
  network_opt(areas);
  areas->add_option("--blockgroups", groups_path, "Labelled block groups (or raw, with -k)")
      ->required()
      ->check(CLI::ExistingFile);
  std::optional<int> areas_k;
  areas->add_option("-k", areas_k, "Classify first with this many classes");
  areas->add_option("--window-m", window_m)->capture_default_str();
  areas->add_option("--stride-m", stride_m, "Defaults to half the window");
  areas->add_option("--limit", limit)->capture_default_str();
  out_opt(areas);

  // solve-transect
  std::string depot_text, classes_text;
  std::optional<double> budget_s;
  bool open_tour = false;
  auto* transect = app.add_subcommand("solve-transect", "Solve a budgeted transect; writes a session file");
  network_opt(transect);
  assets_opt(transect)->required();
  transect->add_option("--depot", depot_text, "Node id or lon,lat")->required();
  transect->add_option("--budget-s", budget_s, "Time budget in seconds");
  transect->add_option("--seed-classes", classes_text, "Comma-separated component types (default: heuristic)");
  transect->add_flag("--open", open_tour, "End at the last stop instead of the depot");
  out_opt(transect);

  // solve-canvass
  std::string polygon_path, entry_text, exit_text;
  auto* canvass = app.add_subcommand("solve-canvass", "Route through every intersection of a polygon");
  network_opt(canvass);
  canvass->add_option("--polygon", polygon_path, "JSON ring [[lon,lat],...]")->required()->check(CLI::ExistingFile);
  canvass->add_option("--entry", entry_text, "Entry sync node id or lon,lat")->required();
  canvass->add_option("--exit", exit_text, "Exit sync node id or lon,lat")->required();
  out_opt(canvass);

  // splice
  std::string route_path, canvass_path;
  auto* splice_cmd = app.add_subcommand("splice", "Splice a canvass route into a capitals route");
  network_opt(splice_cmd);
  splice_cmd->add_option("--route", route_path, "Capitals route or session file")->required()->check(CLI::ExistingFile);
  splice_cmd->add_option("--canvass", canvass_path, "Canvass route file")->required()->check(CLI::ExistingFile);
  splice_cmd->add_option("--entry", entry_text)->required();
  splice_cmd->add_option("--exit", exit_text)->required();
  out_opt(splice_cmd);

  // edit
  std::string session_path, edits_path;
  auto* edit = app.add_subcommand("edit", "Apply an edit batch (or canvass step) to a session file");
  network_opt(edit);
  assets_opt(edit)->required();
  edit->add_option("--session", session_path)->required()->check(CLI::ExistingFile);
  edit->add_option("--edits", edits_path, "JSON list of edit commands")->check(CLI::ExistingFile);
  edit->add_option("--canvass-step", canvass_path, "JSON {polygon, entry_sync, exit_sync}")
      ->check(CLI::ExistingFile);
  out_opt(edit);

  // prune
  std::string threshold_text = "INFINITE";
  auto* prune = app.add_subcommand("prune", "Remove out-and-back spurs");
  network_opt(prune);
  assets_opt(prune)->required();
  prune->add_option("--route", route_path)->required()->check(CLI::ExistingFile);
  prune->add_option("--min-assets", threshold_text, "Keep spurs covering at least this many assets, or INFINITE")
      ->capture_default_str();
  out_opt(prune);

  // report
  std::string start_clock = "08:00";
  double traffic = 1.0;
  auto* report = app.add_subcommand("report", "Coverage and timing report for a route");
  network_opt(report);
  assets_opt(report)->required();
  report->add_option("--route", route_path)->required()->check(CLI::ExistingFile);
  report->add_option("--start", start_clock, "Departure clock HH:MM[:SS]")->capture_default_str();
  report->add_option("--traffic-multiplier", traffic)->capture_default_str();
  out_opt(report);

  // export
  std::string format = "gpx";
  auto* export_cmd = app.add_subcommand("export", "Write a route as GPX or GeoJSON");
  network_opt(export_cmd);
  export_cmd->add_option("--route", route_path)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--format", format)->check(CLI::IsMember({"gpx", "geojson"}))->capture_default_str();
  out_opt(export_cmd);

  // schedule
  std::string policy_path, calendar_path, text_format = "json";
  int horizon_days = 365;
  std::vector<std::string> events;
  auto* schedule = app.add_subcommand("schedule", "Generate or extend a survey calendar");
  schedule->add_option("--policy", policy_path, "Campaign policy JSON")->check(CLI::ExistingFile);
  schedule->add_option("--calendar", calendar_path, "Existing calendar JSON to extend")->check(CLI::ExistingFile);
  schedule->add_option("--horizon-days", horizon_days)->capture_default_str();
  schedule->add_option("--event", events, "Event date YYYY-MM-DD[:note]; repeatable");
  schedule->add_option("--format", text_format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  out_opt(schedule);

  // serve
  std::string bind = env_or("RECON_BIND", "127.0.0.1");
  int port = std::atoi(env_or("RECON_PORT", "8080").c_str());
  std::string data_dir;
  double async_after = 2.0;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--bind", bind, "Address (env RECON_BIND)")->capture_default_str();
  serve->add_option("--port", port, "Port (env RECON_PORT)")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Persist datasets, sessions and calendars here");
  serve->add_option("--async-after-s", async_after)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const SolverConfig config = load_config(globals);

    if (*ingest) {
      Json j = Json::object();
      if (!network_path.empty()) {
        const auto net = load_road_network(network_path);
        j["network"] = {{"nodes", net.node_count()}, {"edges", net.edge_count()}};
      }
      if (!assets_path.empty()) {
        const auto assets = read_assets(assets_path);
        std::array<std::size_t, kCapitalCount> by{};
        for (const auto& a : assets) ++by[static_cast<std::size_t>(a.capital)];
        Json caps = Json::object();
        for (std::size_t c = 0; c < kCapitalCount; ++c) caps[std::string(to_string(static_cast<Capital>(c)))] = by[c];
        j["assets"] = {{"count", assets.size()}, {"by_capital", caps}};
      }
      if (!groups_path.empty()) {
        const auto groups = load_block_groups(groups_path);
        j["blockgroups"] = {{"count", groups.size()}, {"null_income", count_null_income(groups)}};
      }
      if (j.empty()) throw ValidationError("nothing to ingest: pass --network, --assets or --blockgroups");
      emit(out, j);
    } else if (*jenks) {
      auto groups = load_block_groups(groups_path);
      const auto r = classify_block_groups(groups, k);
      if (!labelled_out.empty()) emit(labelled_out, write_block_groups_geojson(groups));
      emit(out, to_json(r));
    } else if (*areas) {
      const auto net = read_network(network_path);
      auto groups = load_block_groups(groups_path);
      if (areas_k) classify_block_groups(groups, *areas_k);
      const double stride = stride_m > 0.0 ? stride_m : window_m / 2.0;
      auto ranked = rank_candidate_areas(groups, *net, window_m, stride, config.include_degree2_intersections);
      if (ranked.size() > limit) ranked.resize(limit);
      Json list = Json::array();
      for (const auto& a : ranked) list.push_back(to_json(a, net->projection()));
      emit(out, Json{{"areas", list}});
    } else if (*transect) {
      const auto net = read_network(network_path);
      SessionRequest req;
      req.network_id = network_path;
      req.assets_id = assets_path;
      req.depot = resolve_node(*net, depot_text);
      req.seed_classes = split_csv(classes_text);
      req.budget_s = budget_s.value_or(config.budget_s);
      req.closed_tour = open_tour ? false : config.closed_tour;
      req.config = config;
      const Session s("cli", req, net, read_assets(assets_path));
      Json j = s.snapshot();
      j["summary"] = s.summary();
      emit(out, j);
    } else if (*canvass) {
      const auto net = read_network(network_path);
      const auto g = build_graph(net, config);
      const Ring ring = net->projection().forward_ring(ring_from_json(parse_json(read_file(polygon_path))));
      const auto problem =
          make_canvass_problem(*net, ring, resolve_node(*net, entry_text), resolve_node(*net, exit_text),
                               config.include_degree2_intersections);
      emit(out, Json{{"route", to_json(solve_canvass(problem, g, config))},
                     {"intersections", problem.intersections}});
    } else if (*splice_cmd) {
      const auto net = read_network(network_path);
      const auto g = build_graph(net, config);
      const Route host = read_route(route_path, g, config.turn);
      const Route part = read_route(canvass_path, g, config.turn);
      const Route joined = splice(host, part, resolve_node(*net, entry_text), resolve_node(*net, exit_text), g,
                                  config.turn);
      emit(out, Json{{"route", to_json(joined)}});
    } else if (*edit) {
      const auto net = read_network(network_path);
      const Json snap = parse_json(read_file(session_path));
      std::vector<SessionOp> history;
      for (const auto& op : snap.at("history")) history.push_back(session_op_from_json(op));
      Session s = Session::replay(snap.value("session_id", "cli"), session_request_from_json(snap.at("request")),
                                  net, read_assets(assets_path), history);
      if (!canvass_path.empty()) s.add_canvass(canvass_step_from_json(parse_json(read_file(canvass_path))));
      if (!edits_path.empty()) s.apply_edits(edits_from_json(parse_json(read_file(edits_path))));
      Json j = s.snapshot();
      j["summary"] = s.summary();
      emit(out, j);
    } else if (*prune) {
      const auto net = read_network(network_path);
      const auto g = build_graph(net, config);
      const auto assets = read_assets(assets_path);
      const auto r = prune_spurs(read_route(route_path, g, config.turn), g, config.turn, assets, config.buffer_m,
                                 parse_threshold(threshold_text));
      emit(out, Json{{"route", to_json(r.route)}, {"prune", to_json(r.report)}});
    } else if (*report) {
      const auto net = read_network(network_path);
      const auto g = build_graph(net, config);
      const auto r = make_report(read_route(route_path, g, config.turn), g, read_assets(assets_path),
                                 config.buffer_m, parse_clock(start_clock), traffic);
      emit(out, to_json(r));
    } else if (*export_cmd) {
      const auto net = read_network(network_path);
      const auto g = build_graph(net, config);
      emit(out, export_route(read_route(route_path, g, config.turn), g, parse_export_format(format)));
    } else if (*schedule) {
      SurveyCalendar cal;
      if (!calendar_path.empty()) {
        cal = calendar_from_json(parse_json(read_file(calendar_path)));
      } else {
        const CampaignPolicy policy =
            policy_path.empty() ? CampaignPolicy{} : policy_from_json(parse_json(read_file(policy_path)));
        cal = generate_calendar(policy, horizon_days);
      }
      for (const auto& e : events) {
        const auto colon = e.find(':');
        cal = insert_event_survey(cal, parse_date(e.substr(0, colon)),
                                  colon == std::string::npos ? "" : e.substr(colon + 1));
      }
      if (text_format == "text") {
        emit(out, format_calendar_table(cal));
      } else {
        emit(out, to_json(cal));
      }
    } else if (*serve) {
      ServiceOptions o;
      o.bind = bind;
      o.port = port;
      o.data_dir = data_dir;
      o.async_after_s = async_after;
      Service service(o);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const int bound = service.bind();
      fmt::print(stderr, "listening on {}:{}\n", bind, bound);
      service.serve();
      g_service = nullptr;
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}: {}\n", e.code(), e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: ParseError: bad number ({})\n", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    fmt::print(stderr, "error: RangeError: {}\n", e.what());
    return 2;
  }
  return 0;
}
