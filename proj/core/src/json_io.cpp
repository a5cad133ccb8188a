#include "recon/json_io.hpp"

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

namespace {

template <class E = ParseError>
const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw E(fmt::format("missing field '{}'", key));
  return j.at(key);
}

template <class T, class E = ParseError>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw E(fmt::format("field '{}' has the wrong type", what));
  }
}

template <class T, class E = ParseError>
T get(const Json& j, const char* key) {
  return get_as<T, E>(field<E>(j, key), key);
}

Json threshold_to_json(std::size_t n) {
  return n == kInfiniteThreshold ? Json("INFINITE") : Json(n);
}

template <class E>
std::size_t threshold_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "INFINITE") return kInfiniteThreshold;
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  throw E("min_assets_per_spur must be a non-negative integer or \"INFINITE\"");
}

Json waypoint_json(const Waypoint& w) {
  return {{"position", w.position}, {"node", w.node}, {"kind", to_string(w.kind)}, {"ref", w.ref}};
}

Json target_json(const WaypointRef& t) {
  Json j = Json::object();
  if (t.asset_id) j["asset_id"] = *t.asset_id;
  if (t.node) j["node"] = *t.node;
  return j;
}

WaypointRef target_from(const Json& j) {
  WaypointRef t;
  if (j.contains("asset_id")) t.asset_id = get<std::string>(j, "asset_id");
  if (j.contains("node")) t.node = get<NodeId>(j, "node");
  if (t.asset_id.has_value() == t.node.has_value()) {
    throw ParseError("waypoint target needs exactly one of 'asset_id' or 'node'");
  }
  return t;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
}

SolverConfig config_from_json(const Json& j, SolverConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    if (key == "speeds_mps") {
      if (!v.is_object()) throw ConfigError("speeds_mps must be an object");
      for (const auto& [rc, s] : v.items()) {
        const auto cls = parse_road_class(rc);
        if (!cls) throw ConfigError(fmt::format("unknown road class '{}'", rc));
        c.speed_mps[static_cast<std::size_t>(*cls)] =
            s.is_null() ? std::nullopt : std::optional<double>(get_as<double, ConfigError>(s, k));
      }
    } else if (key == "traffic_multiplier") {
      c.traffic_multiplier = get_as<double, ConfigError>(v, k);
    } else if (key == "u_turn_penalty_s") {
      c.turn = (v.is_string() && v.get<std::string>() == "PROHIBITED")
                   ? TurnModel::prohibited()
                   : TurnModel::penalty(get_as<double, ConfigError>(v, k));
    } else if (key == "buffer_m") {
      c.buffer_m = get_as<double, ConfigError>(v, k);
    } else if (key == "budget_s") {
      c.budget_s = get_as<double, ConfigError>(v, k);
    } else if (key == "closed_tour") {
      c.closed_tour = get_as<bool, ConfigError>(v, k);
    } else if (key == "move_limit") {
      c.move_limit = get_as<std::size_t, ConfigError>(v, k);
    } else if (key == "seed_grid_cell_m") {
      c.seed_grid_cell_m = get_as<double, ConfigError>(v, k);
    } else if (key == "target_cells_fraction") {
      c.target_cells_fraction = get_as<double, ConfigError>(v, k);
    } else if (key == "include_degree2_intersections") {
      c.include_degree2_intersections = get_as<bool, ConfigError>(v, k);
    } else if (key == "min_assets_per_spur") {
      c.min_assets_per_spur = threshold_from_json<ConfigError>(v);
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t, ConfigError>(v, k);
    } else {
      throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
  }
  c.validate();
  return c;
}

Json config_to_json(const SolverConfig& c) {
  Json speeds = Json::object();
  for (std::size_t i = 0; i < c.speed_mps.size(); ++i) {
    const auto name = std::string(to_string(static_cast<RoadClass>(i)));
    speeds[name] = c.speed_mps[i] ? Json(*c.speed_mps[i]) : Json(nullptr);
  }
  return {{"speeds_mps", speeds},
          {"traffic_multiplier", c.traffic_multiplier},
          {"u_turn_penalty_s", c.turn.is_prohibited() ? Json("PROHIBITED") : Json(c.turn.penalty_s())},
          {"buffer_m", c.buffer_m},
          {"budget_s", c.budget_s},
          {"closed_tour", c.closed_tour},
          {"move_limit", c.move_limit},
          {"seed_grid_cell_m", c.seed_grid_cell_m},
          {"target_cells_fraction", c.target_cells_fraction},
          {"include_degree2_intersections", c.include_degree2_intersections},
          {"min_assets_per_spur", threshold_to_json(c.min_assets_per_spur)},
          {"seed", c.seed}};
}

Json to_json(const Route& route) {
  Json wps = Json::array();
  for (const auto& w : route.waypoints()) wps.push_back(waypoint_json(w));
  Json mans = Json::array();
  for (const auto& m : route.maneuvers()) {
    mans.push_back({{"position", m.position}, {"kind", "THREE_POINT_TURN"}});
  }
  return {{"start", route.start()},
          {"end", route.end()},
          {"arcs", route.arcs()},
          {"nodes", route.nodes()},
          {"waypoints", wps},
          {"maneuvers", mans},
          {"total_time_s", route.total_time_s()},
          {"total_length_m", route.total_length_m()}};
}

Route route_from_json(const Json& j, const RoutableGraph& graph, const TurnModel& turn) {
  std::vector<Waypoint> wps;
  for (const auto& w : field(j, "waypoints")) {
    const auto kind = parse_waypoint_kind(get<std::string>(w, "kind"));
    if (!kind) throw ParseError("unknown waypoint kind");
    wps.push_back({get<std::size_t>(w, "position"), get<NodeId>(w, "node"), *kind,
                   get<std::string>(w, "ref")});
  }
  return Route::make(graph, turn, get<NodeId>(j, "start"), get<std::vector<ArcId>>(j, "arcs"),
                     std::move(wps));
}

Json to_json(const TransectSolution& s) {
  Json dropped = Json::array();
  for (const auto& d : s.dropped) {
    dropped.push_back({{"ref", d.ref}, {"node", d.node}, {"reason", to_string(d.reason)}});
  }
  return {{"visited", s.visited},
          {"dropped", dropped},
          {"opportunistic", s.opportunistic},
          {"route", to_json(s.route)}};
}

Json to_json(const PruneReport& r) {
  Json spurs = Json::array();
  for (const auto& s : r.spurs) {
    spurs.push_back({{"position", s.position},
                     {"base", s.base},
                     {"apex", s.apex},
                     {"arc_count", s.arc_count},
                     {"time_saved_s", s.time_saved_s},
                     {"lost_assets", s.lost_assets}});
  }
  Json dropped = Json::array();
  for (const auto& w : r.dropped_waypoints) dropped.push_back(waypoint_json(w));
  return {{"spurs", spurs},
          {"dropped_waypoints", dropped},
          {"lost_assets", r.lost_assets},
          {"time_saved_s", r.time_saved_s}};
}

Json to_json(const CoverageReport& r) {
  Json by = Json::object();
  for (std::size_t i = 0; i < kCapitalCount; ++i) {
    by[std::string(to_string(static_cast<Capital>(i)))] = {
        {"visited", r.by_capital[i].visited}, {"opportunistic", r.by_capital[i].opportunistic}};
  }
  Json arrivals = Json::array();
  for (const auto& a : r.arrivals) {
    arrivals.push_back({{"position", a.position},
                        {"node", a.node},
                        {"refs", a.refs},
                        {"offset_s", a.offset_s},
                        {"clock", a.clock}});
  }
  return {{"total_time_s", r.total_time_s},
          {"total_length_m", r.total_length_m},
          {"traffic_multiplier", r.traffic_multiplier},
          {"by_capital", by},
          {"covered_count", r.covered_count},
          {"three_point_turn_count", r.three_point_turn_count},
          {"excluded_asset_count", r.excluded_asset_count},
          {"arrivals", arrivals}};
}

Json to_json(const JenksResult& r) {
  return {{"k", r.k},     {"breaks", r.breaks},       {"classes", r.classes},
          {"ssd", r.ssd}, {"total_ssd", r.total_ssd}, {"gvf", r.gvf}};
}

Json to_json(const CanvasArea& a) {
  return {{"rect", {a.rect.min_x, a.rect.min_y, a.rect.max_x, a.rect.max_y}},
          {"spread_score", a.spread_score},
          {"intersection_count", a.intersection_count},
          {"classes_present", a.classes_present},
          {"road_class_count", a.road_class_count},
          {"unclassified_area_m2", a.unclassified_area_m2}};
}

Json to_json(const CanvasArea& a, const Projection& projection) {
  Json j = to_json(a);
  const GeoPoint lo = projection.inverse({a.rect.min_x, a.rect.min_y});
  const GeoPoint hi = projection.inverse({a.rect.max_x, a.rect.max_y});
  j["polygon"] = {{lo.lon, lo.lat}, {hi.lon, lo.lat}, {hi.lon, hi.lat}, {lo.lon, hi.lat}, {lo.lon, lo.lat}};
  return j;
}

GeoRing ring_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("polygon must be an array of [lon, lat] pairs");
  GeoRing ring;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError("polygon vertex must be [lon, lat]");
    }
    ring.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  if (ring.size() < 3) throw ParseError("polygon needs at least 3 distinct vertices");
  return ring;
}

Json to_json(const GeoRing& ring) {
  Json j = Json::array();
  for (const auto& p : ring) j.push_back({p.lon, p.lat});
  return j;
}

EditCommand edit_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "LOCK_WAYPOINT") return LockWaypoint{target_from(j)};
  if (kind == "EXCLUDE_ASSET") return ExcludeAsset{get<std::string>(j, "asset_id")};
  if (kind == "ADD_WAYPOINT") return AddWaypoint{target_from(j)};
  if (kind == "AVOID_AREA") return AvoidArea{ring_from_json(field(j, "polygon"))};
  if (kind == "PRUNE_SPURS") {
    return PruneSpurs{j.contains("min_assets_per_spur")
                          ? threshold_from_json<ParseError>(j.at("min_assets_per_spur"))
                          : kInfiniteThreshold};
  }
  if (kind == "SET_BUDGET") return SetBudget{get<double>(j, "seconds")};
  throw ParseError(fmt::format("unknown edit kind '{}'", kind));
}

Json to_json(const EditCommand& c) {
  Json j = std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LockWaypoint> || std::is_same_v<T, AddWaypoint>) {
          return target_json(v.target);
        } else if constexpr (std::is_same_v<T, ExcludeAsset>) {
          return {{"asset_id", v.asset_id}};
        } else if constexpr (std::is_same_v<T, AvoidArea>) {
          return {{"polygon", to_json(v.polygon)}};
        } else if constexpr (std::is_same_v<T, PruneSpurs>) {
          return {{"min_assets_per_spur", threshold_to_json(v.min_assets_per_spur)}};
        } else {
          return {{"seconds", v.seconds}};
        }
      },
      c);
  j["kind"] = command_kind(c);
  return j;
}

std::vector<EditCommand> edits_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("edit list must be a JSON array");
  std::vector<EditCommand> out;
  for (const auto& c : j) out.push_back(edit_from_json(c));
  return out;
}

CanvassStep canvass_step_from_json(const Json& j) {
  return {ring_from_json(field(j, "polygon")), get<NodeId>(j, "entry_sync"),
          get<NodeId>(j, "exit_sync")};
}

Json to_json(const CanvassStep& s) {
  return {{"polygon", to_json(s.polygon)}, {"entry_sync", s.entry_sync}, {"exit_sync", s.exit_sync}};
}

Json to_json(const DesignSpec& s) {
  Json avoid = Json::array();
  for (const auto& r : s.avoid_areas) avoid.push_back(to_json(r));
  Json canvass = Json::array();
  for (const auto& c : s.canvass) canvass.push_back(to_json(c));
  return {{"depot", s.depot},
          {"seed_classes", s.seed_classes},
          {"budget_s", s.budget_s},
          {"closed_tour", s.closed_tour},
          {"locked", s.locked},
          {"excluded", s.excluded},
          {"added", s.added},
          {"avoid_areas", avoid},
          {"canvass", canvass},
          {"prune_threshold", s.prune_threshold ? threshold_to_json(*s.prune_threshold) : Json(nullptr)},
          {"pool", s.pool ? Json(*s.pool) : Json(nullptr)},
          {"warm_order", s.warm_order}};
}

DesignSpec design_spec_from_json(const Json& j) {
  DesignSpec s;
  s.depot = get<NodeId>(j, "depot");
  s.seed_classes = get<std::vector<std::string>>(j, "seed_classes");
  s.budget_s = get<double>(j, "budget_s");
  s.closed_tour = get<bool>(j, "closed_tour");
  s.locked = get<std::set<std::string>>(j, "locked");
  s.excluded = get<std::set<std::string>>(j, "excluded");
  s.added = get<std::vector<std::string>>(j, "added");
  for (const auto& r : field(j, "avoid_areas")) s.avoid_areas.push_back(ring_from_json(r));
  for (const auto& c : field(j, "canvass")) s.canvass.push_back(canvass_step_from_json(c));
  if (!field(j, "prune_threshold").is_null()) {
    s.prune_threshold = threshold_from_json<ParseError>(j.at("prune_threshold"));
  }
  if (!field(j, "pool").is_null()) s.pool = get<std::vector<std::string>>(j, "pool");
  s.warm_order = get<std::vector<std::string>>(j, "warm_order");
  return s;
}

CampaignPolicy policy_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("policy must be a JSON object");
  CampaignPolicy p;
  p.start_date = parse_date(get<std::string>(j, "start_date"));
  if (j.contains("phase1_interval_days")) p.phase1_interval_days = get<int>(j, "phase1_interval_days");
  if (j.contains("phase1_months")) p.phase1_months = get<int>(j, "phase1_months");
  if (j.contains("phase2_interval_days")) p.phase2_interval_days = get<int>(j, "phase2_interval_days");
  if (j.contains("event_lag_days")) p.event_lag_days = get<int>(j, "event_lag_days");
  if (j.contains("preferred_weekday")) {
    const auto name = get<std::string>(j, "preferred_weekday");
    const auto w = parse_weekday(name);
    if (!w) throw ParseError(fmt::format("unknown weekday '{}'", name));
    p.preferred_weekday = *w;
  }
  p.validate();
  return p;
}

Json to_json(const CampaignPolicy& p) {
  return {{"start_date", format_date(p.start_date)},
          {"phase1_interval_days", p.phase1_interval_days},
          {"phase1_months", p.phase1_months},
          {"phase2_interval_days", p.phase2_interval_days},
          {"preferred_weekday", weekday_name(p.preferred_weekday)},
          {"event_lag_days", p.event_lag_days}};
}

Json to_json(const SurveyCalendar& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) {
    entries.push_back({{"date", format_date(e.date)}, {"kind", to_string(e.kind)}, {"note", e.note}});
  }
  return {{"policy", to_json(c.policy)},
          {"horizon_days", c.horizon_days},
          {"horizon_end", format_date(c.horizon_end())},
          {"entries", entries}};
}

SurveyCalendar calendar_from_json(const Json& j) {
  SurveyCalendar c;
  c.policy = policy_from_json(field(j, "policy"));
  c.horizon_days = get<int>(j, "horizon_days");
  for (const auto& e : field(j, "entries")) {
    const auto kind = get<std::string>(e, "kind");
    EntryKind k = EntryKind::SCHEDULED;
    if (kind == "EVENT") {
      k = EntryKind::EVENT;
    } else if (kind == "RESCHEDULED") {
      k = EntryKind::RESCHEDULED;
    } else if (kind != "SCHEDULED") {
      throw ParseError(fmt::format("unknown entry kind '{}'", kind));
    }
    c.entries.push_back({parse_date(get<std::string>(e, "date")), k, get<std::string>(e, "note")});
  }
  return c;
}

}  // namespace recon
