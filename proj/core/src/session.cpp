#include "recon/session.hpp"

#include "recon/errors.hpp"

namespace recon {

Json to_json(const SessionRequest& r) {
  return {{"network", r.network_id},
          {"assets", r.assets_id},
          {"depot", r.depot},
          {"seed_classes", r.seed_classes},
          {"budget_s", r.budget_s},
          {"closed_tour", r.closed_tour},
          {"config", config_to_json(r.config)},
          {"start_clock", r.start_clock},
          {"report_traffic_multiplier", r.report_traffic_multiplier}};
}

SessionRequest session_request_from_json(const Json& j) {
  SessionRequest r;
  try {
    r.network_id = j.value("network", "");
    r.assets_id = j.value("assets", "");
    r.depot = j.at("depot").get<NodeId>();
    r.seed_classes = j.value("seed_classes", std::vector<std::string>{});
    if (j.contains("config")) r.config = config_from_json(j.at("config"));
    r.budget_s = j.value("budget_s", r.config.budget_s);
    r.closed_tour = j.value("closed_tour", r.config.closed_tour);
    r.start_clock = j.value("start_clock", r.start_clock);
    r.report_traffic_multiplier = j.value("report_traffic_multiplier", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad session request: ") + e.what());
  }
  parse_clock(r.start_clock);
  return r;
}

Json to_json(const SessionOp& op) {
  if (const auto* c = std::get_if<CanvassStep>(&op)) {
    Json j = to_json(*c);
    j["op"] = "canvass";
    return j;
  }
  Json cmds = Json::array();
  for (const auto& c : std::get<std::vector<EditCommand>>(op)) cmds.push_back(to_json(c));
  return {{"op", "edits"}, {"commands", cmds}};
}

SessionOp session_op_from_json(const Json& j) {
  const std::string op = j.value("op", "");
  if (op == "canvass") return canvass_step_from_json(j);
  if (op == "edits") return edits_from_json(j.at("commands"));
  throw ParseError("unknown session operation '" + op + "'");
}

Session::Session(std::string id, SessionRequest request,
                 std::shared_ptr<const RoadNetwork> network, std::vector<Asset> assets)
    : id_(std::move(id)), request_(std::move(request)) {
  ctx_.network = std::move(network);
  ctx_.assets = std::move(assets);
  ctx_.config = request_.config;
  if (request_.seed_classes.empty()) {
    request_.seed_classes = select_seed_classes(ctx_.assets, *ctx_.network,
                                                ctx_.config.seed_grid_cell_m,
                                                ctx_.config.target_cells_fraction);
  }
  DesignSpec spec;
  spec.depot = request_.depot;
  spec.seed_classes = request_.seed_classes;
  spec.budget_s = request_.budget_s;
  spec.closed_tour = request_.closed_tour;
  design_ = solve_design(ctx_, std::move(spec));
}

Session Session::replay(std::string id, const SessionRequest& request,
                        std::shared_ptr<const RoadNetwork> network, std::vector<Asset> assets,
                        const std::vector<SessionOp>& history) {
  Session s(std::move(id), request, std::move(network), std::move(assets));
  for (const auto& op : history) {
    if (const auto* c = std::get_if<CanvassStep>(&op)) {
      s.add_canvass(*c);
    } else {
      s.apply_edits(std::get<std::vector<EditCommand>>(op));
    }
  }
  return s;
}

void Session::add_canvass(const CanvassStep& step) {
  design_ = recon::add_canvass(ctx_, design_, step);
  history_.emplace_back(step);
}

void Session::apply_edits(const std::vector<EditCommand>& commands) {
  design_ = recon::apply_edits(ctx_, design_, commands);
  history_.emplace_back(commands);
}

CoverageReport Session::report() const {
  return make_report(design_.route, *design_.graph, design_.assets, ctx_.config.buffer_m,
                     parse_clock(request_.start_clock), request_.report_traffic_multiplier);
}

std::string Session::export_route(ExportFormat format) const {
  return recon::export_route(design_.route, *design_.graph, format);
}

Json Session::snapshot() const {
  Json history = Json::array();
  for (const auto& op : history_) history.push_back(to_json(op));
  return {{"session_id", id_},
          {"request", to_json(request_)},
          {"history", history},
          {"route", to_json(design_.route)}};
}

Json Session::summary() const {
  Json dropped = Json::array();
  for (const auto& d : design_.transect.dropped) {
    dropped.push_back({{"ref", d.ref}, {"node", d.node}, {"reason", to_string(d.reason)}});
  }
  Json j = {{"session_id", id_},
            {"route", to_json(design_.route)},
            {"report", to_json(report())},
            {"seed_classes", request_.seed_classes},
            {"budget_s", design_.spec.budget_s},
            {"dropped", dropped},
            {"history_length", history_.size()}};
  if (design_.prune) j["prune"] = to_json(*design_.prune);
  return j;
}

}  // namespace recon
