#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "recon/design.hpp"
#include "recon/json_io.hpp"
#include "recon/report.hpp"

namespace recon {

/// Initial transect request. Seed classes are resolved (and stored) at
/// creation so replays never depend on the selection heuristic.
struct SessionRequest {
  std::string network_id;
  std::string assets_id;
  NodeId depot = 0;
  std::vector<std::string> seed_classes;
  double budget_s = kDefaultBudgetS;
  bool closed_tour = true;
  SolverConfig config;
  std::string start_clock = "08:00:00";
  double report_traffic_multiplier = 1.0;
};

using SessionOp = std::variant<CanvassStep, std::vector<EditCommand>>;

Json to_json(const SessionRequest& r);
SessionRequest session_request_from_json(const Json& j);
Json to_json(const SessionOp& op);
SessionOp session_op_from_json(const Json& j);

/// A route under iterative design. Mutations return nothing and are not
/// thread-safe; callers serialise writers.
class Session {
 public:
  /// Solves the initial transect. Empty seed classes are chosen by the
  /// grid-coverage heuristic.
  Session(std::string id, SessionRequest request, std::shared_ptr<const RoadNetwork> network,
          std::vector<Asset> assets);

  /// Rebuilds a session by re-running `history` from the request.
  static Session replay(std::string id, const SessionRequest& request,
                        std::shared_ptr<const RoadNetwork> network, std::vector<Asset> assets,
                        const std::vector<SessionOp>& history);

  void add_canvass(const CanvassStep& step);
  void apply_edits(const std::vector<EditCommand>& commands);

  [[nodiscard]] const std::string& id() const { return id_; }
  [[nodiscard]] const SessionRequest& request() const { return request_; }
  [[nodiscard]] const std::vector<SessionOp>& history() const { return history_; }
  [[nodiscard]] const Design& design() const { return design_; }
  [[nodiscard]] const Route& route() const { return design_.route; }
  [[nodiscard]] const RoutableGraph& graph() const { return *design_.graph; }
  [[nodiscard]] CoverageReport report() const;
  [[nodiscard]] std::string export_route(ExportFormat format) const;

  /// Request, history and the resulting route; enough to restore by replay.
  [[nodiscard]] Json snapshot() const;
  /// Route plus report, as returned by the service.
  [[nodiscard]] Json summary() const;

 private:
  std::string id_;
  SessionRequest request_;
  DesignContext ctx_;
  std::vector<SessionOp> history_;
  Design design_;
};

}  // namespace recon
