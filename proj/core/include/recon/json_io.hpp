#pragma once

#include <nlohmann/json.hpp>

#include "recon/calendar.hpp"
#include "recon/design.hpp"
#include "recon/income.hpp"
#include "recon/report.hpp"

namespace recon {

using Json = nlohmann::json;

/// Parses a config object over the defaults. Unknown keys and bad values
/// throw ConfigError.
SolverConfig config_from_json(const Json& j, SolverConfig base = {});
Json config_to_json(const SolverConfig& c);

Json to_json(const Route& route);
/// Rebuilds and re-validates a route on `graph`.
Route route_from_json(const Json& j, const RoutableGraph& graph, const TurnModel& turn);

Json to_json(const TransectSolution& s);
Json to_json(const PruneReport& r);
Json to_json(const CoverageReport& r);
Json to_json(const JenksResult& r);
Json to_json(const CanvasArea& a);
/// Adds the window as a closed lon/lat "polygon", ready to post back as a
/// canvass area.
Json to_json(const CanvasArea& a, const Projection& projection);

/// [[lon, lat], ...]; closing vertex optional. Throws ParseError.
GeoRing ring_from_json(const Json& j);
Json to_json(const GeoRing& ring);

/// {"kind": "...", ...payload}. Throws ParseError.
EditCommand edit_from_json(const Json& j);
Json to_json(const EditCommand& c);
std::vector<EditCommand> edits_from_json(const Json& j);

CanvassStep canvass_step_from_json(const Json& j);
Json to_json(const CanvassStep& s);

Json to_json(const DesignSpec& s);
DesignSpec design_spec_from_json(const Json& j);

CampaignPolicy policy_from_json(const Json& j);
Json to_json(const CampaignPolicy& p);
Json to_json(const SurveyCalendar& c);
SurveyCalendar calendar_from_json(const Json& j);

/// Parses `text`, turning syntax errors into ParseError.
Json parse_json(std::string_view text);

}  // namespace recon
