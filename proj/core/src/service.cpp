#include "recon/service.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <mutex>

#include <fmt/format.h>
#include <httplib.h>

#include "recon/errors.hpp"
#include "recon/ingest.hpp"
#include "recon/session.hpp"

namespace recon {

namespace {

namespace fs = std::filesystem;

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::string etag;
};

Reply json_reply(int status, const Json& j) { return {status, j.dump(), "application/json", {}}; }

Reply error_reply(int status, std::string_view code, std::string_view message) {
  return json_reply(status, {{"error", {{"code", code}, {"message", message}}}});
}

struct Dataset {
  std::string id;
  std::string kind;  // network | assets | blockgroups
  std::string format;
  std::string raw;
  std::shared_ptr<const RoadNetwork> network;
  std::vector<Asset> assets;
  std::vector<BlockGroup> groups;
  std::optional<JenksResult> jenks;
  Json report;
};

struct SessionSlot {
  std::unique_ptr<Session> session;
  std::atomic<bool> busy{false};
};

/// Releases a session's writer flag when the last owner goes away.
struct WriteGuard {
  std::shared_ptr<SessionSlot> slot;
  ~WriteGuard() {
    if (slot) slot->busy = false;
  }
};

std::string fnv_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:012x}", h & 0xffffffffffffULL);
}

void write_atomic(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw SerializationError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::size_t next_number(const std::map<std::string, std::size_t>& counters, const std::string& key) {
  auto it = counters.find(key);
  return it == counters.end() ? 1 : it->second + 1;
}

std::size_t id_number(std::string_view id) {
  const auto dash = id.rfind('-');
  std::size_t n = 0;
  for (std::size_t i = dash + 1; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9') return 0;
    n = n * 10 + static_cast<std::size_t>(id[i] - '0');
  }
  return n;
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  httplib::Server server;
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets;
  std::map<std::string, std::string> latest;  // kind -> dataset id
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions;
  std::map<std::string, SurveyCalendar> calendars;
  std::map<std::string, std::shared_future<Reply>> jobs;
  std::map<std::string, std::size_t> counters;

  explicit Impl(ServiceOptions o) : options(std::move(o)) {
    restore();
    routes();
  }

  // ---- persistence -------------------------------------------------------

  [[nodiscard]] bool persistent() const { return !options.data_dir.empty(); }

  void save_dataset(const Dataset& d) {
    if (!persistent()) return;
    Json j = {{"id", d.id}, {"kind", d.kind}, {"format", d.format}, {"raw", d.raw}};
    if (d.jenks) j["jenks_k"] = d.jenks->k;
    write_atomic(options.data_dir / "datasets" / (d.id + ".json"), j.dump());
  }

  void save_session(const Session& s) {
    if (persistent()) {
      write_atomic(options.data_dir / "sessions" / (s.id() + ".json"), s.snapshot().dump(2));
    }
  }

  void save_calendar(const std::string& id, const SurveyCalendar& c) {
    if (persistent()) write_atomic(options.data_dir / "calendars" / (id + ".json"), to_json(c).dump(2));
  }

  static std::vector<fs::path> json_files(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void restore() {
    if (!persistent()) return;
    fs::create_directories(options.data_dir);
    for (const auto& p : json_files(options.data_dir / "datasets")) {
      const Json j = parse_json(read_file(p));
      auto d = load_dataset(j.at("kind").get<std::string>(), j.at("raw").get<std::string>(),
                            j.at("format").get<std::string>());
      if (j.contains("jenks_k")) d->jenks = classify_block_groups(d->groups, j.at("jenks_k").get<int>());
      latest[d->kind] = d->id;
      datasets[d->id] = std::move(d);
    }
    for (const auto& p : json_files(options.data_dir / "sessions")) {
      const Json j = parse_json(read_file(p));
      const auto id = j.at("session_id").get<std::string>();
      const auto request = session_request_from_json(j.at("request"));
      std::vector<SessionOp> history;
      for (const auto& op : j.at("history")) history.push_back(session_op_from_json(op));
      auto slot = std::make_shared<SessionSlot>();
      slot->session = std::make_unique<Session>(
          Session::replay(id, request, dataset(request.network_id, "network")->network,
                          dataset(request.assets_id, "assets")->assets, history));
      sessions[id] = slot;
      counters["s"] = std::max(counters["s"], id_number(id));
    }
    for (const auto& p : json_files(options.data_dir / "calendars")) {
      const auto id = p.stem().string();
      calendars[id] = calendar_from_json(parse_json(read_file(p)));
      counters["cal"] = std::max(counters["cal"], id_number(id));
    }
  }

  // ---- lookups -----------------------------------------------------------

  std::shared_ptr<const Dataset> dataset(const std::string& id, const std::string& kind) {
    const std::string key = id.empty() ? (latest.contains(kind) ? latest[kind] : "") : id;
    auto it = datasets.find(key);
    if (it == datasets.end() || it->second->kind != kind) {
      throw NotFoundError(id.empty() ? fmt::format("no {} dataset uploaded", kind)
                                     : fmt::format("unknown {} dataset '{}'", kind, id));
    }
    return it->second;
  }

  std::shared_ptr<SessionSlot> session(const std::string& id) {
    auto it = sessions.find(id);
    if (it == sessions.end() || !it->second->session) {
      throw NotFoundError(fmt::format("unknown session '{}'", id));
    }
    return it->second;
  }

  std::string new_id(const std::string& prefix) {
    const std::size_t n = next_number(counters, prefix);
    counters[prefix] = n;
    return fmt::format("{}-{}", prefix, n);
  }

  static std::shared_ptr<Dataset> load_dataset(const std::string& kind, std::string raw,
                                               std::string format) {
    auto d = std::make_shared<Dataset>();
    d->kind = kind;
    d->format = std::move(format);
    if (kind == "network") {
      auto net = std::make_shared<const RoadNetwork>(parse_road_network(raw));
      d->report = {{"nodes", net->node_count()},
                   {"edges", net->edge_count()},
                   {"components", net->component_count()}};
      d->network = std::move(net);
    } else if (kind == "assets") {
      d->assets = d->format == "geojson" ? parse_assets_geojson(raw) : parse_assets_csv(raw);
      Json by = Json::object();
      for (const Capital c : kAllCapitals) by[std::string(to_string(c))] = 0;
      for (const auto& a : d->assets) by[std::string(to_string(a.capital))] = by[std::string(to_string(a.capital))].get<int>() + 1;
      d->report = {{"count", d->assets.size()}, {"by_capital", by}};
    } else {
      d->groups = parse_block_groups(raw);
      d->report = {{"count", d->groups.size()}, {"null_income", count_null_income(d->groups)}};
    }
    d->id = fmt::format("{}-{}", kind, fnv_hex(raw));
    d->raw = std::move(raw);
    return d;
  }

  // ---- request plumbing --------------------------------------------------

  static void send(httplib::Response& res, const Reply& r) {
    res.status = r.status;
    if (!r.etag.empty()) res.set_header("ETag", r.etag);
    res.set_content(r.body, r.content_type);
  }

  static Reply guarded(const std::function<Reply()>& fn) {
    try {
      return fn();
    } catch (const NotFoundError& e) {
      return error_reply(404, e.code(), e.what());
    } catch (const Error& e) {
      return error_reply(400, e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
      return error_reply(400, "ParseError", e.what());
    } catch (const std::exception& e) {
      return error_reply(500, "InternalError", e.what());
    }
  }

  /// Runs `fn` on a worker; answers 202 with a poll URL if it outlives the
  /// async threshold.
  Reply maybe_async(std::function<Reply()> fn) {
    std::shared_future<Reply> fut =
        std::async(std::launch::async, [fn = std::move(fn)] { return guarded(fn); }).share();
    const auto wait = std::chrono::duration<double>(options.async_after_s);
    if (fut.wait_for(wait) == std::future_status::ready) return fut.get();
    std::lock_guard lock(mu);
    const std::string id = new_id("job");
    jobs[id] = fut;
    return json_reply(202, {{"job_id", id}, {"status", "running"}, {"poll", "/jobs/" + id}});
  }

  void on(const char* method, const std::string& pattern,
          std::function<Reply(const httplib::Request&)> fn) {
    auto handler = [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      send(res, guarded([&] { return fn(req); }));
    };
    if (std::string_view(method) == "GET") {
      server.Get(pattern, handler);
    } else {
      server.Post(pattern, handler);
    }
  }

  static Json body_json(const httplib::Request& req) {
    return req.body.empty() ? Json::object() : parse_json(req.body);
  }

  static std::string upload_body(const httplib::Request& req) {
    if (req.is_multipart_form_data() && !req.files.empty()) return req.files.begin()->second.content;
    return req.body;
  }

  NodeId resolve_depot(const Json& j, const RoadNetwork& net) {
    if (j.is_number_unsigned()) return j.get<NodeId>();
    if (j.is_object() && j.contains("lon") && j.contains("lat")) {
      return net.nearest_node(net.projection().forward({j.at("lon").get<double>(), j.at("lat").get<double>()}));
    }
    throw ParseError("depot must be a node id or {\"lon\", \"lat\"}");
  }

  // ---- endpoints ---------------------------------------------------------

  void routes() {
    on("GET", "/health", [](const httplib::Request&) { return json_reply(200, {{"status", "ok"}}); });

    on("POST", R"(/datasets/(network|assets|blockgroups))", [this](const httplib::Request& req) {
      const std::string kind = req.matches[1];
      std::string raw = upload_body(req);
      std::string format = kind == "assets" ? "csv" : "geojson";
      if (req.has_param("format")) {
        format = req.get_param_value("format");
      } else if (kind == "assets" && raw.find_first_not_of(" \t\r\n") != std::string::npos &&
                 raw[raw.find_first_not_of(" \t\r\n")] == '{') {
        format = "geojson";
      }
      auto d = load_dataset(kind, std::move(raw), format);
      std::lock_guard lock(mu);
      save_dataset(*d);
      latest[kind] = d->id;
      Json out = {{"dataset_id", d->id}, {"kind", kind}, {"report", d->report}};
      datasets[d->id] = std::move(d);
      return json_reply(201, out);
    });

    on("GET", "/datasets", [this](const httplib::Request&) {
      std::lock_guard lock(mu);
      Json out = Json::array();
      for (const auto& [id, d] : datasets) {
        out.push_back({{"dataset_id", id}, {"kind", d->kind}, {"report", d->report}});
      }
      return json_reply(200, out);
    });

    on("POST", "/analysis/jenks", [this](const httplib::Request& req) {
      const Json j = body_json(req);
      std::lock_guard lock(mu);
      auto src = dataset(j.value("dataset", ""), "blockgroups");
      auto d = std::make_shared<Dataset>(*src);
      d->jenks = classify_block_groups(d->groups, j.at("k").get<int>());
      Json labels = Json::object();
      for (const auto& g : d->groups) {
        labels[g.bg_id] = g.cluster_label ? Json(*g.cluster_label) : Json(nullptr);
      }
      Json out = to_json(*d->jenks);
      out["dataset"] = d->id;
      out["labels"] = labels;
      save_dataset(*d);
      datasets[d->id] = std::move(d);
      return json_reply(200, out);
    });

    on("GET", "/analysis/canvass-areas", [this](const httplib::Request& req) {
      std::shared_ptr<const Dataset> net;
      std::shared_ptr<const Dataset> bg;
      {
        std::lock_guard lock(mu);
        net = dataset(req.get_param_value("network"), "network");
        bg = dataset(req.get_param_value("blockgroups"), "blockgroups");
      }
      if (!bg->jenks) throw DomainError("block groups are not classified; POST /analysis/jenks first");
      const double window = req.has_param("window_m") ? std::stod(req.get_param_value("window_m")) : 1000.0;
      const double stride = req.has_param("stride_m") ? std::stod(req.get_param_value("stride_m")) : window / 2;
      const auto areas = rank_candidate_areas(bg->groups, *net->network, window, stride,
                                              req.get_param_value("include_degree2") == "true");
      std::size_t limit = areas.size();
      if (req.has_param("limit")) limit = std::min(limit, static_cast<std::size_t>(std::stoul(req.get_param_value("limit"))));
      Json out = Json::array();
      for (std::size_t i = 0; i < limit; ++i) {
        out.push_back(to_json(areas[i], net->network->projection()));
      }
      return json_reply(200, {{"areas", out}});
    });

    on("POST", "/sessions/transect", [this](const httplib::Request& req) {
      Json j = body_json(req);
      std::shared_ptr<const Dataset> net;
      std::shared_ptr<const Dataset> assets;
      std::string id;
      {
        std::lock_guard lock(mu);
        net = dataset(j.value("network", ""), "network");
        assets = dataset(j.value("assets", ""), "assets");
        id = new_id("s");
      }
      j["network"] = net->id;
      j["assets"] = assets->id;
      if (!j.contains("depot")) throw ParseError("missing field 'depot'");
      j["depot"] = resolve_depot(j.at("depot"), *net->network);
      const SessionRequest request = session_request_from_json(j);
      return maybe_async([this, id, request, net, assets] {
        auto slot = std::make_shared<SessionSlot>();
        slot->session = std::make_unique<Session>(id, request, net->network, assets->assets);
        Json out = slot->session->summary();
        std::lock_guard lock(mu);
        save_session(*slot->session);
        sessions[id] = slot;
        return json_reply(201, out);
      });
    });

    on("GET", R"(/sessions/([^/]+))", [this](const httplib::Request& req) {
      std::shared_ptr<SessionSlot> slot;
      {
        std::lock_guard lock(mu);
        slot = session(req.matches[1]);
      }
      if (slot->busy) return error_reply(409, "Conflict", "session is being modified");
      Json out = slot->session->summary();
      out["history"] = slot->session->snapshot().at("history");
      return json_reply(200, out);
    });

    const auto mutate = [this](const std::string& id,
                               std::function<void(Session&)> op) -> Reply {
      std::shared_ptr<SessionSlot> slot;
      {
        std::lock_guard lock(mu);
        slot = session(id);
      }
      bool expected = false;
      if (!slot->busy.compare_exchange_strong(expected, true)) {
        return error_reply(409, "Conflict", "another modification of this session is in progress");
      }
      auto guard = std::make_shared<WriteGuard>(WriteGuard{slot});
      return maybe_async([this, guard, op = std::move(op)] {
        Session& s = *guard->slot->session;
        Session next = s;
        op(next);
        s = std::move(next);
        std::lock_guard lock(mu);
        save_session(s);
        return json_reply(200, s.summary());
      });
    };

    on("POST", R"(/sessions/([^/]+)/canvass)", [mutate](const httplib::Request& req) {
      const CanvassStep step = canvass_step_from_json(body_json(req));
      return mutate(req.matches[1], [step](Session& s) { s.add_canvass(step); });
    });

    on("POST", R"(/sessions/([^/]+)/edits)", [mutate](const httplib::Request& req) {
      const auto commands = edits_from_json(req.body.empty() ? Json::array() : parse_json(req.body));
      return mutate(req.matches[1], [commands](Session& s) { s.apply_edits(commands); });
    });

    server.Get(R"(/sessions/([^/]+)/export)", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, guarded([&] {
        std::shared_ptr<SessionSlot> slot;
        {
          std::lock_guard lock(mu);
          slot = session(req.matches[1]);
        }
        if (slot->busy) return error_reply(409, "Conflict", "session is being modified");
        const std::string name = req.has_param("format") ? req.get_param_value("format") : "geojson";
        const ExportFormat format = parse_export_format(name);
        Reply r;
        r.body = slot->session->export_route(format);
        r.content_type = format == ExportFormat::gpx ? "application/gpx+xml" : "application/geo+json";
        r.etag = content_etag(r.body);
        if (req.get_header_value("If-None-Match") == r.etag) {
          r.status = 304;
          r.body.clear();
        }
        return r;
      }));
    });

    on("GET", R"(/jobs/([^/]+))", [this](const httplib::Request& req) {
      std::shared_future<Reply> fut;
      {
        std::lock_guard lock(mu);
        auto it = jobs.find(req.matches[1]);
        if (it == jobs.end()) throw NotFoundError(fmt::format("unknown job '{}'", req.matches[1].str()));
        fut = it->second;
      }
      if (fut.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
        return json_reply(202, {{"job_id", req.matches[1].str()}, {"status", "running"}});
      }
      return fut.get();
    });

    on("POST", "/calendar", [this](const httplib::Request& req) {
      const Json j = body_json(req);
      const auto cal = generate_calendar(policy_from_json(j.at("policy")), j.at("horizon_days").get<int>());
      std::lock_guard lock(mu);
      const std::string id = new_id("cal");
      calendars[id] = cal;
      save_calendar(id, cal);
      return json_reply(201, {{"calendar_id", id}, {"calendar", to_json(cal)}});
    });

    on("GET", R"(/calendar/([^/]+))", [this](const httplib::Request& req) {
      std::lock_guard lock(mu);
      auto it = calendars.find(req.matches[1]);
      if (it == calendars.end()) throw NotFoundError("unknown calendar");
      if (req.get_param_value("format") == "text") {
        return Reply{200, format_calendar_table(it->second), "text/plain", {}};
      }
      return json_reply(200, {{"calendar_id", it->first}, {"calendar", to_json(it->second)}});
    });

    on("POST", R"(/calendar/([^/]+)/(event|reschedule))", [this](const httplib::Request& req) {
      const Json j = body_json(req);
      std::lock_guard lock(mu);
      auto it = calendars.find(req.matches[1]);
      if (it == calendars.end()) throw NotFoundError("unknown calendar");
      SurveyCalendar next;
      if (req.matches[2] == "event") {
        next = insert_event_survey(it->second, parse_date(j.at("event_date").get<std::string>()),
                                   j.value("note", ""));
      } else {
        const auto reason = parse_reschedule_reason(j.at("reason").get<std::string>());
        if (!reason) throw ParseError("reason must be RAIN or EQUIPMENT_UNAVAILABLE");
        next = reschedule(it->second, parse_date(j.at("entry_date").get<std::string>()), *reason,
                          parse_date(j.at("earliest_feasible").get<std::string>()));
      }
      it->second = next;
      save_calendar(it->first, next);
      return json_reply(200, {{"calendar_id", it->first}, {"calendar", to_json(next)}});
    });
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

int Service::bind() {
  if (impl_->options.port == 0) return impl_->server.bind_to_any_port(impl_->options.bind);
  if (!impl_->server.bind_to_port(impl_->options.bind, impl_->options.port)) return -1;
  return impl_->options.port;
}

void Service::serve() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace recon
