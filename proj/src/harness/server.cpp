#include "captchalab/harness/server.hpp"

#include <httplib.h>

#include "captchalab/imgcore/pgm.hpp"

namespace captchalab::harness {

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

nlohmann::json parse_body(const httplib::Request& req) {
  auto body = nlohmann::json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw RequestError("request body must be a JSON object");
  return body;
}

// Maps library errors onto status codes; anything else is a 500.
template <typename Handler>
httplib::Server::Handler guarded(Handler h) {
  return [h](const httplib::Request& req, httplib::Response& res) {
    try {
      h(req, res);
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    } catch (const ConflictError& e) {
      send_error(res, 409, e.what());
    } catch (const EmptyReportError& e) {
      send_error(res, 404, e.what());
    } catch (const RequestError& e) {
      send_error(res, 400, e.what());
    } catch (const InputError& e) {
      send_error(res, 400, e.what());
    } catch (const SpecError& e) {
      send_error(res, 400, e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

}  // namespace

HarnessServer::HarnessServer(TrialStore& store, ServerOptions opts)
    : store_(store), opts_(std::move(opts)), http_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HarnessServer::~HarnessServer() { stop(); }

int HarnessServer::bind(int port) {
  if (port == 0) return http_->bind_to_any_port(opts_.host);
  return http_->bind_to_port(opts_.host, port) ? port : -1;
}

bool HarnessServer::listen() { return http_->listen_after_bind(); }

void HarnessServer::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

void HarnessServer::install_routes() {
  auto& s = *http_;

  s.Post("/api/trials", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body.contains("count") || !body["count"].is_number_integer()) {
      throw RequestError("'count' must be an integer");
    }
    if (!body.contains("base_seed") || !body["base_seed"].is_number_integer()) {
      throw RequestError("'base_seed' must be an integer");
    }
    const auto trials = store_.create_trials(body["count"].get<int>(),
                                             body["base_seed"].get<std::uint64_t>(), opts_.spec_base);
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& t : trials) ids.push_back(t.trial_id);
    send_json(res, 201, {{"trial_ids", std::move(ids)}});
  }));

  s.Get("/api/trials/open", guarded([this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("role")) throw RequestError("missing 'role' query parameter");
    nlohmann::json ids = store_.open_trials(parse_role(req.get_param_value("role")));
    send_json(res, 200, {{"trial_ids", std::move(ids)}});
  }));

  s.Get(R"(/api/trials/([A-Za-z0-9_-]+)/image)",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto bytes = imgcore::pgm_encode(store_.trial_image(req.matches[1]));
          res.status = 200;
          res.set_content(std::string(bytes.begin(), bytes.end()), "image/x-portable-graymap");
        }));

  s.Post(R"(/api/trials/([A-Za-z0-9_-]+)/answers)",
         guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto body = parse_body(req);
           for (const char* key : {"client_id", "role", "text"}) {
             if (!body.contains(key) || !body[key].is_string()) {
               throw RequestError(std::string("'") + key + "' must be a string");
             }
           }
           store_.record_answer(req.matches[1], body["client_id"].get<std::string>(),
                                parse_role(body["role"].get<std::string>()),
                                body["text"].get<std::string>());
           send_json(res, 200, {{"accepted", true}});
         }));

  s.Get(R"(/api/trials/([A-Za-z0-9_-]+))",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, store_.trial_detail(req.matches[1]));
        }));

  s.Get("/api/report", guarded([this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, to_json(store_.aggregate_report()));
  }));

  if (opts_.ui_dir) s.set_mount_point("/ui", opts_.ui_dir->string());
}

}  // namespace captchalab::harness
