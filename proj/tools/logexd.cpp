// logexd: HTTP front end of the tutoring service.
#include <httplib.h>

#include <iostream>

#include "logex/service.hpp"

int main() {
  using namespace logex;
  ApiConfig config;
  try {
    config = config_from_env();
    if (config.exercise_file.empty()) config.exercise_file = LOGEX_DEFAULT_EXERCISES;
  } catch (const std::exception& e) {
    std::cerr << "logexd: " << e.what() << '\n';
    return 1;
  }

  std::unique_ptr<Service> service;
  try {
    service = std::make_unique<Service>(config, ExerciseBank::load(config.exercise_file));
  } catch (const std::exception& e) {
    std::cerr << "logexd: " << e.what() << '\n';
    return 1;
  }

  httplib::Server server;
  auto handler = [&](const httplib::Request& req, httplib::Response& res) {
    Response r = service->handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.status = 204;
  });

  std::cerr << "logexd listening on " << config.host << ':' << config.port << " ("
            << service->bank().all().size() << " exercises, " << service->bank().version() << ")\n";
  if (!server.listen(config.host, config.port)) {
    std::cerr << "logexd: cannot listen on " << config.host << ':' << config.port << '\n';
    return 1;
  }
}
