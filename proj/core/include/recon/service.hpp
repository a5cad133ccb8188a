#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace recon {

struct ServiceOptions {
  std::string bind = "127.0.0.1";
  int port = 8080;
  /// Snapshot directory; empty keeps everything in memory.
  std::filesystem::path data_dir;
  /// Solves running longer than this answer 202 with a poll URL.
  double async_after_s = 2.0;
};

/// HTTP/JSON facade over the engine. Owns datasets, route sessions and
/// calendars; persists them under `data_dir` on every mutation and
/// restores them (sessions by replay) on construction.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds `options.port` (0 picks a free port) and returns the bound port.
  int bind();
  /// Serves until stop(). Call bind() first.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace recon
