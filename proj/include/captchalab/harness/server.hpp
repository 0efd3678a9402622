#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "captchalab/captcha/captcha.hpp"
#include "captchalab/harness/store.hpp"

namespace httplib {
class Server;
}

namespace captchalab::harness {

struct ServerOptions {
  std::string host = "0.0.0.0";
  // Spec fields applied to every trial created through the API.
  captcha::CaptchaSpec spec_base{};
  // Static assets mounted under /ui/ when set.
  std::optional<std::filesystem::path> ui_dir;
};

// The interrogator's HTTP/1.1 JSON API over a TrialStore. The store is the
// only shared state; request handlers run on the server's worker threads.
class HarnessServer {
 public:
  HarnessServer(TrialStore& store, ServerOptions opts = {});
  ~HarnessServer();

  HarnessServer(const HarnessServer&) = delete;
  HarnessServer& operator=(const HarnessServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(int port);
  // Blocks serving requests until stop().
  bool listen();
  void stop();

 private:
  void install_routes();

  TrialStore& store_;
  ServerOptions opts_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace captchalab::harness
