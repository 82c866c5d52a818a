#include <stdexcept>

#include <fmt/format.h>
#include <httplib.h>

#include "ontomas/api/service.hpp"

namespace ontomas::api {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string baseName(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

ApiRequest fromHttplib(const httplib::Request& req) {
  ApiRequest r;
  r.method = req.method;
  r.path = req.path;
  for (const auto& [k, v] : req.params) r.query.emplace(k, v);  // first value wins
  for (const auto& [k, v] : req.headers) r.headers.emplace(lower(k), v);
  r.body = req.body;
  // A part is addressed by its file name, or by its field name when the
  // client sent none.
  for (const auto& [field, part] : req.files) {
    r.files[part.filename.empty() ? field : baseName(part.filename)] = part.content;
  }
  return r;
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(kb::KnowledgeBase& kb) : service(kb) {}

  ApiService service;
  httplib::Server server;
};

HttpServer::HttpServer(kb::KnowledgeBase& kb) : impl_(std::make_unique<Impl>(kb)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse out = impl_->service.handle(fromHttplib(req));
    res.status = out.status;
    res.set_content(out.body, out.contentType);
  };
  httplib::Server& s = impl_->server;
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Patch(".*", handler);
  s.Put(".*", handler);
  s.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  httplib::Server& s = impl_->server;
  const int bound = port == 0 ? s.bind_to_any_port(host) : (s.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace ontomas::api
