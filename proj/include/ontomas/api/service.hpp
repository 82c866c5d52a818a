#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "ontomas/kb/knowledge_base.hpp"

// HTTP/JSON facade over the runtime operations and the query engine.
//
// Every response body is either {"ok":true,"data":...} or
// {"ok":false,"error":{"code":...,"message":...}}. Mutations echo the
// affected id and the revision their write produced. Timestamps are ISO-8601
// UTC ("2023-01-01T08:00Z"); numbers are JSON numbers.
namespace ontomas::api {

struct ApiRequest {
  std::string method;
  std::string path;                            // without the query string
  std::map<std::string, std::string> query;    // decoded query parameters
  std::map<std::string, std::string> headers;  // keys lowercased
  std::string body;
  std::map<std::string, std::string> files;    // multipart: file name -> content
};

struct ApiResponse {
  int status = 200;
  std::string contentType = "application/json";
  std::string body;
};

// Transport-independent request handling. Thread-safe: handlers touch the KB
// only through its read/write entry points.
class ApiService {
 public:
  explicit ApiService(kb::KnowledgeBase& kb) : kb_(kb) {}

  ApiResponse handle(const ApiRequest& request) const;

 private:
  kb::KnowledgeBase& kb_;
};

// HTTP status for an error code name, as used in error bodies.
int httpStatusFor(std::string_view codeName);

// ApiService behind an HTTP/1.1 listener on 127.0.0.1 or a given host.
class HttpServer {
 public:
  explicit HttpServer(kb::KnowledgeBase& kb);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and returns the port; port 0 picks a free one. Throws
  // std::runtime_error when binding fails.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ontomas::api
