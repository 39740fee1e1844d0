/*
 * Copyright 2026 The coshrem Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COSHREM_SERVICE_HPP_
#define COSHREM_SERVICE_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace coshrem {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  ///< 0 picks a free port
  std::optional<std::filesystem::path> cacheDirectory;
  std::size_t maxRuns = 64;  ///< oldest runs are forgotten beyond this
};

/// HTTP API for interactive tuning:
///   GET  /api/params/schema
///   POST /api/detect             multipart (image, params) or JSON {imageRef, ...}
///   GET  /api/result/{runId}/{layer}
///   POST /api/phantom
/// Errors are JSON {code, message, field?}.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the socket; returns the bound port. Throws IoError on failure.
  int bind();
  /// Serves until stop() is called. Call bind() first.
  void listen();
  void stop();

  /// Number of systems built so far (cache misses).
  int system_builds() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Parameter metadata document served at /api/params/schema.
std::string params_schema_json();

}  // namespace coshrem

#endif  // COSHREM_SERVICE_HPP_
