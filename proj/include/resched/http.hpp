/*
 * Copyright (C) 2026 The resched authors
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
 *
*/

#ifndef RESCHED__HTTP_HPP
#define RESCHED__HTTP_HPP

#include <resched/service.hpp>

#include <httplib.h>

namespace resched {

struct HttpOptions
{
  /// When set, API calls need `Authorization: Bearer <token>`.
  std::string token;

  /// Directory with the built console bundle, served at `/`.
  std::string static_dir;
};

/// Routes `/sessions...` to `api`. `api` must outlive `server`.
inline void mount_api(httplib::Server& server, ApiService& api, const HttpOptions& options = {})
{
  const std::string token = options.token;
  server.set_pre_routing_handler(
    [token](const httplib::Request& req, httplib::Response& res)
    {
      if (token.empty() || req.path.rfind("/sessions", 0) != 0)
        return httplib::Server::HandlerResponse::Unhandled;
      if (req.get_header_value("Authorization") == "Bearer " + token)
        return httplib::Server::HandlerResponse::Unhandled;
      res.status = 401;
      res.set_content(R"({"error":"missing or wrong bearer token"})", "application/json");
      return httplib::Server::HandlerResponse::Handled;
    });

  auto forward = [&api](const httplib::Request& req, httplib::Response& res)
    {
      ApiService::Query query;
      for (const auto& [k, v] : req.params)
        query[k] = v;
      const auto out = api.handle(req.method, req.path, query, req.body);
      res.status = out.status;
      res.set_content(out.body.dump(), "application/json");
    };
  server.Get(R"(/sessions(/.*)?)", forward);
  server.Post(R"(/sessions(/.*)?)", forward);

  if (!options.static_dir.empty())
    server.set_mount_point("/", options.static_dir);
}

} // namespace resched

#endif // RESCHED__HTTP_HPP
