#pragma once

// Thin wrapper over cpp-httplib shared by the remote embedding and completion clients.

#include <string>

namespace hubeval::detail {

struct HttpResponse {
    int status = 0;  ///< 0 when the request never got a response
    std::string body;
    std::string transport_error;
};

/// POSTs `body` as application/json to base_url + path. Adds a bearer token read
/// from the environment variable `api_key_env` when it is non-empty and set.
HttpResponse post_json(const std::string& base_url, const std::string& path,
                       const std::string& body, const std::string& api_key_env,
                       int timeout_seconds);

/// 0 (transport failure), 408, 429 and 5xx are worth retrying.
bool is_retriable_status(int status);

}  // namespace hubeval::detail
