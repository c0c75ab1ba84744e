#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "http_client.hpp"

#include <cstdlib>

namespace hubeval::detail {

HttpResponse post_json(const std::string& base_url, const std::string& path,
                       const std::string& body, const std::string& api_key_env,
                       int timeout_seconds) {
    // httplib wants scheme://host[:port]; anything after that is a path prefix.
    std::string origin = base_url;
    std::string prefix;
    const auto scheme_end = base_url.find("://");
    const auto slash = base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (slash != std::string::npos) {
        origin = base_url.substr(0, slash);
        prefix = base_url.substr(slash);
        while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    }

    HttpResponse out;
    httplib::Client client(origin);
    if (!client.is_valid()) {
        out.transport_error = "invalid base url '" + base_url + "'";
        return out;
    }
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);

    httplib::Headers headers;
    if (!api_key_env.empty()) {
        if (const char* key = std::getenv(api_key_env.c_str()); key != nullptr && *key != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    auto res = client.Post(prefix + path, headers, body, "application/json");
    if (!res) {
        out.transport_error = httplib::to_string(res.error());
        return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
}

bool is_retriable_status(int status) {
    return status == 0 || status == 408 || status == 429 || status >= 500;
}

}  // namespace hubeval::detail
