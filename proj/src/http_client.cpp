#include "http_client.hpp"

#include <cstdlib>

#include <httplib.h>

namespace mugi::detail {
namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InvalidArgument("endpoint url needs a scheme: '" + url + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse post_json(const ServiceEndpoint& endpoint, const std::string& body, std::chrono::milliseconds timeout) {
    const ParsedUrl url = split_url(endpoint.url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (!endpoint.api_key_env.empty()) {
        const char* key = std::getenv(endpoint.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            throw InvalidArgument("environment variable " + endpoint.api_key_env + " is not set");
        }
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
        throw ServiceError("request to " + endpoint.url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw ServiceError("request to " + endpoint.url + " returned HTTP " + std::to_string(res->status));
    }
    return HttpResponse{res->status, res->body};
}

}  // namespace mugi::detail
