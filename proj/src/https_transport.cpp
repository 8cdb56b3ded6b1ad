/*
Copyright 2026 The apkleak Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "apkleak/validation.hpp"

#include "apkleak/text.hpp"

#include "httplib.h"

namespace apkleak {

namespace {

struct SplitUrl {
    std::string host;
    int port = 443;
    std::string target; // path + query
};

SplitUrl split_https_url(const std::string& url) {
    constexpr std::string_view scheme = "https://";
    if (url.rfind(scheme, 0) != 0) throw TransportError("only https URLs are supported");
    SplitUrl out;
    const std::size_t host_start = scheme.size();
    const std::size_t slash = url.find('/', host_start);
    std::string authority = url.substr(host_start, slash == std::string::npos ? std::string::npos : slash - host_start);
    out.target = slash == std::string::npos ? "/" : url.substr(slash);
    const std::size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
        out.port = std::stoi(authority.substr(colon + 1));
        authority.resize(colon);
    }
    out.host = std::move(authority);
    if (out.host.empty()) throw TransportError("URL has no host");
    return out;
}

} // namespace

HttpsTransport::HttpsTransport(const ValidationPolicy& policy) : timeout_(policy.timeout) {
    if (policy.offline) throw Error(ErrorCode::Config, "live transport requested under an offline policy");
}

TransportResponse HttpsTransport::send(const TransportRequest& request) {
    const SplitUrl url = split_https_url(request.url);
    httplib::SSLClient client(url.host, url.port);
    client.enable_server_certificate_verification(true);
    client.set_follow_location(false);
    const auto secs = static_cast<time_t>(timeout_.count() / 1000);
    const auto usecs = static_cast<time_t>((timeout_.count() % 1000) * 1000);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    std::string content_type = "application/octet-stream";
    for (const auto& [name, value] : request.headers) {
        if (to_lower_ascii(name) == "content-type")
            content_type = value;
        else
            headers.emplace(name, value);
    }

    httplib::Result result;
    if (request.method == "GET")
        result = client.Get(url.target, headers);
    else if (request.method == "POST")
        result = client.Post(url.target, headers, request.body, content_type);
    else
        throw TransportError("unsupported method " + request.method);

    // The error text never includes the request URL, which may carry a key.
    if (!result) throw TransportError("request failed: " + httplib::to_string(result.error()));
    return {result->status, result->body};
}

} // namespace apkleak
