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

#pragma once

#include "apkleak/detection.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace apkleak {

struct TransportRequest {
    std::string method;
    std::string url;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
};

struct TransportResponse {
    int status_code = 0;
    std::string body;
};

// Raised by transports for connection-level failures (DNS, TLS, timeout).
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual TransportResponse send(const TransportRequest& request) = 0;
    // Live transports touch the network; offline policies refuse them.
    virtual bool is_live() const = 0;
};

// "METHOD URL", then one "\nName: value" per header in sorted order, then
// "\n\n" + body when the body is non-empty.
std::string canonicalize(const TransportRequest& request);

// Canned responses keyed by canonical request. A "*" entry, when present,
// answers every request without an exact match; otherwise unmatched
// requests raise TransportError.
class FixtureTransport final : public Transport {
public:
    FixtureTransport() = default;

    // {"<canonical request>": {"status": 200, "body": "..."}, "*": {...}}
    static std::unique_ptr<FixtureTransport> load(const std::filesystem::path& path);
    static std::unique_ptr<FixtureTransport> from_json_text(std::string_view text);

    void add(std::string canonical_request, TransportResponse response);
    void set_default(TransportResponse response);

    TransportResponse send(const TransportRequest& request) override;
    bool is_live() const override { return false; }

    std::size_t call_count() const { return calls_.load(); }

private:
    std::map<std::string, TransportResponse, std::less<>> responses_;
    std::optional<TransportResponse> fallback_;
    std::atomic<std::size_t> calls_{0};
};

struct ValidationPolicy {
    bool offline = true;
    std::size_t max_in_flight = 4;
    double per_service_rate = 1.0; // requests per second
    std::chrono::milliseconds timeout{10'000};
    int max_retries_on_network_error = 2;
    int max_requeues_on_rate_limit = 0;
    std::chrono::milliseconds requeue_backoff{1'000};

    void validate() const; // throws Error{Config}
};

// HTTPS transport over cpp-httplib. Throws Error{Config} when constructed
// under an offline policy.
class HttpsTransport final : public Transport {
public:
    explicit HttpsTransport(const ValidationPolicy& policy);
    TransportResponse send(const TransportRequest& request) override;
    bool is_live() const override { return true; }

private:
    std::chrono::milliseconds timeout_;
};

struct EndpointTemplate {
    std::string id;
    std::string service;
    std::string method = "GET";
    // Placeholders: {key}, {client_id}, {client_secret}, {basic_auth}.
    std::string url_template;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body_template;
    std::vector<int> success_codes{200};
    // A 200 whose body contains one of these is still invalid.
    std::vector<std::string> invalid_body_markers;
    // Client-credentials grant: valid only if a token is issued.
    bool token_grant = false;
    bool mutating = false;
};

class EndpointSet {
public:
    EndpointSet() = default;
    // Rejects templates that are mutating or not https. Throws Error{Config}.
    explicit EndpointSet(std::vector<EndpointTemplate> templates);

    static EndpointSet defaults();
    static EndpointSet load(const std::filesystem::path& path);
    static EndpointSet from_json_text(std::string_view text);

    const EndpointTemplate* find(std::string_view service) const;
    const std::vector<EndpointTemplate>& templates() const { return templates_; }

private:
    std::vector<EndpointTemplate> templates_;
};

TransportRequest build_request(const EndpointTemplate& endpoint, const DetectedCredential& credential);

enum class ValidationStatus { valid, invalid, rate_limited, network_error, skipped_offline, error };

const char* to_string(ValidationStatus status) noexcept;
ValidationStatus parse_validation_status(std::string_view text);

struct ValidationOutcome {
    DetectedCredential credential;
    ValidationStatus status = ValidationStatus::skipped_offline;
    std::optional<int> http_status;
    std::chrono::system_clock::time_point checked_at{};
    std::string endpoint_id;
    int attempts = 0;
    // Human-readable note (never a response body or token).
    std::string detail;
};

// Spaces requests to one service at least 1/rate seconds apart, across
// all worker threads.
class RateLimiter {
public:
    explicit RateLimiter(double per_second);
    void acquire(const std::string& service);

private:
    std::chrono::steady_clock::duration interval_;
    std::mutex mutex_;
    std::map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

// One request per attempt: 200 -> valid, 429 -> rate_limited, other codes
// -> invalid, transport failure -> network_error (retried). Offline policy
// with no transport or a live one -> skipped_offline without any call.
// Throws Error{NoEndpointTemplate}.
ValidationOutcome validate(const DetectedCredential& credential, const EndpointSet& endpoints, Transport* transport,
                           const ValidationPolicy& policy, RateLimiter* limiter = nullptr);

// Client-credentials token issuance for twitter/facebook pairs. Any
// issued token is dropped with the response body.
ValidationOutcome validate_oauth_pair(const DetectedCredential& credential, const EndpointSet& endpoints,
                                      Transport* transport, const ValidationPolicy& policy,
                                      RateLimiter* limiter = nullptr);

// Outcomes in input order. Duplicate (service, factor values) are
// validated once and share the outcome. Per-credential failures become
// outcomes with status `error`.
std::vector<ValidationOutcome> run_validation_batch(std::span<const DetectedCredential> credentials,
                                                    const EndpointSet& endpoints, Transport* transport,
                                                    const ValidationPolicy& policy);

std::string base64_encode(std::string_view bytes);

} // namespace apkleak
