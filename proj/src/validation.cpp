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

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <thread>

namespace apkleak {

namespace {

std::string percent_encode(std::string_view s) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

std::string fill(std::string text, const DetectedCredential& c, bool url_context) {
    const auto value_of = [&](FactorRole role) -> std::string {
        const auto it = c.factors.find(role);
        return it == c.factors.end() ? std::string{} : it->second.value;
    };
    std::string key = value_of(FactorRole::single_key);
    if (key.empty()) key = value_of(FactorRole::server_key);
    const std::string id = value_of(FactorRole::client_id);
    const std::string secret = value_of(FactorRole::client_secret);
    const auto enc = [&](const std::string& v) { return url_context ? percent_encode(v) : v; };
    replace_all(text, "{basic_auth}", base64_encode(percent_encode(id) + ":" + percent_encode(secret)));
    replace_all(text, "{key}", enc(key));
    replace_all(text, "{client_id}", enc(id));
    replace_all(text, "{client_secret}", enc(secret));
    return text;
}

std::string read_text(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, std::string("cannot read ") + what + " " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

using FactorValues = std::vector<std::pair<FactorRole, std::string>>;

FactorValues factor_values(const DetectedCredential& c) {
    FactorValues v;
    for (const auto& [role, ev] : c.factors) v.emplace_back(role, ev.value);
    return v;
}

ValidationOutcome run_attempts(const DetectedCredential& credential, const EndpointTemplate& endpoint,
                               Transport* transport, const ValidationPolicy& policy, RateLimiter* limiter) {
    ValidationOutcome outcome;
    outcome.credential = credential;
    outcome.endpoint_id = endpoint.id;

    if (transport == nullptr || (policy.offline && transport->is_live())) {
        outcome.status = ValidationStatus::skipped_offline;
        outcome.checked_at = std::chrono::system_clock::now();
        return outcome;
    }

    const TransportRequest request = build_request(endpoint, credential);
    int network_failures = 0;
    int requeues = 0;
    while (true) {
        if (limiter) limiter->acquire(credential.service);
        ++outcome.attempts;
        TransportResponse response;
        try {
            response = transport->send(request);
        } catch (const TransportError& e) {
            if (network_failures < policy.max_retries_on_network_error) {
                ++network_failures;
                continue;
            }
            outcome.status = ValidationStatus::network_error;
            outcome.http_status.reset();
            outcome.detail = e.what();
            break;
        }

        outcome.http_status = response.status_code;
        const int code = response.status_code;
        if (code == 200) {
            const bool marked_invalid =
                std::any_of(endpoint.invalid_body_markers.begin(), endpoint.invalid_body_markers.end(),
                            [&](const std::string& m) { return response.body.find(m) != std::string::npos; });
            const bool token_missing = endpoint.token_grant && response.body.find("access_token") == std::string::npos;
            if (marked_invalid) {
                outcome.status = ValidationStatus::invalid;
                outcome.detail = "200 with an error marker in the body";
            } else if (token_missing) {
                outcome.status = ValidationStatus::invalid;
                outcome.detail = "200 without an issued token";
            } else {
                outcome.status = ValidationStatus::valid;
            }
        } else if (code == 429) {
            if (requeues < policy.max_requeues_on_rate_limit) {
                ++requeues;
                std::this_thread::sleep_for(policy.requeue_backoff);
                continue;
            }
            outcome.status = ValidationStatus::rate_limited;
        } else if (code >= 200 && code < 300) {
            outcome.status = ValidationStatus::invalid;
            outcome.detail = "unexpected success code " + std::to_string(code) + " (only 200 counts)";
        } else {
            outcome.status = ValidationStatus::invalid;
        }
        // Response bodies (and any issued token) go out of scope here.
        break;
    }
    outcome.checked_at = std::chrono::system_clock::now();
    return outcome;
}

} // namespace

std::string base64_encode(std::string_view bytes) {
    static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const std::uint32_t n = (static_cast<std::uint8_t>(bytes[i]) << 16) |
                                (static_cast<std::uint8_t>(bytes[i + 1]) << 8) | static_cast<std::uint8_t>(bytes[i + 2]);
        out += {table[(n >> 18) & 63], table[(n >> 12) & 63], table[(n >> 6) & 63], table[n & 63]};
    }
    if (i + 1 == bytes.size()) {
        const std::uint32_t n = static_cast<std::uint8_t>(bytes[i]) << 16;
        out += {table[(n >> 18) & 63], table[(n >> 12) & 63], '=', '='};
    } else if (i + 2 == bytes.size()) {
        const std::uint32_t n = (static_cast<std::uint8_t>(bytes[i]) << 16) | (static_cast<std::uint8_t>(bytes[i + 1]) << 8);
        out += {table[(n >> 18) & 63], table[(n >> 12) & 63], table[(n >> 6) & 63], '='};
    }
    return out;
}

std::string canonicalize(const TransportRequest& request) {
    std::string out = request.method + " " + request.url;
    auto headers = request.headers;
    std::sort(headers.begin(), headers.end());
    for (const auto& [name, value] : headers) out += "\n" + name + ": " + value;
    if (!request.body.empty()) out += "\n\n" + request.body;
    return out;
}

std::unique_ptr<FixtureTransport> FixtureTransport::from_json_text(std::string_view text) {
    auto fixture = std::make_unique<FixtureTransport>();
    try {
        const auto doc = nlohmann::json::parse(text);
        if (!doc.is_object()) throw Error(ErrorCode::Config, "fixture file must map requests to responses");
        for (const auto& [key, value] : doc.items()) {
            TransportResponse r{value.at("status").get<int>(), value.value("body", std::string{})};
            if (key == "*")
                fixture->set_default(std::move(r));
            else
                fixture->add(key, std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("bad fixture file: ") + e.what());
    }
    return fixture;
}

std::unique_ptr<FixtureTransport> FixtureTransport::load(const std::filesystem::path& path) {
    return from_json_text(read_text(path, "fixture file"));
}

void FixtureTransport::add(std::string canonical_request, TransportResponse response) {
    responses_[std::move(canonical_request)] = std::move(response);
}

void FixtureTransport::set_default(TransportResponse response) { fallback_ = std::move(response); }

TransportResponse FixtureTransport::send(const TransportRequest& request) {
    ++calls_;
    const auto it = responses_.find(canonicalize(request));
    if (it != responses_.end()) return it->second;
    if (fallback_) return *fallback_;
    throw TransportError("no fixture response for request");
}

void ValidationPolicy::validate() const {
    if (max_in_flight == 0) throw Error(ErrorCode::Config, "max_in_flight must be positive");
    if (!(per_service_rate > 0.0)) throw Error(ErrorCode::Config, "per_service_rate must be positive");
    if (max_retries_on_network_error < 0 || max_requeues_on_rate_limit < 0)
        throw Error(ErrorCode::Config, "retry counts must be non-negative");
}

EndpointSet::EndpointSet(std::vector<EndpointTemplate> templates) : templates_(std::move(templates)) {
    for (const auto& t : templates_) {
        if (t.mutating) throw Error(ErrorCode::Config, "endpoint " + t.id + " is mutating; only read-only checks allowed");
        if (t.url_template.rfind("https://", 0) != 0)
            throw Error(ErrorCode::Config, "endpoint " + t.id + " must use https");
        if (t.service.empty()) throw Error(ErrorCode::Config, "endpoint " + t.id + " has no service");
        if (t.success_codes != std::vector<int>{200})
            throw Error(ErrorCode::Config, "endpoint " + t.id + ": success_codes must be [200]");
    }
}

EndpointSet EndpointSet::defaults() {
    const auto make = [](std::string id, std::string_view service, std::string url) {
        EndpointTemplate t;
        t.id = std::move(id);
        t.service = std::string(service);
        t.url_template = std::move(url);
        return t;
    };
    std::vector<EndpointTemplate> t;

    auto maps = make("google_maps.directions", services::google_maps,
                     "https://maps.googleapis.com/maps/api/directions/json"
                     "?origin=Disneyland&destination=Universal+Studios+Hollywood&key={key}");
    maps.invalid_body_markers = {"REQUEST_DENIED"};
    t.push_back(std::move(maps));

    t.push_back(make("google_translation.languages", services::google_translation,
                     "https://translation.googleapis.com/language/translate/v2/languages?key={key}"));

    auto vision = make("google_cloud_vision.annotate", services::google_cloud_vision,
                       "https://vision.googleapis.com/v1/images:annotate?key={key}");
    vision.method = "POST";
    vision.headers = {{"Content-Type", "application/json"}};
    vision.body_template = R"js({"requests":[{"image":{"source":{"imageUri":)js"
                           R"js("https://www.google.com/images/branding/googlelogo/1x/googlelogo_color_272x92dp.png"}},)js"
                           R"js("features":[{"type":"LABEL_DETECTION","maxResults":1}]}]})js";
    t.push_back(std::move(vision));

    t.push_back(make("youtube.activities", services::youtube,
                     "https://www.googleapis.com/youtube/v3/activities"
                     "?part=snippet&maxResults=1&channelId=UC-lHJZR3Gqxm24_Vd_AJ5Yw&key={key}"));

    auto fcm = make("fcm.send_dry_run", services::fcm, "https://fcm.googleapis.com/fcm/send");
    fcm.method = "POST";
    fcm.headers = {{"Authorization", "key={key}"}, {"Content-Type", "application/json"}};
    fcm.body_template = R"js({"registration_ids":["ABC"],"dry_run":true})js";
    t.push_back(std::move(fcm));

    auto twitter = make("twitter.oauth2_token", services::twitter, "https://api.twitter.com/oauth2/token");
    twitter.method = "POST";
    twitter.headers = {{"Authorization", "Basic {basic_auth}"},
                       {"Content-Type", "application/x-www-form-urlencoded;charset=UTF-8"}};
    twitter.body_template = "grant_type=client_credentials";
    twitter.token_grant = true;
    t.push_back(std::move(twitter));

    auto facebook = make("facebook.app_access_token", services::facebook,
                         "https://graph.facebook.com/oauth/access_token"
                         "?client_id={client_id}&client_secret={client_secret}&grant_type=client_credentials");
    facebook.token_grant = true;
    t.push_back(std::move(facebook));
    return EndpointSet(std::move(t));
}

EndpointSet EndpointSet::from_json_text(std::string_view text) {
    std::vector<EndpointTemplate> out;
    try {
        const auto doc = nlohmann::json::parse(text);
        if (!doc.is_object()) throw Error(ErrorCode::Config, "endpoint file must map service ids to templates");
        for (const auto& [service, row] : doc.items()) {
            if (!row.contains("mutating") || !row["mutating"].is_boolean())
                throw Error(ErrorCode::Config, "endpoint for " + service + " must declare \"mutating\": false");
            EndpointTemplate t;
            t.service = service;
            t.id = row.value("id", service);
            t.method = row.value("method", std::string("GET"));
            t.url_template = row.at("url_template").get<std::string>();
            if (row.contains("headers"))
                for (const auto& [name, value] : row["headers"].items()) t.headers.emplace_back(name, value.get<std::string>());
            t.body_template = row.value("body", std::string{});
            t.success_codes = row.value("success_codes", std::vector<int>{200});
            t.invalid_body_markers = row.value("invalid_body_markers", std::vector<std::string>{});
            t.token_grant = row.value("token_grant", false);
            t.mutating = row["mutating"].get<bool>();
            out.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("bad endpoint file: ") + e.what());
    }
    return EndpointSet(std::move(out));
}

EndpointSet EndpointSet::load(const std::filesystem::path& path) {
    return from_json_text(read_text(path, "endpoint file"));
}

const EndpointTemplate* EndpointSet::find(std::string_view service) const {
    const auto it = std::find_if(templates_.begin(), templates_.end(), [&](const auto& t) { return t.service == service; });
    return it == templates_.end() ? nullptr : &*it;
}

TransportRequest build_request(const EndpointTemplate& endpoint, const DetectedCredential& credential) {
    TransportRequest r;
    r.method = endpoint.method;
    r.url = fill(endpoint.url_template, credential, true);
    for (const auto& [name, value] : endpoint.headers) r.headers.emplace_back(name, fill(value, credential, false));
    r.body = fill(endpoint.body_template, credential, false);
    return r;
}

const char* to_string(ValidationStatus status) noexcept {
    switch (status) {
    case ValidationStatus::valid: return "valid";
    case ValidationStatus::invalid: return "invalid";
    case ValidationStatus::rate_limited: return "rate_limited";
    case ValidationStatus::network_error: return "network_error";
    case ValidationStatus::skipped_offline: return "skipped_offline";
    case ValidationStatus::error: return "error";
    }
    return "unknown";
}

ValidationStatus parse_validation_status(std::string_view text) {
    for (auto s : {ValidationStatus::valid, ValidationStatus::invalid, ValidationStatus::rate_limited,
                   ValidationStatus::network_error, ValidationStatus::skipped_offline, ValidationStatus::error})
        if (text == to_string(s)) return s;
    throw Error(ErrorCode::InvalidArgument, "unknown validation status '" + std::string(text) + "'");
}

RateLimiter::RateLimiter(double per_second)
    : interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / per_second))) {
    if (!(per_second > 0.0)) throw Error(ErrorCode::Config, "rate must be positive");
}

void RateLimiter::acquire(const std::string& service) {
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        auto& next = next_slot_[service];
        slot = std::max(now, next);
        next = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
}

ValidationOutcome validate(const DetectedCredential& credential, const EndpointSet& endpoints, Transport* transport,
                           const ValidationPolicy& policy, RateLimiter* limiter) {
    const EndpointTemplate* endpoint = endpoints.find(credential.service);
    if (!endpoint) throw Error(ErrorCode::NoEndpointTemplate, "no endpoint template for service " + credential.service);
    if (endpoint->token_grant) return validate_oauth_pair(credential, endpoints, transport, policy, limiter);
    return run_attempts(credential, *endpoint, transport, policy, limiter);
}

ValidationOutcome validate_oauth_pair(const DetectedCredential& credential, const EndpointSet& endpoints,
                                      Transport* transport, const ValidationPolicy& policy, RateLimiter* limiter) {
    if (!credential.factors.count(FactorRole::client_id) || !credential.factors.count(FactorRole::client_secret))
        throw Error(ErrorCode::InvalidArgument, "token validation needs a client id and a client secret");
    const EndpointTemplate* endpoint = endpoints.find(credential.service);
    if (!endpoint) throw Error(ErrorCode::NoEndpointTemplate, "no endpoint template for service " + credential.service);
    EndpointTemplate grant = *endpoint;
    grant.token_grant = true;
    return run_attempts(credential, grant, transport, policy, limiter);
}

std::vector<ValidationOutcome> run_validation_batch(std::span<const DetectedCredential> credentials,
                                                    const EndpointSet& endpoints, Transport* transport,
                                                    const ValidationPolicy& policy) {
    policy.validate();

    std::map<std::pair<std::string, FactorValues>, std::size_t> unique_index;
    std::vector<std::size_t> slot_of(credentials.size());
    std::vector<std::size_t> representatives;
    for (std::size_t i = 0; i < credentials.size(); ++i) {
        auto key = std::make_pair(credentials[i].service, factor_values(credentials[i]));
        auto [it, inserted] = unique_index.emplace(std::move(key), representatives.size());
        if (inserted) representatives.push_back(i);
        slot_of[i] = it->second;
    }

    std::vector<ValidationOutcome> unique_outcomes(representatives.size());
    RateLimiter limiter(policy.per_service_rate);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t u = next++; u < representatives.size(); u = next++) {
            const DetectedCredential& c = credentials[representatives[u]];
            try {
                unique_outcomes[u] = validate(c, endpoints, transport, policy, &limiter);
            } catch (const std::exception& e) {
                ValidationOutcome failed;
                failed.credential = c;
                failed.status = ValidationStatus::error;
                failed.detail = e.what();
                failed.checked_at = std::chrono::system_clock::now();
                unique_outcomes[u] = std::move(failed);
            }
        }
    };
    const std::size_t workers = std::min(policy.max_in_flight, representatives.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    std::vector<ValidationOutcome> out;
    out.reserve(credentials.size());
    for (std::size_t i = 0; i < credentials.size(); ++i) {
        ValidationOutcome o = unique_outcomes[slot_of[i]];
        o.credential = credentials[i];
        out.push_back(std::move(o));
    }
    return out;
}

} // namespace apkleak
