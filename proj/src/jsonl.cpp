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

#include "apkleak/jsonl.hpp"

#include "apkleak/text.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <ctime>
#include <fstream>

namespace apkleak {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

template <typename Fn>
void for_each_record(const fs::path& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            fn(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidArgument,
                        path.string() + ":" + std::to_string(number) + ": malformed record: " + e.what());
        } catch (const Error& e) {
            throw Error(e.code(), path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

ojson factors_json(const DetectedCredential& c, bool redacted) {
    ojson factors = ojson::array();
    for (const auto& [role, ev] : c.factors) {
        factors.push_back({{"role", to_string(role)},
                           {"value", display_value(ev.value, redacted)},
                           {"fingerprint", sha256_hex(ev.value)},
                           {"path", ev.rel_path},
                           {"line", ev.line}});
    }
    return factors;
}

DetectedCredential credential_from(const nlohmann::json& j, std::map<std::string, std::string>* labels) {
    DetectedCredential c;
    c.service = j.at("service").get<std::string>();
    c.dataset_tag = j.at("dataset").get<std::string>();
    c.app = make_app_ref(j.at("app").get<std::string>(), c.dataset_tag);
    for (const auto& f : j.at("factors")) {
        FactorEvidence ev{f.at("fingerprint").get<std::string>(), f.at("path").get<std::string>(),
                          f.at("line").get<std::uint32_t>()};
        if (labels) labels->emplace(ev.value, f.at("value").get<std::string>());
        c.factors[parse_factor_role(f.at("role").get<std::string>())] = std::move(ev);
    }
    return c;
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const std::string& package_of(const AppRef& app) {
    static const std::string unknown;
    return app ? app->package_id : unknown;
}

const std::string& dataset_of(const AppRef& app) {
    static const std::string unknown;
    return app ? app->dataset_tag : unknown;
}

void write_file(const fs::path& path, std::string_view text, bool owner_only);
std::string joined(const std::vector<std::string>& lines);

} // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::InvalidArgument, "SHA-256 failed");
    return hex_encode(std::string_view(reinterpret_cast<const char*>(digest), length));
}

std::string display_value(std::string_view value, bool redacted) {
    return redacted ? redact_for_report(value) : std::string(value);
}

std::string candidate_record(const SecretCandidate& c, bool redacted) {
    ojson j{{"app", package_of(c.app)},
            {"dataset", dataset_of(c.app)},
            {"path", c.rel_path},
            {"line", c.line},
            {"var", c.variable_name},
            {"value", display_value(c.value, redacted)},
            {"fingerprint", sha256_hex(c.value)},
            {"numeric_only", c.numeric_only}};
    return j.dump();
}

std::string ranked_record(const RankedCandidate& r, bool redacted) {
    auto j = ojson::parse(candidate_record(r.candidate, redacted));
    j["diversity"] = r.score.diversity;
    j["words"] = r.score.words;
    j["total"] = r.score.total;
    return j.dump();
}

std::string detection_record(const DetectedCredential& c, bool redacted) {
    ojson j{{"app", package_of(c.app)},
            {"dataset", c.dataset_tag.empty() ? dataset_of(c.app) : c.dataset_tag},
            {"service", c.service},
            {"factors", factors_json(c, redacted)}};
    return j.dump();
}

std::string outcome_record(const ValidationOutcome& o, bool redacted) {
    auto j = ojson::parse(detection_record(o.credential, redacted));
    j["status"] = to_string(o.status);
    j["http_status"] = o.http_status ? ojson(*o.http_status) : ojson(nullptr);
    // Only real requests carry a timestamp, so offline runs stay reproducible.
    j["checked_at"] = o.attempts > 0 ? ojson(iso8601_utc(o.checked_at)) : ojson(nullptr);
    j["endpoint"] = o.endpoint_id;
    j["attempts"] = o.attempts;
    if (!o.detail.empty()) j["detail"] = o.detail;
    return j.dump();
}

LoadedCandidates load_candidates(const fs::path& path) {
    LoadedCandidates out;
    for_each_record(path, [&](const nlohmann::json& j) {
        RankedCandidate r;
        SecretCandidate& c = r.candidate;
        c.app = make_app_ref(j.at("app").get<std::string>(), j.at("dataset").get<std::string>());
        c.rel_path = j.at("path").get<std::string>();
        c.line = j.at("line").get<std::uint32_t>();
        c.variable_name = j.at("var").get<std::string>();
        c.value = j.at("fingerprint").get<std::string>();
        c.numeric_only = j.at("numeric_only").get<bool>();
        if (j.contains("total")) {
            r.score.diversity = j.at("diversity").get<double>();
            r.score.words = j.at("words").get<double>();
            r.score.total = j.at("total").get<double>();
        }
        out.labels.emplace(c.value, j.at("value").get<std::string>());
        out.items.push_back(std::move(r));
    });
    return out;
}

LoadedDetections load_detections(const fs::path& path) {
    LoadedDetections out;
    for_each_record(path, [&](const nlohmann::json& j) { out.items.push_back(credential_from(j, &out.labels)); });
    return out;
}

std::vector<LoadedOutcome> load_outcomes(const fs::path& path) {
    std::vector<LoadedOutcome> out;
    for_each_record(path, [&](const nlohmann::json& j) {
        LoadedOutcome o;
        o.credential = credential_from(j, nullptr);
        o.status = parse_validation_status(j.at("status").get<std::string>());
        if (j.contains("http_status") && !j["http_status"].is_null()) o.http_status = j["http_status"].get<int>();
        out.push_back(std::move(o));
    });
    return out;
}

fs::path vault_path_for(const fs::path& artifact) {
    fs::path p = artifact;
    p.replace_extension(".vault.jsonl");
    return p;
}

Vault load_vault(const fs::path& path) {
    Vault vault;
    for_each_record(path, [&](const nlohmann::json& j) {
        vault.emplace(j.at("fingerprint").get<std::string>(), j.at("value").get<std::string>());
    });
    return vault;
}

void write_vault(const fs::path& path, const Vault& vault) {
    std::vector<std::string> lines;
    lines.reserve(vault.size());
    for (const auto& [fingerprint, value] : vault)
        lines.push_back(ojson{{"fingerprint", fingerprint}, {"value", value}}.dump());
    write_file(path, joined(lines), true);
}

void unseal(DetectedCredential& credential, const Vault& vault) {
    for (auto& [role, ev] : credential.factors) {
        const auto it = vault.find(ev.value);
        if (it == vault.end()) throw Error(ErrorCode::InvalidArgument, "fingerprint " + ev.value + " is not in the vault");
        ev.value = it->second;
    }
}

void unseal(SecretCandidate& candidate, const Vault& vault) {
    const auto it = vault.find(candidate.value);
    if (it == vault.end())
        throw Error(ErrorCode::InvalidArgument, "fingerprint " + candidate.value + " is not in the vault");
    candidate.value = it->second;
}

namespace {

void write_file(const fs::path& path, std::string_view text, bool owner_only) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        if (owner_only) fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string joined(const std::vector<std::string>& lines) {
    std::string text;
    for (const auto& line : lines) {
        text += line;
        text += '\n';
    }
    return text;
}

} // namespace

void write_text(const fs::path& path, std::string_view text) { write_file(path, text, false); }

void write_lines(const fs::path& path, const std::vector<std::string>& lines) { write_file(path, joined(lines), false); }

} // namespace apkleak
