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

#include "apkleak/apkleak.h"

#include "apkleak/dex.hpp"
#include "apkleak/pipeline.hpp"

#include <cstring>
#include <optional>
#include <sstream>

using namespace apkleak;

struct apkleak_context {
    PipelineConfig config;
    apkleak_log_fn log = nullptr;
    void* log_user = nullptr;
    std::optional<Dictionary> dictionary;

    WarningSink sink() const {
        if (!log) return {};
        return [fn = log, user = log_user](std::string_view m) {
            const std::string s(m);
            fn(user, s.c_str());
        };
    }
};

struct apkleak_dex_pool {
    DexStringPool pool;
};

namespace {

thread_local std::string last_error;

apkleak_status status_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return APKLEAK_E_INVALID_ARGUMENT;
    case ErrorCode::Io: return APKLEAK_E_IO;
    case ErrorCode::NotAnApp: return APKLEAK_E_NOT_AN_APP;
    case ErrorCode::CorruptArchive: return APKLEAK_E_CORRUPT_ARCHIVE;
    case ErrorCode::BadMagic: return APKLEAK_E_BAD_MAGIC;
    case ErrorCode::TruncatedPool: return APKLEAK_E_TRUNCATED_POOL;
    case ErrorCode::EmptyString: return APKLEAK_E_EMPTY_STRING;
    case ErrorCode::BadConfidence: return APKLEAK_E_BAD_CONFIDENCE;
    case ErrorCode::SampleTooLarge: return APKLEAK_E_SAMPLE_TOO_LARGE;
    case ErrorCode::RedactionTooWide: return APKLEAK_E_REDACTION_TOO_WIDE;
    case ErrorCode::NoEndpointTemplate: return APKLEAK_E_NO_ENDPOINT_TEMPLATE;
    case ErrorCode::MissingTagOrder: return APKLEAK_E_MISSING_TAG_ORDER;
    case ErrorCode::Config: return APKLEAK_E_CONFIG;
    case ErrorCode::Network: return APKLEAK_E_NETWORK;
    }
    return APKLEAK_E_INTERNAL;
}

apkleak_status fail(apkleak_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
apkleak_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return APKLEAK_OK;
    } catch (const Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(APKLEAK_E_IO, e.what());
    } catch (const std::exception& e) {
        return fail(APKLEAK_E_INTERNAL, e.what());
    } catch (...) {
        return fail(APKLEAK_E_INTERNAL, "unknown failure");
    }
}

std::vector<std::filesystem::path> paths_of(const char* const* items, size_t n) {
    std::vector<std::filesystem::path> out;
    for (size_t i = 0; i < n; ++i) {
        if (!items || !items[i]) throw Error(ErrorCode::InvalidArgument, "null input path");
        out.emplace_back(items[i]);
    }
    return out;
}

void require(const void* p, const char* what) {
    if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(ErrorCode::InvalidArgument, "option " + key + " expects true or false");
}

std::vector<std::string> parse_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        T out{};
        if constexpr (std::is_floating_point_v<T>)
            out = static_cast<T>(std::stod(v, &used));
        else
            out = static_cast<T>(std::stoull(v, &used));
        if (used != v.size() || (!std::is_floating_point_v<T> && !v.empty() && v[0] == '-')) throw std::invalid_argument(v);
        return out;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidArgument, "option " + key + " expects a number, got '" + v + "'");
    }
}

} // namespace

extern "C" {

const char* apkleak_version(void) { return "0.3.0"; }

const char* apkleak_status_string(apkleak_status status) {
    switch (status) {
    case APKLEAK_OK: return "ok";
    case APKLEAK_E_INVALID_ARGUMENT: return "invalid argument";
    case APKLEAK_E_IO: return "i/o error";
    case APKLEAK_E_NOT_AN_APP: return "not an app";
    case APKLEAK_E_CORRUPT_ARCHIVE: return "corrupt archive";
    case APKLEAK_E_BAD_MAGIC: return "bad dex magic";
    case APKLEAK_E_TRUNCATED_POOL: return "truncated string pool";
    case APKLEAK_E_EMPTY_STRING: return "empty string";
    case APKLEAK_E_BAD_CONFIDENCE: return "bad confidence";
    case APKLEAK_E_SAMPLE_TOO_LARGE: return "sample too large";
    case APKLEAK_E_REDACTION_TOO_WIDE: return "redaction too wide";
    case APKLEAK_E_NO_ENDPOINT_TEMPLATE: return "no endpoint template";
    case APKLEAK_E_MISSING_TAG_ORDER: return "missing tag order";
    case APKLEAK_E_CONFIG: return "configuration error";
    case APKLEAK_E_NETWORK: return "network error";
    case APKLEAK_E_BUFFER_TOO_SMALL: return "buffer too small";
    case APKLEAK_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* apkleak_last_error(void) { return last_error.c_str(); }

apkleak_status apkleak_context_create(const char* config_path, apkleak_context** out) {
    if (!out) return fail(APKLEAK_E_INVALID_ARGUMENT, "out must not be null");
    *out = nullptr;
    return guarded([&] {
        auto ctx = std::make_unique<apkleak_context>();
        if (config_path) ctx->config = PipelineConfig::load(config_path);
        *out = ctx.release();
    });
}

void apkleak_context_destroy(apkleak_context* ctx) { delete ctx; }

void apkleak_context_set_log(apkleak_context* ctx, apkleak_log_fn fn, void* user_data) {
    if (!ctx) return;
    ctx->log = fn;
    ctx->log_user = user_data;
}

apkleak_status apkleak_set_option(apkleak_context* ctx, const char* key, const char* value) {
    return guarded([&] {
        require(ctx, "ctx");
        require(key, "key");
        require(value, "value");
        const std::string k(key), v(value);
        PipelineConfig next = ctx->config;
        if (k == "seed") next.sample.seed = parse_number<std::uint64_t>(k, v);
        else if (k == "sample_size") next.sample.sample_size = parse_number<std::size_t>(k, v);
        else if (k == "include_numeric_only") next.sample.include_numeric_only = parse_bool(k, v);
        else if (k == "confidence") next.confidence = parse_number<double>(k, v);
        else if (k == "offline") next.validation.offline = parse_bool(k, v);
        else if (k == "redact") next.redact = parse_bool(k, v);
        else if (k == "csv") next.csv = parse_bool(k, v);
        else if (k == "output_dir") next.output_dir = v;
        else if (k == "tag_order") next.tag_order = parse_list(v);
        else if (k == "dataset_b") next.dataset_b = parse_list(v);
        else if (k == "min_shared_apps") next.min_shared_apps = parse_number<std::size_t>(k, v);
        else if (k == "max_in_flight") next.validation.max_in_flight = parse_number<std::size_t>(k, v);
        else if (k == "per_service_rate") next.validation.per_service_rate = parse_number<double>(k, v);
        else if (k == "scan_threads") next.scan_threads = parse_number<std::size_t>(k, v);
        else if (k == "dictionary") next.dictionary_path = v;
        else if (k == "patterns") next.patterns_path = v;
        else if (k == "endpoints") next.endpoints_path = v;
        else throw Error(ErrorCode::InvalidArgument, "unknown option '" + k + "'");
        next.validate();
        if (k == "dictionary") ctx->dictionary.reset();
        ctx->config = std::move(next);
    });
}

apkleak_status apkleak_scan(apkleak_context* ctx, const char* const* inputs, size_t n_inputs, const char* tag,
                            const char* out_path, size_t* count) {
    return guarded([&] {
        require(ctx, "ctx");
        require(out_path, "out_path");
        const auto apps = resolve_inputs(ctx->config, paths_of(inputs, n_inputs), tag ? tag : "");
        const auto r = run_scan(ctx->config, apps, out_path, ctx->sink());
        if (count) *count = r.records;
    });
}

apkleak_status apkleak_rank(apkleak_context* ctx, const char* candidates_path, const char* out_path, size_t* count) {
    return guarded([&] {
        require(ctx, "ctx");
        require(candidates_path, "candidates_path");
        require(out_path, "out_path");
        const auto r = run_rank(ctx->config, candidates_path, out_path, ctx->sink());
        if (count) *count = r.records;
    });
}

apkleak_status apkleak_sample(apkleak_context* ctx, const char* ranked_path, const char* out_path, size_t* count,
                              double* margin) {
    return guarded([&] {
        require(ctx, "ctx");
        require(ranked_path, "ranked_path");
        require(out_path, "out_path");
        const auto r = run_sample(ctx->config, ranked_path, out_path, ctx->sink());
        if (count) *count = r.records;
        if (margin) *margin = r.margin_of_error;
    });
}

apkleak_status apkleak_detect(apkleak_context* ctx, const char* const* inputs, size_t n_inputs, const char* tag,
                              const char* out_path, size_t* count) {
    return guarded([&] {
        require(ctx, "ctx");
        require(out_path, "out_path");
        const auto apps = resolve_inputs(ctx->config, paths_of(inputs, n_inputs), tag ? tag : "");
        const auto r = run_detect(ctx->config, apps, out_path, ctx->sink());
        if (count) *count = r.records;
    });
}

apkleak_status apkleak_validate(apkleak_context* ctx, const char* detections_path, const char* fixtures_path,
                                const char* out_path, apkleak_validation_summary* summary) {
    return guarded([&] {
        require(ctx, "ctx");
        require(detections_path, "detections_path");
        require(out_path, "out_path");
        std::optional<std::filesystem::path> fixtures;
        if (fixtures_path) fixtures = fixtures_path;
        const auto s = run_validate(ctx->config, detections_path, fixtures, out_path, ctx->sink());
        if (summary) {
            const auto n = [&](ValidationStatus st) {
                const auto it = s.by_status.find(st);
                return it == s.by_status.end() ? std::size_t{0} : it->second;
            };
            *summary = apkleak_validation_summary{s.records,
                                                  n(ValidationStatus::valid),
                                                  n(ValidationStatus::invalid),
                                                  n(ValidationStatus::rate_limited),
                                                  n(ValidationStatus::network_error),
                                                  n(ValidationStatus::skipped_offline),
                                                  n(ValidationStatus::error),
                                                  s.transport_calls,
                                                  s.live ? 1 : 0};
        }
    });
}

apkleak_status apkleak_report(apkleak_context* ctx, const char* const* detection_paths, size_t n_detection_paths,
                              const char* outcomes_path, const char* candidates_path, const char* out_dir) {
    return guarded([&] {
        require(ctx, "ctx");
        require(out_dir, "out_dir");
        ReportInputs in;
        in.detections = paths_of(detection_paths, n_detection_paths);
        if (in.detections.empty()) throw Error(ErrorCode::InvalidArgument, "report needs at least one detection file");
        if (outcomes_path) in.outcomes = outcomes_path;
        if (candidates_path) in.candidates = candidates_path;
        run_report(ctx->config, in, out_dir, ctx->sink());
    });
}

apkleak_status apkleak_margin_of_error(uint64_t n, double confidence, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = margin_of_error(n, confidence);
    });
}

apkleak_status apkleak_diversity_score(const char* value, double* out) {
    return guarded([&] {
        require(value, "value");
        require(out, "out");
        *out = diversity_score(value);
    });
}

apkleak_status apkleak_word_score(apkleak_context* ctx, const char* value, double* out) {
    return guarded([&] {
        require(ctx, "ctx");
        require(value, "value");
        require(out, "out");
        if (!ctx->dictionary) ctx->dictionary = ctx->config.dictionary();
        *out = word_score(value, *ctx->dictionary);
    });
}

apkleak_status apkleak_redact(const char* value, size_t keep_prefix, size_t keep_suffix, char* buf, size_t capacity,
                              size_t* needed) {
    std::string result;
    const apkleak_status st = guarded([&] {
        require(value, "value");
        result = redact(value, keep_prefix, keep_suffix);
    });
    if (st != APKLEAK_OK) return st;
    if (needed) *needed = result.size() + 1;
    if (!buf || capacity < result.size() + 1)
        return fail(APKLEAK_E_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(result.size() + 1) + " bytes");
    std::memcpy(buf, result.c_str(), result.size() + 1);
    return APKLEAK_OK;
}

apkleak_status apkleak_dex_pool_parse(const uint8_t* data, size_t size, apkleak_dex_pool** out) {
    if (!out) return fail(APKLEAK_E_INVALID_ARGUMENT, "out must not be null");
    *out = nullptr;
    return guarded([&] {
        if (!data && size) throw Error(ErrorCode::InvalidArgument, "data must not be null");
        auto pool = std::make_unique<apkleak_dex_pool>();
        pool->pool = parse_dex_string_pool(std::span<const std::uint8_t>(data, size));
        *out = pool.release();
    });
}

size_t apkleak_dex_pool_size(const apkleak_dex_pool* pool) { return pool ? pool->pool.entries.size() : 0; }

size_t apkleak_dex_pool_malformed_count(const apkleak_dex_pool* pool) {
    return pool ? pool->pool.malformed.size() : 0;
}

apkleak_status apkleak_dex_pool_entry(const apkleak_dex_pool* pool, size_t index, const char** utf8, size_t* length) {
    if (!pool || !utf8) return fail(APKLEAK_E_INVALID_ARGUMENT, "pool and utf8 must not be null");
    if (index >= pool->pool.entries.size()) return fail(APKLEAK_E_INVALID_ARGUMENT, "index out of range");
    const std::string& s = pool->pool.entries[index];
    *utf8 = s.c_str();
    if (length) *length = s.size();
    return APKLEAK_OK;
}

void apkleak_dex_pool_destroy(apkleak_dex_pool* pool) { delete pool; }

} // extern "C"
