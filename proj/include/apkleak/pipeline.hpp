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

#include "apkleak/analytics.hpp"
#include "apkleak/detection.hpp"
#include "apkleak/extraction.hpp"
#include "apkleak/ranking.hpp"
#include "apkleak/validation.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace apkleak {

struct DatasetSpec {
    std::string tag;
    std::filesystem::path root;
};

struct PipelineConfig {
    KeywordConfig keywords;
    SampleSpec sample;
    double confidence = 0.95;
    // Empty paths select the built-in tables.
    std::filesystem::path patterns_path;
    std::filesystem::path endpoints_path;
    std::filesystem::path dictionary_path = std::filesystem::path(APKLEAK_DATA_DIR) / "words.txt";
    ValidationPolicy validation;
    std::vector<DatasetSpec> datasets;
    std::vector<std::string> tag_order;
    // Tags forming the second dataset in the overlap table. Empty: the
    // latest tag.
    std::vector<std::string> dataset_b;
    std::size_t min_shared_apps = 2;
    std::filesystem::path output_dir = "apkleak-out";
    bool redact = true;
    bool csv = false;
    std::size_t scan_threads = 0; // 0: hardware concurrency

    // JSON config; relative paths resolve against the file's directory.
    // Throws Error{Config} or Error{Io}.
    static PipelineConfig load(const std::filesystem::path& path);

    // Referenced files and dataset roots must exist. Throws Error{Config}.
    void validate() const;

    PatternSet patterns() const;
    EndpointSet endpoints() const;
    Dictionary dictionary() const;
};

struct AppInput {
    std::filesystem::path path;
    std::string tag;
};

// A directory that looks like a disassembled app (manifest, smali/ or
// *.smali at top level) is one app; any other directory contributes its
// children. Throws Error{Io} for a missing path.
std::vector<AppInput> expand_input(const std::filesystem::path& path, const std::string& tag);

// Explicit inputs under `tag`, else every configured dataset root.
std::vector<AppInput> resolve_inputs(const PipelineConfig& config, const std::vector<std::filesystem::path>& inputs,
                                     const std::string& tag);

struct StageResult {
    std::size_t records = 0;
    std::size_t apps = 0;
    std::size_t skipped_apps = 0;
    std::vector<std::filesystem::path> written;
};

StageResult run_scan(const PipelineConfig& config, const std::vector<AppInput>& apps,
                     const std::filesystem::path& out, const WarningSink& warnings = {});
StageResult run_rank(const PipelineConfig& config, const std::filesystem::path& candidates,
                     const std::filesystem::path& out, const WarningSink& warnings = {});

struct SampleResult : StageResult {
    std::size_t population = 0;
    double margin_of_error = 0.0;
};

SampleResult run_sample(const PipelineConfig& config, const std::filesystem::path& ranked,
                        const std::filesystem::path& out, const WarningSink& warnings = {});
StageResult run_detect(const PipelineConfig& config, const std::vector<AppInput>& apps,
                       const std::filesystem::path& out, const WarningSink& warnings = {});

struct ValidationSummary : StageResult {
    std::map<ValidationStatus, std::size_t> by_status;
    std::size_t transport_calls = 0;
    bool live = false;
};

// Fixture responses when `fixtures` is set; a live HTTPS transport when the
// policy is online; otherwise every outcome is skipped_offline.
ValidationSummary run_validate(const PipelineConfig& config, const std::filesystem::path& detections,
                               const std::optional<std::filesystem::path>& fixtures,
                               const std::filesystem::path& out, const WarningSink& warnings = {});

struct ReportInputs {
    std::vector<std::filesystem::path> detections;
    std::optional<std::filesystem::path> outcomes;
    std::optional<std::filesystem::path> candidates;
};

// report.json, report.txt and lifespan.svg (plus CSV tables when
// `config.csv`) under `out_dir`. Byte-identical for identical inputs.
StageResult run_report(const PipelineConfig& config, const ReportInputs& inputs, const std::filesystem::path& out_dir,
                       const WarningSink& warnings = {});

} // namespace apkleak
