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
#include "apkleak/extraction.hpp"
#include "apkleak/ranking.hpp"
#include "apkleak/validation.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace apkleak {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

// Display form of a secret in artifacts: the report redaction unless
// `redacted` is false.
std::string display_value(std::string_view value, bool redacted);

// Artifact records. Every secret is written as a display value plus its
// fingerprint; raw values go to a separate vault file.
std::string candidate_record(const SecretCandidate& candidate, bool redacted);
std::string ranked_record(const RankedCandidate& ranked, bool redacted);
std::string detection_record(const DetectedCredential& credential, bool redacted);
std::string outcome_record(const ValidationOutcome& outcome, bool redacted);

// Records read back from an artifact. The `value` of every candidate or
// factor is the fingerprint; `labels` maps fingerprints to display values.
struct LoadedCandidates {
    std::vector<RankedCandidate> items; // score is zero for unranked files
    std::map<std::string, std::string> labels;
};

struct LoadedDetections {
    std::vector<DetectedCredential> items;
    std::map<std::string, std::string> labels;
};

struct LoadedOutcome {
    DetectedCredential credential; // fingerprinted
    ValidationStatus status = ValidationStatus::skipped_offline;
    std::optional<int> http_status;
};

// All loaders throw Error{InvalidArgument} naming the file and line on a
// malformed record, Error{Io} when the file cannot be read.
LoadedCandidates load_candidates(const std::filesystem::path& path);
LoadedDetections load_detections(const std::filesystem::path& path);
std::vector<LoadedOutcome> load_outcomes(const std::filesystem::path& path);

// Fingerprint -> raw value.
using Vault = std::map<std::string, std::string>;

std::filesystem::path vault_path_for(const std::filesystem::path& artifact);
Vault load_vault(const std::filesystem::path& path);
// Written with owner-only permissions.
void write_vault(const std::filesystem::path& path, const Vault& vault);

// Replaces fingerprints with raw values. Throws Error{InvalidArgument} when
// a fingerprint is missing from the vault.
void unseal(DetectedCredential& credential, const Vault& vault);
void unseal(SecretCandidate& candidate, const Vault& vault);

// Writes `lines` (each without newline) to a temporary file, then renames
// it over `path`.
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);
void write_text(const std::filesystem::path& path, std::string_view text);

} // namespace apkleak
