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

#include "apkleak/error.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace apkleak {

enum class SourceKind { apk_archive, smali_tree };

const char* to_string(SourceKind kind) noexcept;

struct AppArtifact {
    std::string package_id;
    std::string dataset_tag;
    std::filesystem::path source_path;
    SourceKind source_kind = SourceKind::smali_tree;
};

using AppRef = std::shared_ptr<const AppArtifact>;

// Lightweight reference used when records are reloaded from JSONL and the
// original source is not needed.
AppRef make_app_ref(std::string package_id, std::string dataset_tag);

enum class UnitKind { smali_text, manifest_text, dex_string_pool, resource_text };

const char* to_string(UnitKind kind) noexcept;

struct Line {
    std::uint32_t number = 0;
    std::string text;

    bool operator==(const Line&) const = default;
};

struct ScanUnit {
    AppRef app;
    std::string rel_path;
    UnitKind kind = UnitKind::smali_text;
    std::vector<Line> lines;
};

// Builds a unit from raw text; line numbers start at 1.
ScanUnit make_text_unit(AppRef app, std::string rel_path, UnitKind kind, std::string_view text);

// Infers source kind (directory -> smali tree; file with zip magic -> APK).
// The package id comes from a plain-text AndroidManifest.xml when present,
// else from the directory or file name.
// Throws Error{NotAnApp}, Error{CorruptArchive}, Error{Io}, Error{InvalidArgument}.
AppArtifact open_app(const std::filesystem::path& path, const std::string& dataset_tag);

// Units in lexicographic rel_path order. Per-entry failures are reported
// through `warnings` and the entry is skipped.
void for_each_scan_unit(const AppRef& app, const std::function<void(ScanUnit&&)>& visit,
                        const WarningSink& warnings = {});

std::vector<ScanUnit> enumerate_scan_units(const AppRef& app, const WarningSink& warnings = {});

} // namespace apkleak
