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

#include "apkleak/ingest.hpp"

#include "apkleak/dex.hpp"
#include "apkleak/text.hpp"
#include "apkleak/zip_archive.hpp"

#include <boost/regex.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <optional>

namespace fs = std::filesystem;

namespace apkleak {

namespace {

constexpr std::uintmax_t kMaxTextFileSize = 64u << 20;

std::optional<std::string> manifest_package(std::string_view manifest) {
    static const boost::regex package_attr(R"rx(<manifest\b[^>]*?\bpackage\s*=\s*"([^"]+)")rx");
    boost::match_results<std::string_view::const_iterator> m;
    if (boost::regex_search(manifest.begin(), manifest.end(), m, package_attr)) return m[1].str();
    return std::nullopt;
}

bool looks_like_text_xml(std::string_view bytes) {
    if (bytes.find('\0') != std::string_view::npos) return false;
    const auto first = bytes.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    return first != std::string_view::npos && bytes[first] == '<';
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool has_suffix(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool has_prefix(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

std::optional<UnitKind> classify_tree_path(const std::string& rel) {
    if (has_suffix(rel, ".smali")) return UnitKind::smali_text;
    if (rel == "AndroidManifest.xml") return UnitKind::manifest_text;
    if (has_prefix(rel, "res/") && has_suffix(rel, ".xml")) return UnitKind::resource_text;
    if (has_prefix(rel, "assets/")) {
        static constexpr std::array<std::string_view, 9> text_ext{
            ".json", ".properties", ".txt", ".xml", ".cfg", ".ini", ".conf", ".yaml", ".yml"};
        for (auto ext : text_ext)
            if (has_suffix(rel, ext)) return UnitKind::resource_text;
    }
    return std::nullopt;
}

bool is_classes_dex(const std::string& name) {
    static const boost::regex pattern(R"rx(classes\d*\.dex)rx");
    return boost::regex_match(name, pattern);
}

void scan_tree(const AppRef& app, const std::function<void(ScanUnit&&)>& visit, const WarningSink& warnings) {
    std::vector<std::pair<std::string, UnitKind>> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(app->source_path, ec), end; it != end; it.increment(ec)) {
        if (ec) {
            warn(warnings, app->package_id + ": directory walk error: " + ec.message());
            break;
        }
        if (!it->is_regular_file(ec)) continue;
        std::string rel = fs::relative(it->path(), app->source_path, ec).generic_string();
        if (ec) continue;
        if (auto kind = classify_tree_path(rel)) files.emplace_back(std::move(rel), *kind);
    }
    std::sort(files.begin(), files.end());

    for (auto& [rel, kind] : files) {
        const fs::path full = app->source_path / rel;
        try {
            if (fs::file_size(full) > kMaxTextFileSize) {
                warn(warnings, app->package_id + ": " + rel + ": skipped, file too large");
                continue;
            }
            const std::string content = read_file(full);
            if (content.find('\0') != std::string::npos) {
                warn(warnings, app->package_id + ": " + rel + ": skipped, binary content");
                continue;
            }
            visit(make_text_unit(app, rel, kind, content));
        } catch (const std::exception& e) {
            warn(warnings, app->package_id + ": " + rel + ": skipped: " + e.what());
        }
    }
}

void scan_archive(const AppRef& app, const std::function<void(ScanUnit&&)>& visit, const WarningSink& warnings) {
    const ZipArchive zip = ZipArchive::open(app->source_path);
    std::vector<const ZipEntry*> wanted;
    for (const auto& e : zip.entries())
        if (is_classes_dex(e.name) || e.name == "AndroidManifest.xml") wanted.push_back(&e);
    std::sort(wanted.begin(), wanted.end(), [](auto* a, auto* b) { return a->name < b->name; });

    for (const ZipEntry* entry : wanted) {
        try {
            const auto bytes = zip.read(*entry);
            if (entry->name == "AndroidManifest.xml") {
                const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
                // Binary AXML is the normal case for built APKs and is not decoded.
                if (looks_like_text_xml(text))
                    visit(make_text_unit(app, entry->name, UnitKind::manifest_text, text));
                continue;
            }
            const DexStringPool pool = parse_dex_string_pool(bytes);
            if (!pool.malformed.empty())
                warn(warnings, app->package_id + ": " + entry->name + ": " +
                                   std::to_string(pool.malformed.size()) + " malformed MUTF-8 string(s)");
            ScanUnit unit;
            unit.app = app;
            unit.rel_path = entry->name;
            unit.kind = UnitKind::dex_string_pool;
            unit.lines.reserve(pool.entries.size());
            for (std::size_t i = 0; i < pool.entries.size(); ++i)
                unit.lines.push_back(Line{static_cast<std::uint32_t>(i + 1), pool.entries[i]});
            visit(std::move(unit));
        } catch (const std::exception& e) {
            warn(warnings, app->package_id + ": " + entry->name + ": skipped: " + e.what());
        }
    }
}

} // namespace

const char* to_string(SourceKind kind) noexcept {
    return kind == SourceKind::apk_archive ? "apk_archive" : "smali_tree";
}

const char* to_string(UnitKind kind) noexcept {
    switch (kind) {
    case UnitKind::smali_text: return "smali_text";
    case UnitKind::manifest_text: return "manifest_text";
    case UnitKind::dex_string_pool: return "dex_string_pool";
    case UnitKind::resource_text: return "resource_text";
    }
    return "unknown";
}

AppRef make_app_ref(std::string package_id, std::string dataset_tag) {
    auto app = std::make_shared<AppArtifact>();
    app->package_id = std::move(package_id);
    app->dataset_tag = std::move(dataset_tag);
    return app;
}

ScanUnit make_text_unit(AppRef app, std::string rel_path, UnitKind kind, std::string_view text) {
    ScanUnit unit;
    unit.app = std::move(app);
    unit.rel_path = std::move(rel_path);
    unit.kind = kind;
    auto lines = split_lines(text);
    unit.lines.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i)
        unit.lines.push_back(Line{static_cast<std::uint32_t>(i + 1), std::move(lines[i])});
    return unit;
}

AppArtifact open_app(const fs::path& path, const std::string& dataset_tag) {
    if (dataset_tag.empty()) throw Error(ErrorCode::InvalidArgument, "dataset tag must not be empty");
    std::error_code ec;
    const auto status = fs::status(path, ec);
    if (ec || !fs::exists(status)) throw Error(ErrorCode::Io, "no such file or directory: " + path.string());

    AppArtifact app;
    app.dataset_tag = dataset_tag;
    app.source_path = path;

    if (fs::is_directory(status)) {
        app.source_kind = SourceKind::smali_tree;
        const fs::path manifest = path / "AndroidManifest.xml";
        if (fs::is_regular_file(manifest, ec)) {
            const std::string text = read_file(manifest);
            if (looks_like_text_xml(text))
                if (auto pkg = manifest_package(text)) app.package_id = *pkg;
        }
        if (app.package_id.empty()) {
            fs::path trimmed = path;
            if (!trimmed.has_filename()) trimmed = trimmed.parent_path();
            app.package_id = fs::absolute(trimmed).lexically_normal().filename().string();
        }
    } else if (fs::is_regular_file(status) && has_zip_magic(path)) {
        app.source_kind = SourceKind::apk_archive;
        const ZipArchive zip = ZipArchive::open(path);
        for (const auto& e : zip.entries()) {
            if (e.name != "AndroidManifest.xml") continue;
            try {
                const auto bytes = zip.read(e);
                const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
                if (looks_like_text_xml(text))
                    if (auto pkg = manifest_package(text)) app.package_id = *pkg;
            } catch (const Error&) {
                // Unreadable manifest: fall back to the file name.
            }
        }
        if (app.package_id.empty()) app.package_id = path.stem().string();
    } else {
        throw Error(ErrorCode::NotAnApp, path.string() + " is neither a ZIP archive nor a directory");
    }

    if (app.package_id.empty()) throw Error(ErrorCode::NotAnApp, "cannot derive a package id for " + path.string());
    return app;
}

void for_each_scan_unit(const AppRef& app, const std::function<void(ScanUnit&&)>& visit,
                        const WarningSink& warnings) {
    if (!app) throw Error(ErrorCode::InvalidArgument, "null app");
    if (app->source_kind == SourceKind::smali_tree)
        scan_tree(app, visit, warnings);
    else
        scan_archive(app, visit, warnings);
}

std::vector<ScanUnit> enumerate_scan_units(const AppRef& app, const WarningSink& warnings) {
    std::vector<ScanUnit> units;
    for_each_scan_unit(app, [&](ScanUnit&& u) { units.push_back(std::move(u)); }, warnings);
    return units;
}

} // namespace apkleak
