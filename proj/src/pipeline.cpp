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

#include "apkleak/pipeline.hpp"

#include "apkleak/ingest.hpp"
#include "apkleak/jsonl.hpp"
#include "apkleak/text.hpp"
#include "apkleak/zip_archive.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <thread>

namespace apkleak {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

fs::path resolve_against(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || p.empty() ? path : base / path;
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
}

bool looks_like_app_dir(const fs::path& dir) {
    if (fs::exists(dir / "AndroidManifest.xml") || fs::is_directory(dir / "smali")) return true;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".smali") return true;
    return false;
}

// Per-app results gathered off-thread and flushed in input order.
struct AppWork {
    AppRef app;
    std::vector<SecretCandidate> candidates;
    std::vector<DetectedCredential> detections;
    std::vector<std::string> warnings;
    bool skipped = false;
};

template <typename Body>
std::vector<AppWork> for_each_app(const PipelineConfig& config, const std::vector<AppInput>& apps, Body&& body) {
    std::vector<AppWork> work(apps.size());
    parallel_for(apps.size(), config.scan_threads, [&](std::size_t i) {
        AppWork& w = work[i];
        const auto sink = [&](std::string_view m) { w.warnings.push_back(apps[i].path.string() + ": " + std::string(m)); };
        try {
            w.app = std::make_shared<const AppArtifact>(open_app(apps[i].path, apps[i].tag));
            body(w, sink);
        } catch (const Error& e) {
            w.skipped = true;
            w.candidates.clear();
            w.detections.clear();
            sink(std::string("skipped: ") + e.what());
        }
    });
    return work;
}

void flush_warnings(const std::vector<AppWork>& work, const WarningSink& warnings) {
    for (const auto& w : work)
        for (const auto& m : w.warnings) warn(warnings, m);
}

Vault vault_of(const std::vector<SecretCandidate>& candidates) {
    Vault v;
    for (const auto& c : candidates) v.emplace(sha256_hex(c.value), c.value);
    return v;
}

void write_candidates(const std::vector<SecretCandidate>& items, const fs::path& out, bool redact, StageResult& r) {
    std::vector<std::string> lines;
    lines.reserve(items.size());
    for (const auto& c : items) lines.push_back(candidate_record(c, redact));
    write_lines(out, lines);
    write_vault(vault_path_for(out), vault_of(items));
    r.records = items.size();
    r.written = {out, vault_path_for(out)};
}

std::vector<RankedCandidate> load_unsealed(const fs::path& path) {
    auto loaded = load_candidates(path);
    const Vault vault = load_vault(vault_path_for(path));
    for (auto& r : loaded.items) unseal(r.candidate, vault);
    return std::move(loaded.items);
}

// ---- report helpers ----

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string label_for(const std::string& fingerprint, const std::map<std::string, std::string>& labels, bool redact) {
    const auto it = labels.find(fingerprint);
    std::string display = it != labels.end() ? it->second : fingerprint.substr(0, 12);
    if (redact && display.find("***") == std::string::npos) display = redact_for_report(display);
    return display;
}

std::string key_label(const std::vector<std::string>& fingerprints, const std::map<std::string, std::string>& labels,
                      bool redact) {
    std::string out;
    for (const auto& fp : fingerprints) {
        if (!out.empty()) out += ", ";
        out += label_for(fp, labels, redact);
    }
    return out;
}

std::vector<std::string> fingerprints_of(const DedupKey& key) {
    std::vector<std::string> out;
    for (const auto& [role, value] : key.factors) out.push_back(value);
    return out;
}

std::vector<std::string> short_ids(const std::vector<std::string>& fingerprints) {
    std::vector<std::string> out;
    for (const auto& fp : fingerprints) out.push_back(fp.substr(0, 12));
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

using Table = std::vector<std::vector<std::string>>;

// First row is the header. Numeric-looking cells are right-aligned.
std::string aligned(const Table& table) {
    std::vector<std::size_t> width;
    for (const auto& row : table)
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], utf8_length(row[c]));
        }
    const auto numeric = [](const std::string& s) {
        return !s.empty() && s.find_first_not_of("0123456789.-%") == std::string::npos;
    };
    std::string out;
    for (std::size_t r = 0; r < table.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < table[r].size(); ++c) {
            const std::string& cell = table[r][c];
            const std::string pad(width[c] - utf8_length(cell), ' ');
            if (c) line += "  ";
            line += (r > 0 && numeric(cell)) ? pad + cell : cell + pad;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t w : width) total += w;
            out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
        }
    }
    return out;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string as_csv(const Table& table) {
    std::string out;
    for (const auto& row : table) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_cell(row[c]);
        }
        out += "\n";
    }
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string lifespan_svg(const LifespanReport& report, const std::vector<std::string>& tag_order) {
    constexpr int width = 520, height = 320, left = 50, bottom = 270, top = 30;
    const std::size_t bins = report.histogram.size();
    std::uint64_t peak = 1;
    for (auto c : report.histogram) peak = std::max(peak, c);
    const double slot = static_cast<double>(width - left - 20) / static_cast<double>(std::max<std::size_t>(bins, 1));
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\">Credential life spans ("
        << xml_escape(tag_order.empty() ? "" : tag_order.front() + "-" + tag_order.back()) << ")</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << width - 10 << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < bins; ++i) {
        const double h = static_cast<double>(bottom - top - 20) * static_cast<double>(report.histogram[i]) /
                         static_cast<double>(peak);
        const double x = left + slot * static_cast<double>(i) + slot * 0.15;
        const double w = slot * 0.7;
        svg << "<rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(bottom - h, 1) << "\" width=\"" << fixed(w, 1)
            << "\" height=\"" << fixed(h, 1) << "\" fill=\"#4a78b0\"/>\n";
        svg << "<text x=\"" << fixed(x + w / 2, 1) << "\" y=\"" << fixed(bottom - h - 4, 1)
            << "\" text-anchor=\"middle\">" << report.histogram[i] << " (" << fixed(report.percentages[i], 1)
            << "%)</text>\n";
        svg << "<text x=\"" << fixed(x + w / 2, 1) << "\" y=\"" << bottom + 16 << "\" text-anchor=\"middle\">"
            << (i + 1) << (i == 0 ? " year" : " years") << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

// ---- config ----

PipelineConfig PipelineConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read config " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

    PipelineConfig c;
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.contains("keywords")) c.keywords.keywords = j["keywords"].get<std::vector<std::string>>();
        c.keywords.min_literal_length = j.value("min_literal_length", c.keywords.min_literal_length);
        c.keywords.case_insensitive = j.value("case_insensitive", c.keywords.case_insensitive);
        c.keywords.dex_adjacency = j.value("dex_adjacency", c.keywords.dex_adjacency);
        if (j.contains("sample")) {
            const auto& s = j["sample"];
            c.sample.sample_size = s.value("size", c.sample.sample_size);
            c.sample.include_numeric_only = s.value("include_numeric_only", c.sample.include_numeric_only);
            c.sample.seed = s.value("seed", c.sample.seed);
            c.confidence = s.value("confidence", c.confidence);
        }
        if (j.contains("patterns")) c.patterns_path = resolve_against(base, j["patterns"].get<std::string>());
        if (j.contains("endpoints")) c.endpoints_path = resolve_against(base, j["endpoints"].get<std::string>());
        if (j.contains("dictionary")) c.dictionary_path = resolve_against(base, j["dictionary"].get<std::string>());
        if (j.contains("validation")) {
            const auto& v = j["validation"];
            auto& p = c.validation;
            p.offline = v.value("offline", p.offline);
            p.max_in_flight = v.value("max_in_flight", p.max_in_flight);
            p.per_service_rate = v.value("per_service_rate", p.per_service_rate);
            p.timeout = std::chrono::milliseconds(v.value("timeout_ms", p.timeout.count()));
            p.max_retries_on_network_error = v.value("max_retries_on_network_error", p.max_retries_on_network_error);
            p.max_requeues_on_rate_limit = v.value("max_requeues_on_rate_limit", p.max_requeues_on_rate_limit);
            p.requeue_backoff = std::chrono::milliseconds(v.value("requeue_backoff_ms", p.requeue_backoff.count()));
        }
        if (j.contains("datasets"))
            for (const auto& d : j["datasets"])
                c.datasets.push_back({d.at("tag").get<std::string>(), resolve_against(base, d.at("root").get<std::string>())});
        c.tag_order = j.value("tag_order", c.tag_order);
        c.dataset_b = j.value("dataset_b", c.dataset_b);
        c.min_shared_apps = j.value("min_shared_apps", c.min_shared_apps);
        if (j.contains("output_dir")) c.output_dir = resolve_against(base, j["output_dir"].get<std::string>());
        c.csv = j.value("csv", c.csv);
        c.scan_threads = j.value("scan_threads", c.scan_threads);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, "bad config " + path.string() + ": " + e.what());
    }
    c.validate();
    return c;
}

void PipelineConfig::validate() const {
    keywords.validate();
    validation.validate();
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error(ErrorCode::Config, "confidence must lie in (0, 1)");
    const auto must_exist = [](const fs::path& p, const char* what) {
        if (!p.empty() && !fs::exists(p)) throw Error(ErrorCode::Config, std::string(what) + " not found: " + p.string());
    };
    must_exist(patterns_path, "pattern file");
    must_exist(endpoints_path, "endpoint file");
    must_exist(dictionary_path, "dictionary");
    for (const auto& d : datasets) {
        if (d.tag.empty()) throw Error(ErrorCode::Config, "dataset with an empty tag");
        must_exist(d.root, "dataset root");
    }
    if (min_shared_apps == 0) throw Error(ErrorCode::Config, "min_shared_apps must be positive");
}

PatternSet PipelineConfig::patterns() const {
    return patterns_path.empty() ? PatternSet::defaults() : PatternSet::load(patterns_path);
}

EndpointSet PipelineConfig::endpoints() const {
    return endpoints_path.empty() ? EndpointSet::defaults() : EndpointSet::load(endpoints_path);
}

Dictionary PipelineConfig::dictionary() const { return Dictionary::load(dictionary_path); }

// ---- inputs ----

std::vector<AppInput> expand_input(const fs::path& path, const std::string& tag) {
    if (!fs::exists(path)) throw Error(ErrorCode::Io, "input not found: " + path.string());
    if (!fs::is_directory(path) || looks_like_app_dir(path)) return {{path, tag}};
    std::vector<fs::path> children;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_directory())
            children.push_back(entry.path());
        else if (entry.is_regular_file() && (entry.path().extension() == ".apk" || has_zip_magic(entry.path())))
            children.push_back(entry.path());
    }
    std::sort(children.begin(), children.end());
    std::vector<AppInput> out;
    for (auto& c : children) out.push_back({std::move(c), tag});
    return out;
}

std::vector<AppInput> resolve_inputs(const PipelineConfig& config, const std::vector<fs::path>& inputs,
                                     const std::string& tag) {
    std::vector<AppInput> out;
    if (!inputs.empty()) {
        if (tag.empty()) throw Error(ErrorCode::InvalidArgument, "inputs need a dataset tag");
        for (const auto& p : inputs) {
            auto more = expand_input(p, tag);
            out.insert(out.end(), more.begin(), more.end());
        }
        return out;
    }
    for (const auto& d : config.datasets) {
        auto more = expand_input(d.root, d.tag);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

// ---- stages ----

StageResult run_scan(const PipelineConfig& config, const std::vector<AppInput>& apps, const fs::path& out,
                     const WarningSink& warnings) {
    auto work = for_each_app(config, apps, [&](AppWork& w, const WarningSink& sink) {
        for_each_scan_unit(
            w.app,
            [&](ScanUnit&& unit) {
                auto found = extract_candidates(unit, config.keywords, sink);
                std::move(found.begin(), found.end(), std::back_inserter(w.candidates));
            },
            sink);
    });
    flush_warnings(work, warnings);

    StageResult r;
    std::vector<SecretCandidate> all;
    for (auto& w : work) {
        w.skipped ? ++r.skipped_apps : ++r.apps;
        std::move(w.candidates.begin(), w.candidates.end(), std::back_inserter(all));
    }
    write_candidates(all, out, config.redact, r);
    return r;
}

StageResult run_rank(const PipelineConfig& config, const fs::path& candidates, const fs::path& out,
                     const WarningSink& warnings) {
    const Dictionary dictionary = config.dictionary();
    auto items = load_unsealed(candidates);
    std::vector<RankedCandidate> ranked;
    ranked.reserve(items.size());
    for (auto& item : items) {
        try {
            item.score = rank(item.candidate, dictionary);
            ranked.push_back(std::move(item));
        } catch (const Error& e) {
            warn(warnings, candidates.string() + ":" + item.candidate.rel_path + ": " + e.what());
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.score.total > b.score.total; });

    StageResult r;
    std::vector<std::string> lines;
    std::vector<SecretCandidate> plain;
    for (const auto& rc : ranked) {
        lines.push_back(ranked_record(rc, config.redact));
        plain.push_back(rc.candidate);
    }
    write_lines(out, lines);
    write_vault(vault_path_for(out), vault_of(plain));
    r.records = ranked.size();
    r.written = {out, vault_path_for(out)};
    return r;
}

SampleResult run_sample(const PipelineConfig& config, const fs::path& ranked, const fs::path& out,
                        const WarningSink& warnings) {
    const auto items = load_unsealed(ranked);
    const auto sample = weighted_sample(items, config.sample);
    SampleResult r;
    write_candidates(sample, out, config.redact, r);
    r.population = items.size();
    if (!sample.empty()) r.margin_of_error = margin_of_error(sample.size(), config.confidence);
    else warn(warnings, "empty sample");
    return r;
}

StageResult run_detect(const PipelineConfig& config, const std::vector<AppInput>& apps, const fs::path& out,
                       const WarningSink& warnings) {
    const PatternSet patterns = config.patterns();
    auto work = for_each_app(config, apps, [&](AppWork& w, const WarningSink& sink) {
        const auto units = enumerate_scan_units(w.app, sink);
        w.detections = detect_app(units, patterns, config.keywords, sink);
        for (auto& d : w.detections) d.dataset_tag = w.app->dataset_tag;
    });
    flush_warnings(work, warnings);

    StageResult r;
    std::vector<std::string> lines;
    Vault vault;
    for (const auto& w : work) {
        w.skipped ? ++r.skipped_apps : ++r.apps;
        for (const auto& d : w.detections) {
            lines.push_back(detection_record(d, config.redact));
            for (const auto& [role, ev] : d.factors) vault.emplace(sha256_hex(ev.value), ev.value);
        }
    }
    write_lines(out, lines);
    write_vault(vault_path_for(out), vault);
    r.records = lines.size();
    r.written = {out, vault_path_for(out)};
    return r;
}

ValidationSummary run_validate(const PipelineConfig& config, const fs::path& detections,
                               const std::optional<fs::path>& fixtures, const fs::path& out,
                               const WarningSink& warnings) {
    auto loaded = load_detections(detections);
    const Vault vault = load_vault(vault_path_for(detections));
    for (auto& d : loaded.items) unseal(d, vault);

    std::unique_ptr<Transport> transport;
    FixtureTransport* fixture = nullptr;
    if (fixtures) {
        auto f = FixtureTransport::load(*fixtures);
        fixture = f.get();
        transport = std::move(f);
    } else if (!config.validation.offline) {
        transport = std::make_unique<HttpsTransport>(config.validation);
    }

    const EndpointSet endpoints = config.endpoints();
    const auto outcomes = run_validation_batch(loaded.items, endpoints, transport.get(), config.validation);

    ValidationSummary s;
    s.live = transport && transport->is_live();
    std::vector<std::string> lines;
    for (const auto& o : outcomes) {
        lines.push_back(outcome_record(o, config.redact));
        ++s.by_status[o.status];
        if (o.status == ValidationStatus::error)
            warn(warnings, o.credential.service + ": " + o.detail);
    }
    write_lines(out, lines);
    s.records = outcomes.size();
    s.written = {out};
    s.transport_calls = fixture ? fixture->call_count() : 0;
    return s;
}

StageResult run_report(const PipelineConfig& config, const ReportInputs& inputs, const fs::path& out_dir,
                       const WarningSink& warnings) {
    std::vector<DetectedCredential> detections;
    std::map<std::string, std::string> labels;
    for (const auto& p : inputs.detections) {
        auto loaded = load_detections(p);
        std::move(loaded.items.begin(), loaded.items.end(), std::back_inserter(detections));
        labels.merge(loaded.labels);
    }

    // Exploitable population: detections whose latest outcome is valid.
    bool have_outcomes = false;
    std::set<DedupKey> valid;
    std::map<ValidationStatus, std::size_t> status_counts;
    if (inputs.outcomes) {
        have_outcomes = true;
        std::map<DedupKey, ValidationStatus> latest;
        for (const auto& o : load_outcomes(*inputs.outcomes)) {
            latest[dedup_key(o.credential)] = o.status;
            ++status_counts[o.status];
        }
        for (const auto& [key, status] : latest)
            if (status == ValidationStatus::valid) valid.insert(key);
    }
    std::vector<DetectedCredential> population;
    for (const auto& d : detections)
        if (!have_outcomes || valid.count(dedup_key(d))) population.push_back(d);

    // Dataset split.
    std::set<std::string> tags;
    for (const auto& d : population) tags.insert(d.dataset_tag);
    std::set<std::string> b_tags(config.dataset_b.begin(), config.dataset_b.end());
    if (b_tags.empty()) {
        if (!config.tag_order.empty())
            b_tags.insert(config.tag_order.back());
        else if (!tags.empty())
            b_tags.insert(*tags.rbegin());
    }
    std::vector<DetectedCredential> set_a, set_b;
    for (const auto& d : population) (b_tags.count(d.dataset_tag) ? set_b : set_a).push_back(d);
    std::vector<std::string> a_list, b_list;
    for (const auto& t : tags) (b_tags.count(t) ? b_list : a_list).push_back(t);

    const auto summary = dedup_and_overlap(set_a, set_b);
    const auto apps = per_app_counts(population);
    const auto shared = shared_credentials(population, config.min_shared_apps);
    std::vector<SecretCandidate> candidates;
    if (inputs.candidates)
        for (auto& rc : load_candidates(*inputs.candidates).items) candidates.push_back(std::move(rc.candidate));
    const auto files = multi_secret_files(candidates, population);

    std::optional<LifespanReport> spans;
    if (config.tag_order.size() >= 2) {
        std::set<ValueKey> valid_values;
        for (const auto& d : population)
            if (have_outcomes) valid_values.insert(value_key(d));
        spans = lifespan(population, config.tag_order, valid_values);
    } else {
        warn(warnings, "life spans skipped: supply an ordered list of at least two dataset tags");
    }

    const bool redact = true;
    ojson j;
    j["population"] = have_outcomes ? "valid" : "detected";
    j["datasets"] = {{"a", a_list}, {"b", b_list}};
    if (have_outcomes) {
        ojson counts = ojson::object();
        for (const auto& [status, n] : status_counts) counts[to_string(status)] = n;
        j["validation"] = counts;
    }
    j["summary"] = ojson::array();
    Table summary_table{{"Service", "Dataset A", "Dataset B", "Total", "Overlap"}};
    for (const auto& row : summary) {
        j["summary"].push_back({{"service", row.label}, {"count_a", row.count_a}, {"count_b", row.count_b},
                                {"total", row.total}, {"overlap", row.overlap}});
        summary_table.push_back({row.label, std::to_string(row.count_a), std::to_string(row.count_b),
                                 std::to_string(row.total), std::to_string(row.overlap)});
    }
    j["apps"] = ojson::array();
    Table app_table{{"App", "Credentials", "Services"}};
    for (const auto& a : apps) {
        j["apps"].push_back({{"app", a.package_id}, {"credentials", a.credentials}, {"services", a.services}});
        app_table.push_back({a.package_id, std::to_string(a.credentials), join(a.services, " ")});
    }
    j["shared"] = ojson::array();
    Table shared_table{{"Credential", "Service", "Apps"}};
    for (std::size_t i = 0; i < shared.size(); ++i) {
        const auto fps = fingerprints_of(shared[i].key);
        const std::string label = "Credential-" + std::to_string(i + 1) + ": " + key_label(fps, labels, redact);
        j["shared"].push_back({{"credential", label},
                               {"ids", short_ids(fps)},
                               {"service", shared[i].key.service},
                               {"app_count", shared[i].apps.size()},
                               {"apps", shared[i].apps}});
        shared_table.push_back({label, shared[i].key.service, std::to_string(shared[i].apps.size())});
    }
    j["multi_secret_files"] = ojson::array();
    Table file_table{{"App", "Path", "Secrets"}};
    for (const auto& f : files) {
        j["multi_secret_files"].push_back({{"app", f.package_id}, {"path", f.rel_path}, {"secrets", f.secrets}});
        file_table.push_back({f.package_id, f.rel_path, std::to_string(f.secrets)});
    }
    Table span_table{{"Span", "Credentials", "Percent"}};
    Table record_table{{"App", "Credential", "Years", "Span", "Removed but valid"}};
    if (spans) {
        ojson histogram = ojson::array();
        for (std::size_t i = 0; i < spans->histogram.size(); ++i) {
            histogram.push_back(
                {{"span", i + 1}, {"count", spans->histogram[i]}, {"percent", std::stod(fixed(spans->percentages[i], 1))}});
            span_table.push_back({std::to_string(i + 1), std::to_string(spans->histogram[i]), fixed(spans->percentages[i], 1)});
        }
        ojson records = ojson::array();
        for (const auto& rec : spans->records) {
            const std::string label = key_label(rec.key.values, labels, redact);
            records.push_back({{"app", rec.package_id},
                               {"credential", label},
                               {"ids", short_ids(rec.key.values)},
                               {"years", rec.years_present},
                               {"span", rec.span},
                               {"removed_but_valid", rec.removed_but_valid}});
            record_table.push_back({rec.package_id, label, join(rec.years_present, " "), std::to_string(rec.span),
                                    rec.removed_but_valid ? "yes" : "no"});
        }
        j["lifespan"] = {{"tag_order", config.tag_order},
                         {"histogram", histogram},
                         {"removed_but_valid", spans->removed_but_valid},
                         {"records", records}};
    } else {
        j["lifespan"] = nullptr;
    }

    std::string text;
    text += "Population: " + std::string(have_outcomes ? "validated credentials" : "detected credentials") + "\n";
    text += "Dataset A: " + join(a_list, " ") + "\nDataset B: " + join(b_list, " ") + "\n\n";
    text += "Credentials per service\n" + aligned(summary_table) + "\n";
    text += "Credentials per app\n" + aligned(app_table) + "\n";
    text += "Credentials shared by at least " + std::to_string(config.min_shared_apps) + " apps\n" + aligned(shared_table) + "\n";
    text += "Files with several secrets\n" + aligned(file_table) + "\n";
    if (spans) {
        text += "Life spans\n" + aligned(span_table);
        text += "Removed from the latest version but still valid: " + std::to_string(spans->removed_but_valid) + "\n";
    }

    StageResult r;
    write_text(out_dir / "report.json", j.dump(2) + "\n");
    write_text(out_dir / "report.txt", text);
    r.written = {out_dir / "report.json", out_dir / "report.txt"};
    if (spans) {
        write_text(out_dir / "lifespan.svg", lifespan_svg(*spans, config.tag_order));
        r.written.push_back(out_dir / "lifespan.svg");
    }
    if (config.csv) {
        const std::vector<std::pair<const char*, const Table*>> tables{{"summary.csv", &summary_table},
                                                                       {"apps.csv", &app_table},
                                                                       {"shared.csv", &shared_table},
                                                                       {"files.csv", &file_table}};
        for (const auto& [name, table] : tables) {
            write_text(out_dir / name, as_csv(*table));
            r.written.push_back(out_dir / name);
        }
        if (spans) {
            write_text(out_dir / "lifespan.csv", as_csv(span_table));
            write_text(out_dir / "lifespan_records.csv", as_csv(record_table));
            r.written.push_back(out_dir / "lifespan.csv");
            r.written.push_back(out_dir / "lifespan_records.csv");
        }
    }
    r.records = population.size();
    return r;
}

} // namespace apkleak
