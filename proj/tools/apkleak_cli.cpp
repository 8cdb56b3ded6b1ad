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

// apkleak command-line front end. Every stage reads and writes files so
// stages can be re-run one at a time.

#include "apkleak/apkleak.h"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitNetwork = 3;

constexpr const char* kEthicsWarning =
    "warning: --unredacted writes raw secret values. Use it only on apps you are authorised to "
    "assess, keep the output private, and never publish or exploit recovered credentials.";

struct Globals {
    std::string config;
    std::string out = "apkleak-out";
    std::optional<std::uint64_t> seed;
    bool online = false;
    bool unredacted = false;
    std::string tag_order;
};

using ContextPtr = std::unique_ptr<apkleak_context, decltype(&apkleak_context_destroy)>;

int exit_code_for(apkleak_status s) {
    switch (s) {
    case APKLEAK_OK: return kExitOk;
    case APKLEAK_E_NETWORK: return kExitNetwork;
    case APKLEAK_E_INTERNAL: return kExitFailure;
    default: return kExitInput;
    }
}

int report_failure(apkleak_status s) {
    std::cerr << "apkleak: " << apkleak_status_string(s) << ": " << apkleak_last_error() << "\n";
    return exit_code_for(s);
}

void print_warning(void*, const char* message) { std::cerr << "warning: " << message << "\n"; }

std::string path_in(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

std::vector<const char*> c_strings(const std::vector<std::string>& items) {
    std::vector<const char*> out;
    for (const auto& s : items) out.push_back(s.c_str());
    return out;
}

// Opens a context and applies global flags. Returns a null context and
// sets `status` on failure.
ContextPtr open_context(const Globals& g, apkleak_status& status) {
    apkleak_context* raw = nullptr;
    status = apkleak_context_create(g.config.empty() ? nullptr : g.config.c_str(), &raw);
    ContextPtr ctx(raw, &apkleak_context_destroy);
    if (status != APKLEAK_OK) return ContextPtr(nullptr, &apkleak_context_destroy);
    apkleak_context_set_log(ctx.get(), &print_warning, nullptr);

    std::vector<std::pair<const char*, std::string>> options{{"offline", g.online ? "false" : "true"},
                                                            {"redact", g.unredacted ? "false" : "true"}};
    if (g.seed) options.emplace_back("seed", std::to_string(*g.seed));
    if (!g.tag_order.empty()) options.emplace_back("tag_order", g.tag_order);
    for (const auto& [key, value] : options) {
        status = apkleak_set_option(ctx.get(), key, value.c_str());
        if (status != APKLEAK_OK) return ContextPtr(nullptr, &apkleak_context_destroy);
    }
    return ctx;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"apkleak: find hard-coded cloud credentials in Android apps"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", apkleak_version());

    Globals g;
    app.add_option("--config", g.config, "JSON pipeline configuration")->envname("APKLEAK_CONFIG");
    app.add_option("--out", g.out, "Directory for artifacts")->envname("APKLEAK_OUT");
    app.add_option("--seed", g.seed, "Sampling seed")->envname("APKLEAK_SEED");
    app.add_flag("--online,!--offline", g.online, "Allow live validation requests (default: offline)")
        ->envname("APKLEAK_ONLINE");
    app.add_flag("--unredacted", g.unredacted, "Write raw secret values (prints an ethics warning)")
        ->envname("APKLEAK_UNREDACTED");
    app.add_option("--tag-order", g.tag_order, "Comma-separated dataset tags, oldest first")
        ->envname("APKLEAK_TAG_ORDER");

    // scan
    std::vector<std::string> scan_inputs;
    std::string scan_tag = "default", scan_output;
    auto* scan = app.add_subcommand("scan", "Extract keyword-named string literals");
    scan->add_option("inputs", scan_inputs, "APK files, app trees or directories of apps");
    scan->add_option("--tag", scan_tag, "Dataset tag for the inputs")->envname("APKLEAK_TAG");
    scan->add_option("-o,--output", scan_output, "Candidate file");

    // rank
    std::string rank_input, rank_output;
    auto* rank = app.add_subcommand("rank", "Score candidates by diversity and dictionary words");
    rank->add_option("-i,--input", rank_input, "Candidate file");
    rank->add_option("-o,--output", rank_output, "Ranked file");

    // sample
    std::string sample_input, sample_output;
    std::optional<std::size_t> sample_size;
    std::optional<double> confidence;
    bool no_numeric = false;
    auto* sample = app.add_subcommand("sample", "Draw a weighted sample for manual review");
    sample->add_option("-i,--input", sample_input, "Ranked file");
    sample->add_option("-o,--output", sample_output, "Sample file");
    sample->add_option("-n,--size", sample_size, "Number of weighted draws");
    sample->add_option("--confidence", confidence, "Confidence level for the margin of error");
    sample->add_flag("--no-numeric", no_numeric, "Do not add every numeric-only candidate");

    // detect
    std::vector<std::string> detect_inputs;
    std::string detect_tag = "default", detect_output;
    auto* detect = app.add_subcommand("detect", "Match service credential patterns");
    detect->add_option("inputs", detect_inputs, "APK files, app trees or directories of apps");
    detect->add_option("--tag", detect_tag, "Dataset tag for the inputs")->envname("APKLEAK_TAG");
    detect->add_option("-o,--output", detect_output, "Detection file");

    // validate
    std::string validate_input, validate_output, fixtures;
    auto* validate = app.add_subcommand("validate", "Check whether detected credentials are accepted");
    validate->add_option("-i,--input", validate_input, "Detection file");
    validate->add_option("-o,--output", validate_output, "Outcome file");
    validate->add_option("--fixtures", fixtures, "Canned responses instead of live requests")->check(CLI::ExistingFile);

    // report
    std::vector<std::string> report_detections;
    std::string report_outcomes, report_candidates, dataset_b;
    std::optional<std::size_t> min_apps;
    bool csv = false;
    auto* report = app.add_subcommand("report", "Aggregate detections into tables and charts");
    report->add_option("-d,--detections", report_detections, "Detection files");
    report->add_option("--outcomes", report_outcomes, "Outcome file; restricts tables to valid credentials");
    report->add_option("--candidates", report_candidates, "Candidate file for multi-secret files");
    report->add_option("--dataset-b", dataset_b, "Comma-separated tags of the second dataset");
    report->add_option("--min-apps", min_apps, "Threshold for shared credentials");
    report->add_flag("--csv", csv, "Also write CSV tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    if (g.unredacted) std::cerr << kEthicsWarning << "\n";

    apkleak_status st = APKLEAK_OK;
    ContextPtr ctx = open_context(g, st);
    if (!ctx) return report_failure(st);
    auto* c = ctx.get();
    const auto set = [&](const char* key, const std::string& value) {
        if (st == APKLEAK_OK) st = apkleak_set_option(c, key, value.c_str());
    };

    if (scan->parsed()) {
        const std::string out = scan_output.empty() ? path_in(g.out, "candidates.jsonl") : scan_output;
        const auto in = c_strings(scan_inputs);
        std::size_t n = 0;
        st = apkleak_scan(c, in.data(), in.size(), scan_tag.c_str(), out.c_str(), &n);
        if (st != APKLEAK_OK) return report_failure(st);
        std::cout << n << " candidates -> " << out << "\n";
    } else if (rank->parsed()) {
        const std::string in = rank_input.empty() ? path_in(g.out, "candidates.jsonl") : rank_input;
        const std::string out = rank_output.empty() ? path_in(g.out, "ranked.jsonl") : rank_output;
        std::size_t n = 0;
        st = apkleak_rank(c, in.c_str(), out.c_str(), &n);
        if (st != APKLEAK_OK) return report_failure(st);
        std::cout << n << " ranked candidates -> " << out << "\n";
    } else if (sample->parsed()) {
        const std::string in = sample_input.empty() ? path_in(g.out, "ranked.jsonl") : sample_input;
        const std::string out = sample_output.empty() ? path_in(g.out, "sample.jsonl") : sample_output;
        if (sample_size) set("sample_size", std::to_string(*sample_size));
        if (confidence) set("confidence", std::to_string(*confidence));
        if (no_numeric) set("include_numeric_only", "false");
        if (st != APKLEAK_OK) return report_failure(st);
        std::size_t n = 0;
        double moe = 0.0;
        st = apkleak_sample(c, in.c_str(), out.c_str(), &n, &moe);
        if (st != APKLEAK_OK) return report_failure(st);
        std::printf("%zu sampled candidates -> %s (margin of error %.2f%%)\n", n, out.c_str(), moe * 100.0);
    } else if (detect->parsed()) {
        const std::string out = detect_output.empty() ? path_in(g.out, "detections.jsonl") : detect_output;
        const auto in = c_strings(detect_inputs);
        std::size_t n = 0;
        st = apkleak_detect(c, in.data(), in.size(), detect_tag.c_str(), out.c_str(), &n);
        if (st != APKLEAK_OK) return report_failure(st);
        std::cout << n << " detections -> " << out << "\n";
    } else if (validate->parsed()) {
        const std::string in = validate_input.empty() ? path_in(g.out, "detections.jsonl") : validate_input;
        const std::string out = validate_output.empty() ? path_in(g.out, "outcomes.jsonl") : validate_output;
        apkleak_validation_summary s{};
        st = apkleak_validate(c, in.c_str(), fixtures.empty() ? nullptr : fixtures.c_str(), out.c_str(), &s);
        if (st != APKLEAK_OK) return report_failure(st);
        std::cout << s.total << " outcomes -> " << out << ": " << s.valid << " valid, " << s.invalid << " invalid, "
                  << s.rate_limited << " rate limited, " << s.network_error << " network errors, "
                  << s.skipped_offline << " skipped offline, " << s.error << " errors\n";
        if (s.live && s.network_error > 0) return kExitNetwork;
    } else if (report->parsed()) {
        if (report_detections.empty()) report_detections.push_back(path_in(g.out, "detections.jsonl"));
        if (!dataset_b.empty()) set("dataset_b", dataset_b);
        if (min_apps) set("min_shared_apps", std::to_string(*min_apps));
        if (csv) set("csv", "true");
        if (st != APKLEAK_OK) return report_failure(st);
        const auto in = c_strings(report_detections);
        st = apkleak_report(c, in.data(), in.size(), report_outcomes.empty() ? nullptr : report_outcomes.c_str(),
                            report_candidates.empty() ? nullptr : report_candidates.c_str(), g.out.c_str());
        if (st != APKLEAK_OK) return report_failure(st);
        std::cout << "report -> " << path_in(g.out, "report.json") << "\n";
    }
    return kExitOk;
}
