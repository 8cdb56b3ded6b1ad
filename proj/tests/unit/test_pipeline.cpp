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

#include "apkleak/error.hpp"
#include "apkleak/jsonl.hpp"
#include "apkleak/pipeline.hpp"

#include "support.hpp"

#include <doctest.h>
#include "json.hpp"

#include <filesystem>

using namespace apkleak;
using namespace apkleak::testing;
namespace fs = std::filesystem;

namespace {

PipelineConfig quiet_config() {
    PipelineConfig config;
    config.scan_threads = 2;
    return config;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("input expansion") {
    TempDir dir;
    write_file(dir.path() / "corpus/b.app/smali/B.smali", "x\n");
    write_file(dir.path() / "corpus/a.app/AndroidManifest.xml", "<manifest/>\n");
    write_file(dir.path() / "corpus/c.apk", "PK\x03\x04");
    write_file(dir.path() / "corpus/readme.txt", "hello");
    const auto apps = expand_input(dir.path() / "corpus", "2021");
    REQUIRE(apps.size() == 3);
    CHECK(apps[0].path.filename() == "a.app");
    CHECK(apps[2].path.filename() == "c.apk");
    CHECK(apps[0].tag == "2021");
    CHECK(expand_input(dir.path() / "corpus/a.app", "t").size() == 1);
    CHECK_THROWS_AS(expand_input(dir.path() / "nope", "t"), Error);
}

TEST_CASE("config file") {
    TempDir dir;
    write_file(dir.path() / "words.txt", "alpha\n");
    fs::create_directories(dir.path() / "d2020");
    write_file(dir.path() / "cfg.json", R"({
      "keywords": ["secret", "token"],
      "sample": {"size": 12, "seed": 9, "confidence": 0.9},
      "dictionary": "words.txt",
      "validation": {"offline": true, "max_in_flight": 2, "per_service_rate": 5},
      "datasets": [{"tag": "2020", "root": "d2020"}],
      "tag_order": ["2020", "2021"],
      "min_shared_apps": 3
    })");
    const auto c = PipelineConfig::load(dir.path() / "cfg.json");
    CHECK(c.keywords.keywords == std::vector<std::string>{"secret", "token"});
    CHECK(c.sample.sample_size == 12);
    CHECK(c.sample.seed == 9);
    CHECK(c.confidence == 0.9);
    CHECK(c.dictionary_path == dir.path() / "words.txt");
    CHECK(c.validation.max_in_flight == 2);
    CHECK(c.datasets.at(0).root == dir.path() / "d2020");
    CHECK(c.min_shared_apps == 3);
    CHECK_NOTHROW(c.validate());
    CHECK(c.dictionary().size() == 1);

    write_file(dir.path() / "bad.json", R"({"validation": {"max_in_flight": 0}})");
    CHECK_THROWS_AS(PipelineConfig::load(dir.path() / "bad.json"), Error);
    write_file(dir.path() / "missing.json", R"({"dictionary": "nope.txt"})");
    CHECK_THROWS_AS(PipelineConfig::load(dir.path() / "missing.json").validate(), Error);
}

TEST_CASE("scan, rank, sample, detect, validate and report on the planted corpus") {
    TempDir dir;
    const auto corpus = build_planted_corpus(dir.path() / "corpus");
    auto config = quiet_config();
    config.sample.sample_size = 3;
    config.tag_order = {"2020", "2021"};
    config.csv = true;
    const std::vector<AppInput> apps{{corpus.root, "2021"}};
    const auto out = dir.path() / "out";

    std::vector<std::string> warnings;
    const WarningSink sink = [&](std::string_view w) { warnings.emplace_back(w); };
    const auto scan = run_scan(config, apps, out / "candidates.jsonl", sink);
    CHECK(scan.apps == 1);
    CHECK(scan.skipped_apps == 0);
    CHECK(fs::exists(out / "candidates.vault.jsonl"));
    const auto rank = run_rank(config, out / "candidates.jsonl", out / "ranked.jsonl", sink);
    CHECK(rank.records == scan.records);
    const auto sample = run_sample(config, out / "ranked.jsonl", out / "sample.jsonl", sink);
    CHECK(sample.population == scan.records);
    CHECK(sample.records >= 3 + 2);
    const auto detect = run_detect(config, apps, out / "detections.jsonl", sink);
    CHECK(detect.records == 17);
    const auto validate = run_validate(config, out / "detections.jsonl", std::nullopt, out / "outcomes.jsonl", sink);
    CHECK(validate.transport_calls == 0);
    CHECK(validate.by_status.at(ValidationStatus::skipped_offline) == 17);
    CHECK_FALSE(validate.live);

    ReportInputs inputs;
    inputs.detections = {out / "detections.jsonl"};
    inputs.candidates = out / "candidates.jsonl";
    const auto report = run_report(config, inputs, out / "report", sink);
    CHECK(fs::exists(out / "report/report.json"));
    CHECK(fs::exists(out / "report/summary.csv"));
    CHECK(fs::exists(out / "report/lifespan.svg"));
    const auto j = nlohmann::json::parse(read_file(out / "report/report.json"));
    CHECK(j.at("population") == "detected");

    // Nothing under the output tree except the vaults may hold a raw secret.
    for (const auto& e : fs::recursive_directory_iterator(out)) {
        if (!e.is_regular_file() || e.path().filename().string().find(".vault.") != std::string::npos) continue;
        const auto text = read_file(e.path());
        for (const auto& s : corpus.secrets)
            for (std::size_t i = 0; i + 12 <= s.value.size(); ++i)
                CHECK_MESSAGE(text.find(s.value.substr(i, 12)) == std::string::npos, e.path().string());
    }
}

TEST_CASE("identical inputs give byte-identical artifacts") {
    TempDir dir;
    const auto corpus = build_planted_corpus(dir.path() / "corpus");
    auto config = quiet_config();
    config.sample.sample_size = 4;
    config.sample.seed = 77;
    config.tag_order = {"2020", "2021"};
    const std::vector<AppInput> apps{{corpus.root, "2021"}};
    const auto run = [&](const fs::path& out) {
        run_scan(config, apps, out / "candidates.jsonl");
        run_rank(config, out / "candidates.jsonl", out / "ranked.jsonl");
        run_sample(config, out / "ranked.jsonl", out / "sample.jsonl");
        run_detect(config, apps, out / "detections.jsonl");
        run_validate(config, out / "detections.jsonl", std::nullopt, out / "outcomes.jsonl");
        ReportInputs inputs;
        inputs.detections = {out / "detections.jsonl"};
        inputs.outcomes = out / "outcomes.jsonl";
        run_report(config, inputs, out / "report");
    };
    run(dir.path() / "one");
    run(dir.path() / "two");
    for (const char* f : {"candidates.jsonl", "ranked.jsonl", "sample.jsonl", "detections.jsonl", "outcomes.jsonl",
                          "report/report.json", "report/report.txt", "report/lifespan.svg"})
        CHECK_MESSAGE(read_file(dir.path() / "one" / f) == read_file(dir.path() / "two" / f), f);
}

TEST_CASE("a corrupt app is skipped with a warning") {
    TempDir dir;
    write_file(dir.path() / "corpus/good.app/smali/A.smali",
               ".field static API_SECRET:Ljava/lang/String; = \"0123456789abcdef\"\n");
    write_file(dir.path() / "corpus/broken.apk", "PK\x03\x04garbage");
    std::vector<std::string> warnings;
    const auto r = run_scan(quiet_config(), expand_input(dir.path() / "corpus", "t"), dir.path() / "c.jsonl",
                            [&](std::string_view w) { warnings.emplace_back(w); });
    CHECK(r.records == 1);
    CHECK(r.apps == 1);
    CHECK(r.skipped_apps == 1);
    CHECK(warnings.size() == 1);
}

TEST_CASE("fixture-backed validation and a valid-only report") {
    TempDir dir;
    const auto corpus = build_planted_corpus(dir.path() / "corpus");
    auto config = quiet_config();
    config.validation.per_service_rate = 1000;
    const std::vector<AppInput> apps{{corpus.root, "2021"}};
    run_detect(config, apps, dir.path() / "d.jsonl");
    write_file(dir.path() / "fixtures.json", R"({"*": {"status": 403, "body": "denied"}})");
    const auto v = run_validate(config, dir.path() / "d.jsonl", dir.path() / "fixtures.json", dir.path() / "o.jsonl");
    CHECK(v.by_status.at(ValidationStatus::invalid) == 17);
    CHECK(v.transport_calls > 0);
    ReportInputs inputs;
    inputs.detections = {dir.path() / "d.jsonl"};
    inputs.outcomes = dir.path() / "o.jsonl";
    run_report(config, inputs, dir.path() / "r");
    const auto j = nlohmann::json::parse(read_file(dir.path() / "r/report.json"));
    CHECK(j.at("population") == "valid");
    CHECK(j.at("apps").empty());
}

} // TEST_SUITE
