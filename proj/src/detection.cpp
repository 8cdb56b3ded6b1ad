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

#include "apkleak/detection.hpp"

#include "apkleak/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <set>
#include <tuple>

namespace apkleak {

namespace {

constexpr std::array<std::string_view, 7> kServiceOrder{
    services::google_maps, services::google_translation, services::google_cloud_vision, services::youtube,
    services::twitter,     services::fcm,                services::facebook};

// Content of the last top-level bracket expression, e.g. "0-9A-Za-z_-".
std::string last_bracket_class(std::string_view regex) {
    std::string last;
    for (std::size_t i = 0; i < regex.size(); ++i) {
        if (regex[i] == '\\') {
            ++i;
            continue;
        }
        if (regex[i] != '[') continue;
        std::size_t j = i + 1;
        if (j < regex.size() && regex[j] == ']') ++j;
        while (j < regex.size() && regex[j] != ']') {
            if (regex[j] == '\\') ++j;
            ++j;
        }
        if (j >= regex.size()) break;
        last.assign(regex.substr(i + 1, j - i - 1));
        i = j;
    }
    return last;
}

bool contains_any_icase(std::string_view text, const std::vector<std::string>& needles) {
    const std::string lowered = to_lower_ascii(text);
    return std::any_of(needles.begin(), needles.end(),
                       [&](const std::string& n) { return lowered.find(to_lower_ascii(n)) != std::string::npos; });
}

auto evidence_key(const LocatedFactor& f) {
    return std::tie(f.evidence.rel_path, f.evidence.line, f.evidence.value);
}

void dedupe_factors(std::vector<LocatedFactor>& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return evidence_key(a) < evidence_key(b); });
    v.erase(std::unique(v.begin(), v.end(), [](const auto& a, const auto& b) { return evidence_key(a) == evidence_key(b); }),
            v.end());
}

bool same_app(const AppRef& a, const AppRef& b) {
    return a && b && a->package_id == b->package_id && a->dataset_tag == b->dataset_tag;
}

} // namespace

int service_order(std::string_view service) noexcept {
    const auto it = std::find(kServiceOrder.begin(), kServiceOrder.end(), service);
    return it == kServiceOrder.end() ? static_cast<int>(kServiceOrder.size())
                                     : static_cast<int>(std::distance(kServiceOrder.begin(), it));
}

bool service_less(std::string_view a, std::string_view b) noexcept {
    const int oa = service_order(a);
    const int ob = service_order(b);
    return oa != ob ? oa < ob : a < b;
}

const char* to_string(FactorRole role) noexcept {
    switch (role) {
    case FactorRole::single_key: return "single_key";
    case FactorRole::server_key: return "server_key";
    case FactorRole::client_id: return "client_id";
    case FactorRole::client_secret: return "client_secret";
    }
    return "unknown";
}

FactorRole parse_factor_role(std::string_view text) {
    if (text == "single_key") return FactorRole::single_key;
    if (text == "server_key") return FactorRole::server_key;
    if (text == "client_id") return FactorRole::client_id;
    if (text == "client_secret") return FactorRole::client_secret;
    throw Error(ErrorCode::Config, "unknown factor role '" + std::string(text) + "'");
}

ServicePattern::ServicePattern(std::string service, FactorRole role, std::string regex,
                               std::vector<std::string> name_hints, std::vector<std::string> role_keywords,
                               std::string boundary_class)
    : service_(std::move(service)), role_(role), source_(std::move(regex)),
      boundary_class_(std::move(boundary_class)), name_hints_(std::move(name_hints)),
      role_keywords_(std::move(role_keywords)) {
    if (service_.empty()) throw Error(ErrorCode::Config, "pattern without service id");
    if (is_multi_factor(role_) && name_hints_.empty())
        throw Error(ErrorCode::Config, service_ + "/" + to_string(role_) + ": multi-factor roles need name hints");
    if (boundary_class_.empty()) boundary_class_ = last_bracket_class(source_);
    std::string anchored = "(?:" + source_ + ")";
    if (!boundary_class_.empty())
        anchored = "(?<![" + boundary_class_ + "])" + anchored + "(?![" + boundary_class_ + "])";
    try {
        anchored_.assign(anchored, boost::regex::perl);
    } catch (const boost::regex_error& e) {
        throw Error(ErrorCode::Config, service_ + ": regex '" + source_ + "' does not compile: " + e.what());
    }
}

std::vector<PatternMatch> ServicePattern::find_all(std::string_view text) const {
    std::vector<PatternMatch> out;
    using It = std::string_view::const_iterator;
    for (boost::regex_iterator<It> it(text.begin(), text.end(), anchored_), end; it != end; ++it)
        out.push_back({it->str(), static_cast<std::size_t>(it->position())});
    return out;
}

bool ServicePattern::matches_exactly(std::string_view text) const {
    return boost::regex_match(text.begin(), text.end(), anchored_);
}

bool ServicePattern::hint_matches(std::string_view variable_name, std::string_view rel_path) const {
    return contains_any_icase(variable_name, name_hints_) || contains_any_icase(rel_path, name_hints_);
}

PatternSet PatternSet::defaults() {
    const std::string google = "AIza[0-9A-Za-z_-]{35}";
    std::vector<ServicePattern> p;
    for (auto s : {services::google_maps, services::google_translation, services::google_cloud_vision, services::youtube})
        p.emplace_back(std::string(s), FactorRole::single_key, google);
    p.emplace_back(std::string(services::fcm), FactorRole::server_key,
                   "AAAA[A-Za-z0-9_-]{7}:[A-Za-z0-9_-]{140,162}|AIzaSy[0-9A-Za-z_-]{33}",
                   std::vector<std::string>{}, std::vector<std::string>{}, "A-Za-z0-9_-");
    const std::vector<std::string> fb_hints{"facebook", "fb"};
    const std::vector<std::string> tw_hints{"twitter", "tw"};
    p.emplace_back(std::string(services::facebook), FactorRole::client_id, "[0-9]{13,17}", fb_hints,
                   std::vector<std::string>{"id"});
    p.emplace_back(std::string(services::facebook), FactorRole::client_secret, "[0-9a-f]{32}", fb_hints);
    p.emplace_back(std::string(services::twitter), FactorRole::client_id, "[0-9a-zA-Z]{18,25}", tw_hints,
                   std::vector<std::string>{"id"});
    p.emplace_back(std::string(services::twitter), FactorRole::client_secret, "[0-9a-zA-Z]{40,50}", tw_hints);
    return PatternSet(std::move(p));
}

PatternSet PatternSet::from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("pattern file is not valid JSON: ") + e.what());
    }
    if (!doc.contains("patterns") || !doc["patterns"].is_array())
        throw Error(ErrorCode::Config, "pattern file needs a \"patterns\" array");
    std::vector<ServicePattern> p;
    for (const auto& row : doc["patterns"]) {
        try {
            p.emplace_back(row.at("service").get<std::string>(), parse_factor_role(row.at("role").get<std::string>()),
                           row.at("regex").get<std::string>(),
                           row.value("hints", std::vector<std::string>{}),
                           row.value("role_keywords", std::vector<std::string>{}),
                           row.value("boundary", std::string{}));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Config, std::string("bad pattern row: ") + e.what());
        }
    }
    return PatternSet(std::move(p));
}

PatternSet PatternSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read pattern file " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return from_json_text(text);
}

std::vector<const ServicePattern*> PatternSet::for_service(std::string_view service) const {
    std::vector<const ServicePattern*> out;
    for (const auto& p : patterns_)
        if (p.service() == service) out.push_back(&p);
    return out;
}

std::vector<const ServicePattern*> PatternSet::for_role(std::string_view service, FactorRole role) const {
    std::vector<const ServicePattern*> out;
    for (const auto& p : patterns_)
        if (p.service() == service && p.role() == role) out.push_back(&p);
    return out;
}

std::vector<std::string> PatternSet::multi_factor_services() const {
    std::set<std::string> names;
    for (const auto& p : patterns_)
        if (is_multi_factor(p.role())) names.insert(p.service());
    std::vector<std::string> out(names.begin(), names.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return service_less(a, b); });
    return out;
}

std::vector<DetectedCredential> match_single_factor(const ScanUnit& unit, const PatternSet& patterns) {
    struct Hit {
        std::uint32_t line;
        int order;
        std::string service;
        std::size_t offset;
        std::string value;
        FactorRole role;
    };
    std::vector<Hit> hits;
    for (const auto& pattern : patterns.patterns()) {
        if (is_multi_factor(pattern.role())) continue;
        for (const Line& line : unit.lines)
            for (auto& m : pattern.find_all(line.text))
                hits.push_back({line.number, service_order(pattern.service()), pattern.service(), m.offset,
                                std::move(m.value), pattern.role()});
    }
    const auto key = [](const Hit& h) { return std::tie(h.line, h.order, h.service, h.offset, h.value); };
    std::sort(hits.begin(), hits.end(), [&](const Hit& a, const Hit& b) { return key(a) < key(b); });
    hits.erase(std::unique(hits.begin(), hits.end(),
                           [](const Hit& a, const Hit& b) {
                               return a.line == b.line && a.service == b.service && a.value == b.value;
                           }),
               hits.end());

    std::vector<DetectedCredential> out;
    out.reserve(hits.size());
    for (auto& h : hits) {
        DetectedCredential c;
        c.service = std::move(h.service);
        c.factors.emplace(h.role, FactorEvidence{std::move(h.value), unit.rel_path, h.line});
        c.app = unit.app;
        c.dataset_tag = unit.app ? unit.app->dataset_tag : std::string{};
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Seed> find_multi_factor_seeds(const ScanUnit& unit, std::string_view service, const PatternSet& patterns,
                                          const KeywordConfig& keywords, const WarningSink& warnings) {
    std::vector<Seed> seeds;
    const auto rows = patterns.for_service(service);
    if (rows.empty()) return seeds;
    for (const auto& def : extract_definitions(unit, keywords, warnings)) {
        for (const ServicePattern* row : rows) {
            if (!is_multi_factor(row->role())) continue;
            const bool keyword_ok = keywords.name_matches(def.name) || contains_any_icase(def.name, row->role_keywords());
            if (!keyword_ok || !row->hint_matches(def.name, unit.rel_path)) continue;
            for (auto& m : row->find_all(def.value)) seeds.push_back({row->role(), std::move(m.value), def.line, def.name});
        }
    }
    return seeds;
}

std::vector<LocatedValue> counterpart_search(const ScanUnit& unit, std::string_view service, FactorRole missing_role,
                                             const PatternSet& patterns) {
    std::vector<LocatedValue> out;
    const auto rows = patterns.for_role(service, missing_role);
    for (const Line& line : unit.lines)
        for (const ServicePattern* row : rows)
            for (auto& m : row->find_all(line.text)) out.push_back({std::move(m.value), line.number});
    return out;
}

std::vector<DetectedCredential> pair_credentials(std::string_view service, std::span<const LocatedFactor> ids,
                                                 std::span<const LocatedFactor> secrets, const AppRef& app) {
    for (const auto& f : ids)
        if (!same_app(f.app, app)) throw Error(ErrorCode::InvalidArgument, "client id from another app");
    for (const auto& f : secrets)
        if (!same_app(f.app, app)) throw Error(ErrorCode::InvalidArgument, "client secret from another app");

    std::vector<DetectedCredential> out;
    out.reserve(ids.size() * secrets.size());
    for (const auto& id : ids) {
        for (const auto& secret : secrets) {
            DetectedCredential c;
            c.service = std::string(service);
            c.factors.emplace(FactorRole::client_id, id.evidence);
            c.factors.emplace(FactorRole::client_secret, secret.evidence);
            c.app = app;
            c.dataset_tag = app->dataset_tag;
            out.push_back(std::move(c));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const DetectedCredential& a, const DetectedCredential& b) {
        const auto& ai = a.factors.at(FactorRole::client_id);
        const auto& as = a.factors.at(FactorRole::client_secret);
        const auto& bi = b.factors.at(FactorRole::client_id);
        const auto& bs = b.factors.at(FactorRole::client_secret);
        return std::tie(ai.line, as.line, ai.rel_path, as.rel_path) < std::tie(bi.line, bs.line, bi.rel_path, bs.rel_path);
    });
    return out;
}

std::vector<DetectedCredential> detect_app(std::span<const ScanUnit> units, const PatternSet& patterns,
                                           const KeywordConfig& keywords, const WarningSink& warnings) {
    std::vector<DetectedCredential> out;
    if (units.empty()) return out;
    const AppRef app = units.front().app;

    for (const auto& unit : units) {
        auto single = match_single_factor(unit, patterns);
        std::move(single.begin(), single.end(), std::back_inserter(out));
    }

    for (const auto& service : patterns.multi_factor_services()) {
        std::vector<LocatedFactor> ids;
        std::vector<LocatedFactor> secrets;
        for (const auto& unit : units) {
            const auto seeds = find_multi_factor_seeds(unit, service, patterns, keywords, warnings);
            if (seeds.empty()) continue;
            std::set<FactorRole> seeded_roles;
            for (const auto& s : seeds) {
                seeded_roles.insert(s.role);
                auto& bucket = s.role == FactorRole::client_id ? ids : secrets;
                bucket.push_back({unit.app, {s.value, unit.rel_path, s.line}});
            }
            for (FactorRole role : seeded_roles) {
                const FactorRole missing = counterpart_of(role);
                auto& bucket = missing == FactorRole::client_id ? ids : secrets;
                for (auto& cp : counterpart_search(unit, service, missing, patterns))
                    bucket.push_back({unit.app, {std::move(cp.value), unit.rel_path, cp.line}});
            }
        }
        dedupe_factors(ids);
        dedupe_factors(secrets);
        for (auto& c : pair_credentials(service, ids, secrets, app)) {
            if (c.factors.at(FactorRole::client_id).value == c.factors.at(FactorRole::client_secret).value) continue;
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::string redact(std::string_view value, std::size_t keep_prefix, std::size_t keep_suffix) {
    const auto cps = utf8_code_points(value);
    if (cps.empty() || keep_prefix + keep_suffix >= cps.size())
        throw Error(ErrorCode::RedactionTooWide, "cannot keep " + std::to_string(keep_prefix + keep_suffix) +
                                                     " of " + std::to_string(cps.size()) + " characters");
    std::string out;
    for (std::size_t i = 0; i < keep_prefix; ++i) append_utf8(out, cps[i]);
    out += "***";
    for (std::size_t i = cps.size() - keep_suffix; i < cps.size(); ++i) append_utf8(out, cps[i]);
    return out;
}

std::string redact_for_report(std::string_view value) {
    const std::size_t n = utf8_length(value);
    if (n <= 1) return "***";
    return redact(value, std::min<std::size_t>(4, (n - 1) / 3), 0);
}

} // namespace apkleak
