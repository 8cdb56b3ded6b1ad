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

#include "apkleak/analytics.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace apkleak {

namespace {

const std::string& package_of(const AppRef& app) {
    static const std::string unknown;
    return app ? app->package_id : unknown;
}

} // namespace

DedupKey dedup_key(const DetectedCredential& credential) {
    DedupKey key{credential.service, {}};
    for (const auto& [role, evidence] : credential.factors) key.factors.emplace_back(role, evidence.value);
    std::sort(key.factors.begin(), key.factors.end());
    return key;
}

ValueKey value_key(const DetectedCredential& credential) {
    ValueKey key;
    for (const auto& [role, evidence] : credential.factors) key.values.push_back(evidence.value);
    std::sort(key.values.begin(), key.values.end());
    return key;
}

std::vector<SummaryRow> dedup_and_overlap(std::span<const DetectedCredential> a,
                                          std::span<const DetectedCredential> b) {
    std::map<std::string, std::pair<std::set<DedupKey>, std::set<DedupKey>>> by_service;
    for (const auto& c : a) by_service[c.service].first.insert(dedup_key(c));
    for (const auto& c : b) by_service[c.service].second.insert(dedup_key(c));

    std::vector<std::string> order;
    for (const auto& [service, sets] : by_service) order.push_back(service);
    std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return service_less(x, y); });

    std::vector<SummaryRow> rows;
    SummaryRow total{"Total"};
    for (const auto& service : order) {
        const auto& [in_a, in_b] = by_service[service];
        SummaryRow row{service, in_a.size(), in_b.size(), 0, 0};
        for (const auto& key : in_a) row.overlap += in_b.count(key);
        row.total = row.count_a + row.count_b - row.overlap;
        total.count_a += row.count_a;
        total.count_b += row.count_b;
        total.overlap += row.overlap;
        total.total += row.total;
        rows.push_back(std::move(row));
    }
    rows.push_back(std::move(total));
    return rows;
}

std::vector<AppCount> per_app_counts(std::span<const DetectedCredential> detections) {
    std::map<std::string, std::pair<std::set<ValueKey>, std::set<std::string>>> by_app;
    for (const auto& c : detections) {
        auto& [keys, services] = by_app[package_of(c.app)];
        keys.insert(value_key(c));
        services.insert(c.service);
    }
    std::vector<AppCount> out;
    for (const auto& [package, entry] : by_app) {
        AppCount row{package, entry.first.size(), {entry.second.begin(), entry.second.end()}};
        std::stable_sort(row.services.begin(), row.services.end(),
                         [](const auto& x, const auto& y) { return service_less(x, y); });
        out.push_back(std::move(row));
    }
    std::stable_sort(out.begin(), out.end(), [](const AppCount& x, const AppCount& y) {
        return x.credentials != y.credentials ? x.credentials > y.credentials : x.package_id < y.package_id;
    });
    return out;
}

std::vector<SharedCredential> shared_credentials(std::span<const DetectedCredential> detections,
                                                 std::size_t min_apps) {
    std::map<DedupKey, std::set<std::string>> apps_of;
    for (const auto& c : detections) apps_of[dedup_key(c)].insert(package_of(c.app));

    std::vector<SharedCredential> out;
    for (const auto& [key, apps] : apps_of)
        if (apps.size() >= std::max<std::size_t>(min_apps, 1)) out.push_back({key, {apps.begin(), apps.end()}});
    std::stable_sort(out.begin(), out.end(), [](const SharedCredential& x, const SharedCredential& y) {
        if (x.apps.size() != y.apps.size()) return x.apps.size() > y.apps.size();
        if (x.key.service != y.key.service) return service_less(x.key.service, y.key.service);
        return x.key < y.key;
    });
    return out;
}

std::vector<MultiSecretFile> multi_secret_files(std::span<const SecretCandidate> candidates,
                                                std::span<const DetectedCredential> detections) {
    std::map<std::pair<std::string, std::string>, std::set<std::string>> values_in;
    for (const auto& c : candidates) values_in[{package_of(c.app), c.rel_path}].insert(c.value);
    for (const auto& d : detections)
        for (const auto& [role, evidence] : d.factors) values_in[{package_of(d.app), evidence.rel_path}].insert(evidence.value);

    std::vector<MultiSecretFile> out;
    for (const auto& [file, values] : values_in)
        if (values.size() >= 2) out.push_back({file.first, file.second, values.size()});
    std::stable_sort(out.begin(), out.end(), [](const MultiSecretFile& x, const MultiSecretFile& y) {
        if (x.secrets != y.secrets) return x.secrets > y.secrets;
        return std::tie(x.package_id, x.rel_path) < std::tie(y.package_id, y.rel_path);
    });
    return out;
}

LifespanReport lifespan(std::span<const DetectedCredential> detections, std::span<const std::string> tag_order,
                        const std::set<ValueKey>& valid_keys) {
    if (tag_order.empty()) throw Error(ErrorCode::MissingTagOrder, "life spans need an ordered list of dataset tags");
    if (tag_order.size() < 2) throw Error(ErrorCode::InvalidArgument, "life spans need at least two dataset tags");
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < tag_order.size(); ++i) position.emplace(tag_order[i], i);

    std::map<std::pair<std::string, ValueKey>, std::set<std::size_t>> present;
    for (const auto& c : detections) {
        const auto it = position.find(c.dataset_tag);
        if (it == position.end())
            throw Error(ErrorCode::MissingTagOrder, "dataset tag '" + c.dataset_tag + "' is not in the tag order");
        present[{package_of(c.app), value_key(c)}].insert(it->second);
    }

    LifespanReport report;
    report.histogram.assign(tag_order.size(), 0);
    const std::size_t latest = tag_order.size() - 1;
    for (const auto& [id, years] : present) {
        LifespanRecord r;
        r.package_id = id.first;
        r.key = id.second;
        for (std::size_t y : years) r.years_present.push_back(tag_order[y]);
        r.span = static_cast<std::uint32_t>(years.size());
        r.removed_but_valid = !years.count(latest) && valid_keys.count(r.key) != 0;
        ++report.histogram[r.span - 1];
        report.removed_but_valid += r.removed_but_valid ? 1 : 0;
        report.records.push_back(std::move(r));
    }
    const auto n = static_cast<double>(report.records.size());
    for (std::uint64_t count : report.histogram)
        report.percentages.push_back(n > 0 ? 100.0 * static_cast<double>(count) / n : 0.0);
    return report;
}

} // namespace apkleak
