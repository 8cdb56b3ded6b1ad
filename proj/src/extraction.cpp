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

#include "apkleak/extraction.hpp"

#include "apkleak/text.hpp"

#include <boost/regex.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

namespace apkleak {

namespace {

using svmatch = boost::match_results<std::string::const_iterator>;

const boost::regex& field_rx() {
    static const boost::regex rx(
        R"rx(^\s*\.field\s+(?:[a-z-]+\s+)*([^\s:]+):(\S+)\s*=\s*"((?:[^"\\]|\\.)*)"\s*$)rx");
    return rx;
}

const boost::regex& const_string_rx() {
    static const boost::regex rx(R"rx(^\s*const-string(?:/jumbo)?\s+([vp]\d+)\s*,\s*"((?:[^"\\]|\\.)*)"\s*$)rx");
    return rx;
}

const boost::regex& put_rx() {
    static const boost::regex rx(R"rx(^\s*[si]put-object\s+([vp]\d+)\s*,\s*(?:[vp]\d+\s*,\s*)?\S*?->([^\s:]+):)rx");
    return rx;
}

const boost::regex& reg_write_rx() {
    static const boost::regex rx(R"rx(^\s*([a-z][a-z0-9/-]*)\s+([vp]\d+)\s*,)rx");
    return rx;
}

const boost::regex& meta_data_rx() {
    static const boost::regex rx(R"rx(<meta-data\b[^>]*>)rx");
    return rx;
}

const boost::regex& xml_value_rx() {
    static const boost::regex rx(R"rx(<(string|item)\b[^>]*?\bname\s*=\s*"([^"]+)"[^>]*>([^<]*)</\1\s*>)rx");
    return rx;
}

const boost::regex& json_pair_rx() {
    static const boost::regex rx(R"rx("((?:[^"\\]|\\.)+)"\s*:\s*"((?:[^"\\]|\\.)*)")rx");
    return rx;
}

const boost::regex& properties_rx() {
    static const boost::regex rx(R"rx(^\s*([A-Za-z_][A-Za-z0-9_.-]*)\s*[=:]\s*(.*?)\s*$)rx");
    return rx;
}

std::optional<std::string> xml_attr(const std::string& tag, const boost::regex& rx) {
    svmatch m;
    if (boost::regex_search(tag, m, rx)) return decode_xml_entities(m[1].str());
    return std::nullopt;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    const auto head = static_cast<unsigned char>(s.front());
    if (!(std::isalpha(head) || head == '_' || head == '$')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_' || u == '$';
    });
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<std::uint32_t> parse_hex4(std::string_view s) {
    if (s.size() < 4) return std::nullopt;
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        const int d = hex_value(s[static_cast<std::size_t>(i)]);
        if (d < 0) return std::nullopt;
        v = (v << 4) | static_cast<std::uint32_t>(d);
    }
    return v;
}

// Name of the field the register is stored into, looking a few
// instructions ahead and stopping when the register is overwritten.
std::optional<std::string> stored_field_name(const ScanUnit& unit, std::size_t from, const std::string& reg) {
    constexpr int kLookahead = 6;
    int seen = 0;
    for (std::size_t k = from + 1; k < unit.lines.size() && seen < kLookahead; ++k) {
        const std::string& text = unit.lines[k].text;
        const auto first = text.find_first_not_of(" \t");
        if (first == std::string::npos || text[first] == '#' || text[first] == '.') continue;
        ++seen;
        svmatch m;
        if (boost::regex_search(text, m, put_rx())) {
            if (m[1].str() == reg) return m[2].str();
            continue;
        }
        if (boost::regex_search(text, m, reg_write_rx()) && m[2].str() == reg) {
            const std::string op = m[1].str();
            if (op.rfind("if-", 0) != 0 && op.rfind("aput", 0) != 0) return std::nullopt;
        }
    }
    return std::nullopt;
}

void smali_definitions(const ScanUnit& unit, std::vector<Definition>& out, const WarningSink& warnings) {
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const Line& line = unit.lines[i];
        if (line.text.find('"') == std::string::npos) continue;
        svmatch m;
        if (boost::regex_match(line.text, m, field_rx())) {
            out.push_back({m[1].str(), decode_smali_literal(m[3].str(), warnings), line.number});
        } else if (boost::regex_match(line.text, m, const_string_rx())) {
            if (auto name = stored_field_name(unit, i, m[1].str()))
                out.push_back({*name, decode_smali_literal(m[2].str(), warnings), line.number});
        }
    }
}

void xml_definitions(const ScanUnit& unit, std::vector<Definition>& out) {
    for (const Line& line : unit.lines) {
        if (line.text.find('<') == std::string::npos) continue;
        for (boost::sregex_iterator it(line.text.begin(), line.text.end(), meta_data_rx()), end; it != end; ++it) {
            const std::string tag = it->str();
            static const boost::regex name_rx(R"rx(\bandroid:name\s*=\s*"([^"]*)")rx");
            static const boost::regex value_rx(R"rx(\bandroid:value\s*=\s*"([^"]*)")rx");
            auto name = xml_attr(tag, name_rx);
            auto value = xml_attr(tag, value_rx);
            if (name && value) out.push_back({*name, *value, line.number});
        }
        for (boost::sregex_iterator it(line.text.begin(), line.text.end(), xml_value_rx()), end; it != end; ++it)
            out.push_back({decode_xml_entities((*it)[2].str()), decode_xml_entities((*it)[3].str()), line.number});
    }
}

void text_pair_definitions(const ScanUnit& unit, std::vector<Definition>& out, const WarningSink& warnings) {
    for (const Line& line : unit.lines) {
        for (boost::sregex_iterator it(line.text.begin(), line.text.end(), json_pair_rx()), end; it != end; ++it)
            out.push_back({decode_smali_literal((*it)[1].str(), warnings),
                           decode_smali_literal((*it)[2].str(), warnings), line.number});
        svmatch m;
        if (boost::regex_match(line.text, m, properties_rx())) {
            std::string value = m[2].str();
            if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
                value = value.substr(1, value.size() - 2);
            out.push_back({m[1].str(), value, line.number});
        }
    }
}

void dex_adjacent_definitions(const ScanUnit& unit, const KeywordConfig& config, std::vector<Definition>& out) {
    const auto& lines = unit.lines;
    const auto n = static_cast<std::ptrdiff_t>(lines.size());
    constexpr std::array<std::ptrdiff_t, 4> offsets{-1, 1, -2, 2};
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::string& value = lines[static_cast<std::size_t>(i)].text;
        if (utf8_length(value) < config.min_literal_length) continue;
        for (auto d : offsets) {
            const std::ptrdiff_t j = i + d;
            if (j < 0 || j >= n) continue;
            const std::string& name = lines[static_cast<std::size_t>(j)].text;
            if (is_identifier(name) && config.name_matches(name)) {
                out.push_back({name, value, lines[static_cast<std::size_t>(i)].number});
                break;
            }
        }
    }
}

} // namespace

std::vector<std::string> default_keywords() {
    return {"key",     "secret",  "token",   "password",  "passwd", "pwd", "auth",
            "credential", "api_key", "apikey", "private", "signature", "cert"};
}

void KeywordConfig::validate() const {
    if (keywords.empty()) throw Error(ErrorCode::Config, "keyword list must not be empty");
    for (const auto& k : keywords)
        if (k.size() < 2) throw Error(ErrorCode::Config, "keyword '" + k + "' is shorter than 2 characters");
    if (min_literal_length < 1) throw Error(ErrorCode::Config, "min_literal_length must be >= 1");
}

bool KeywordConfig::name_matches(std::string_view name) const {
    if (case_insensitive) {
        const std::string lowered = to_lower_ascii(name);
        return std::any_of(keywords.begin(), keywords.end(),
                           [&](const std::string& k) { return lowered.find(to_lower_ascii(k)) != std::string::npos; });
    }
    return std::any_of(keywords.begin(), keywords.end(),
                       [&](const std::string& k) { return name.find(k) != std::string_view::npos; });
}

std::string decode_smali_literal(std::string_view body, const WarningSink& warnings) {
    std::string out;
    out.reserve(body.size());
    std::uint32_t pending_high = 0; // 0: no unpaired high surrogate
    const auto flush_high = [&] {
        if (pending_high) {
            append_utf8(out, 0xFFFD);
            pending_high = 0;
        }
    };
    for (std::size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (c != '\\' || i + 1 >= body.size()) {
            flush_high();
            out.push_back(c);
            continue;
        }
        const char e = body[++i];
        if (e == 'u') {
            if (auto cu = parse_hex4(body.substr(i + 1))) {
                i += 4;
                if (*cu >= 0xD800 && *cu <= 0xDBFF) {
                    flush_high();
                    pending_high = *cu;
                } else if (*cu >= 0xDC00 && *cu <= 0xDFFF && pending_high) {
                    append_utf8(out, 0x10000 + ((pending_high - 0xD800) << 10) + (*cu - 0xDC00));
                    pending_high = 0;
                } else {
                    flush_high();
                    append_utf8(out, *cu);
                }
                continue;
            }
            flush_high();
            warn(warnings, "malformed \\u escape kept verbatim");
            out += "\\u";
            continue;
        }
        flush_high();
        switch (e) {
        case '\\': out.push_back('\\'); break;
        case '"': out.push_back('"'); break;
        case '\'': out.push_back('\''); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        default:
            warn(warnings, std::string("unknown escape \\") + e + " kept verbatim");
            out.push_back('\\');
            out.push_back(e);
        }
    }
    flush_high();
    return out;
}

std::string decode_xml_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '&') {
            out.push_back(text[i]);
            continue;
        }
        const auto semi = text.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back('&');
            continue;
        }
        const std::string_view ent = text.substr(i + 1, semi - i - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (ent.size() > 1 && ent[0] == '#') {
            try {
                const bool hex = ent[1] == 'x' || ent[1] == 'X';
                const std::string digits(ent.substr(hex ? 2 : 1));
                append_utf8(out, static_cast<std::uint32_t>(std::stoul(digits, nullptr, hex ? 16 : 10)));
            } catch (const std::exception&) {
                out.append(text.substr(i, semi - i + 1));
            }
        } else {
            out.append(text.substr(i, semi - i + 1));
        }
        i = semi;
    }
    return out;
}

std::vector<Definition> extract_definitions(const ScanUnit& unit, const KeywordConfig& config,
                                            const WarningSink& warnings) {
    std::vector<Definition> defs;
    switch (unit.kind) {
    case UnitKind::smali_text:
        smali_definitions(unit, defs, warnings);
        break;
    case UnitKind::manifest_text:
        xml_definitions(unit, defs);
        break;
    case UnitKind::resource_text:
        xml_definitions(unit, defs);
        text_pair_definitions(unit, defs, warnings);
        break;
    case UnitKind::dex_string_pool:
        if (config.dex_adjacency) dex_adjacent_definitions(unit, config, defs);
        break;
    }
    std::stable_sort(defs.begin(), defs.end(), [](const Definition& a, const Definition& b) { return a.line < b.line; });
    return defs;
}

bool is_numeric_only(std::string_view value) noexcept {
    return !value.empty() && std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; });
}

SecretCandidate flag_numeric_only(SecretCandidate candidate) {
    candidate.numeric_only = is_numeric_only(candidate.value);
    return candidate;
}

std::vector<SecretCandidate> extract_candidates(const ScanUnit& unit, const KeywordConfig& config,
                                                const WarningSink& warnings) {
    std::vector<SecretCandidate> out;
    for (auto& def : extract_definitions(unit, config, warnings)) {
        if (!config.name_matches(def.name)) continue;
        if (utf8_length(def.value) < config.min_literal_length) continue;
        SecretCandidate c;
        c.app = unit.app;
        c.rel_path = unit.rel_path;
        c.line = def.line;
        c.variable_name = std::move(def.name);
        c.value = std::move(def.value);
        out.push_back(flag_numeric_only(std::move(c)));
    }
    return out;
}

} // namespace apkleak
