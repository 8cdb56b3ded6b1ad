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

#include "support.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <regex>
#include <stdexcept>

namespace apkleak::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "apkleak-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- dex ----

std::vector<std::uint8_t> encode_mutf8(std::u16string_view units) {
    std::vector<std::uint8_t> out;
    for (char16_t u : units) {
        if (u != 0 && u < 0x80) {
            out.push_back(static_cast<std::uint8_t>(u));
        } else if (u < 0x800) {
            out.push_back(static_cast<std::uint8_t>(0xC0 | (u >> 6)));
            out.push_back(static_cast<std::uint8_t>(0x80 | (u & 0x3F)));
        } else {
            out.push_back(static_cast<std::uint8_t>(0xE0 | (u >> 12)));
            out.push_back(static_cast<std::uint8_t>(0x80 | ((u >> 6) & 0x3F)));
            out.push_back(static_cast<std::uint8_t>(0x80 | (u & 0x3F)));
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_mutf8(std::string_view ascii) {
    std::u16string units(ascii.begin(), ascii.end());
    return encode_mutf8(std::u16string_view(units));
}

namespace {

void put_u32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void put_uleb(std::vector<std::uint8_t>& b, std::uint32_t v) {
    do {
        std::uint8_t byte = v & 0x7F;
        v >>= 7;
        if (v) byte |= 0x80;
        b.push_back(byte);
    } while (v);
}

void put_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

} // namespace

std::vector<std::uint8_t> build_dex(const std::vector<RawDexString>& strings, const char* version) {
    std::vector<std::uint8_t> b(0x70, 0);
    const std::string magic = std::string("dex\n") + version;
    std::copy(magic.begin(), magic.end(), b.begin());
    b[7] = 0;
    put_u32(b, 0x24, 0x70);
    put_u32(b, 0x28, 0x12345678);
    put_u32(b, 0x38, static_cast<std::uint32_t>(strings.size()));
    put_u32(b, 0x3C, strings.empty() ? 0 : 0x70);
    const std::size_t ids = b.size();
    b.resize(ids + 4 * strings.size(), 0);
    for (std::size_t i = 0; i < strings.size(); ++i) {
        put_u32(b, ids + 4 * i, static_cast<std::uint32_t>(b.size()));
        put_uleb(b, strings[i].utf16_length);
        b.insert(b.end(), strings[i].bytes.begin(), strings[i].bytes.end());
        b.push_back(0);
    }
    put_u32(b, 0x20, static_cast<std::uint32_t>(b.size()));
    return b;
}

std::vector<std::uint8_t> build_dex_ascii(const std::vector<std::string>& strings) {
    std::vector<RawDexString> raw;
    for (const auto& s : strings) raw.push_back({encode_mutf8(std::string_view(s)), static_cast<std::uint32_t>(s.size())});
    return build_dex(raw);
}

std::string reference_mutf8_to_utf8(const std::vector<std::uint8_t>& bytes) {
    constexpr std::uint32_t kBad = 0xFFFFFFFF;
    std::vector<std::uint32_t> units;
    std::size_t i = 0;
    const auto is_cont = [&](std::size_t k) { return k < bytes.size() && (bytes[k] >> 6) == 2; };
    while (i < bytes.size()) {
        const std::uint8_t b = bytes[i];
        if (b >> 7 == 0) {
            units.push_back(b);
            i += 1;
        } else if (b >> 5 == 6 && is_cont(i + 1)) {
            units.push_back(((b & 0x1Fu) << 6) | (bytes[i + 1] & 0x3Fu));
            i += 2;
        } else if (b >> 4 == 14 && is_cont(i + 1) && is_cont(i + 2)) {
            units.push_back(((b & 0x0Fu) << 12) | ((bytes[i + 1] & 0x3Fu) << 6) | (bytes[i + 2] & 0x3Fu));
            i += 3;
        } else {
            units.push_back(kBad);
            i += 1;
        }
    }
    std::string out;
    for (std::size_t k = 0; k < units.size(); ++k) {
        const std::uint32_t u = units[k];
        if (u == kBad) {
            put_utf8(out, 0xFFFD);
        } else if (u >= 0xD800 && u < 0xDC00 && k + 1 < units.size() && units[k + 1] >= 0xDC00 && units[k + 1] < 0xE000) {
            put_utf8(out, 0x10000 + ((u - 0xD800) << 10) + (units[k + 1] - 0xDC00));
            ++k;
        } else if (u >= 0xD800 && u < 0xE000) {
            put_utf8(out, 0xFFFD);
        } else {
            put_utf8(out, u);
        }
    }
    return out;
}

// ---- zip ----

void write_zip(const fs::path& path, const std::vector<ZipFixtureEntry>& entries) {
    std::string out;
    const auto u16 = [&](std::uint16_t v) {
        out += static_cast<char>(v & 0xFF);
        out += static_cast<char>(v >> 8);
    };
    const auto u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
    };
    struct Central {
        std::string name;
        std::uint16_t method;
        std::uint32_t crc, csize, usize, offset;
    };
    std::vector<Central> central;
    for (const auto& e : entries) {
        std::string payload = e.data;
        if (e.deflate) {
            z_stream z{};
            deflateInit2(&z, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
            std::string buf(deflateBound(&z, static_cast<uLong>(e.data.size())) + 16, '\0');
            z.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(e.data.data()));
            z.avail_in = static_cast<uInt>(e.data.size());
            z.next_out = reinterpret_cast<Bytef*>(buf.data());
            z.avail_out = static_cast<uInt>(buf.size());
            deflate(&z, Z_FINISH);
            buf.resize(z.total_out);
            deflateEnd(&z);
            payload = std::move(buf);
        }
        const auto crc = static_cast<std::uint32_t>(
            crc32(0, reinterpret_cast<const Bytef*>(e.data.data()), static_cast<uInt>(e.data.size())));
        Central c{e.name, static_cast<std::uint16_t>(e.deflate ? 8 : 0), crc, static_cast<std::uint32_t>(payload.size()),
                  static_cast<std::uint32_t>(e.data.size()), static_cast<std::uint32_t>(out.size())};
        u32(0x04034b50);
        u16(20);
        u16(0);
        u16(c.method);
        u16(0);
        u16(0x21);
        u32(c.crc);
        u32(c.csize);
        u32(c.usize);
        u16(static_cast<std::uint16_t>(e.name.size()));
        u16(0);
        out += e.name;
        out += payload;
        central.push_back(c);
    }
    const auto cd_offset = static_cast<std::uint32_t>(out.size());
    for (const auto& c : central) {
        u32(0x02014b50);
        u16(20);
        u16(20);
        u16(0);
        u16(c.method);
        u16(0);
        u16(0x21);
        u32(c.crc);
        u32(c.csize);
        u32(c.usize);
        u16(static_cast<std::uint16_t>(c.name.size()));
        u16(0);
        u16(0);
        u16(0);
        u16(0);
        u32(0);
        u32(c.offset);
        out += c.name;
    }
    const auto cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;
    u32(0x06054b50);
    u16(0);
    u16(0);
    u16(static_cast<std::uint16_t>(central.size()));
    u16(static_cast<std::uint16_t>(central.size()));
    u32(cd_size);
    u32(cd_offset);
    u16(0);
    write_file(path, out);
}

// ---- oracles ----

std::vector<std::uint32_t> reference_code_points(std::string_view s) {
    std::vector<std::uint32_t> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b = static_cast<unsigned char>(s[i]);
        int extra = b < 0x80 ? 0 : b >= 0xF0 ? 3 : b >= 0xE0 ? 2 : b >= 0xC0 ? 1 : -1;
        if (extra < 0 || i + static_cast<std::size_t>(extra) >= s.size() + (extra == 0 ? 1 : 0)) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        std::uint32_t cp = extra == 0 ? b : (b & (0x3F >> extra));
        for (int k = 1; k <= extra; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

double naive_stddev(std::string_view utf8) {
    const auto cps = reference_code_points(utf8);
    double sum = 0;
    for (auto c : cps) sum += c;
    const double mean = sum / static_cast<double>(cps.size());
    double sq = 0;
    for (auto c : cps) sq += (c - mean) * (c - mean);
    return std::sqrt(sq / static_cast<double>(cps.size()));
}

std::vector<std::string> reference_split(const std::string& s) {
    static const std::regex runs("[A-Za-z]+");
    static const std::regex parts("[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+");
    std::vector<std::string> out;
    for (std::sregex_iterator r(s.begin(), s.end(), runs), end; r != end; ++r) {
        const std::string run = r->str();
        for (std::sregex_iterator p(run.begin(), run.end(), parts); p != end; ++p) out.push_back(p->str());
    }
    return out;
}

std::set<std::string> load_word_set(const fs::path& path) {
    std::set<std::string> words;
    std::ifstream in(path);
    for (std::string w; std::getline(in, w);) {
        std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
        if (!w.empty()) words.insert(w);
    }
    return words;
}

double reference_word_score(const std::string& s, const std::set<std::string>& words) {
    const auto parts = reference_split(s);
    if (parts.empty()) return 1.0;
    std::size_t misses = 0;
    for (auto p : parts) {
        std::transform(p.begin(), p.end(), p.begin(), [](unsigned char c) { return std::tolower(c); });
        misses += words.count(p) ? 0 : 1;
    }
    return static_cast<double>(misses) / static_cast<double>(parts.size());
}

std::string chars_of(const std::string& ranges) {
    std::string out;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (i + 2 < ranges.size() && ranges[i + 1] == '-') {
            for (char c = ranges[i]; c <= ranges[i + 2]; ++c) out += c;
            i += 2;
        } else {
            out += ranges[i];
        }
    }
    return out;
}

namespace {

// Ends reachable from `pos`, greedy order (longest class runs first).
void ends_from(const std::vector<Segment>& segs, std::size_t k, const std::string& s, std::size_t pos,
               std::vector<std::size_t>& ends) {
    if (k == segs.size()) {
        ends.push_back(pos);
        return;
    }
    const Segment& seg = segs[k];
    if (!seg.literal.empty()) {
        if (s.compare(pos, seg.literal.size(), seg.literal) == 0) ends_from(segs, k + 1, s, pos + seg.literal.size(), ends);
        return;
    }
    std::size_t run = 0;
    while (pos + run < s.size() && run < seg.max && seg.class_chars.find(s[pos + run]) != std::string::npos) ++run;
    for (std::size_t len = run + 1; len-- > seg.min;) {
        ends_from(segs, k + 1, s, pos + len, ends);
        if (len == 0) break;
    }
}

} // namespace

bool ShapeOracle::matches_exactly(const std::string& s) const {
    for (const auto& alt : alternatives) {
        std::vector<std::size_t> ends;
        ends_from(alt, 0, s, 0, ends);
        if (std::find(ends.begin(), ends.end(), s.size()) != ends.end()) return true;
    }
    return false;
}

std::vector<std::string> ShapeOracle::find_all(const std::string& text) const {
    std::vector<std::string> out;
    const auto in_boundary = [&](char c) { return boundary_chars.find(c) != std::string::npos; };
    std::size_t start = 0;
    while (start < text.size()) {
        bool found = false;
        if (start == 0 || !in_boundary(text[start - 1])) {
            for (const auto& alt : alternatives) {
                std::vector<std::size_t> ends;
                ends_from(alt, 0, text, start, ends);
                for (std::size_t e : ends) {
                    if (e > start && (e == text.size() || !in_boundary(text[e]))) {
                        out.push_back(text.substr(start, e - start));
                        start = e;
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
        }
        if (!found) ++start;
    }
    return out;
}

std::vector<PatternCase> reference_pattern_table() {
    const std::string g = chars_of("0-9A-Za-z_-");
    const std::string digits = chars_of("0-9");
    const std::string hex = chars_of("0-9a-f");
    const std::string alnum = chars_of("0-9a-zA-Z");
    std::vector<PatternCase> t;
    for (const char* s : {"google_maps", "google_translation", "google_cloud_vision", "youtube"})
        t.push_back({s, "single_key", {{{{"AIza", "", 0, 0}, {"", g, 35, 35}}}, g}});
    t.push_back({"fcm",
                 "server_key",
                 {{{{"AAAA", "", 0, 0}, {"", g, 7, 7}, {":", "", 0, 0}, {"", g, 140, 162}},
                   {{"AIzaSy", "", 0, 0}, {"", g, 33, 33}}},
                  g}});
    t.push_back({"facebook", "client_id", {{{{"", digits, 13, 17}}}, digits}});
    t.push_back({"facebook", "client_secret", {{{{"", hex, 32, 32}}}, hex}});
    t.push_back({"twitter", "client_id", {{{{"", alnum, 18, 25}}}, alnum}});
    t.push_back({"twitter", "client_secret", {{{{"", alnum, 40, 50}}}, alnum}});
    return t;
}

namespace {

std::string random_from(const std::string& chars, std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, chars.size() - 1);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += chars[pick(rng)];
    return s;
}

std::string build_alt(const std::vector<Segment>& alt, std::mt19937_64& rng, std::ptrdiff_t override_seg = -1,
                      std::size_t override_len = 0) {
    std::string s;
    for (std::size_t k = 0; k < alt.size(); ++k) {
        const Segment& seg = alt[k];
        if (!seg.literal.empty()) {
            s += seg.literal;
            continue;
        }
        std::size_t len = std::uniform_int_distribution<std::size_t>(seg.min, seg.max)(rng);
        if (static_cast<std::ptrdiff_t>(k) == override_seg) len = override_len;
        s += random_from(seg.class_chars, len, rng);
    }
    return s;
}

} // namespace

std::string random_conforming(const ShapeOracle& oracle, std::mt19937_64& rng) {
    const auto& alt = oracle.alternatives[std::uniform_int_distribution<std::size_t>(0, oracle.alternatives.size() - 1)(rng)];
    return build_alt(alt, rng);
}

std::vector<std::string> near_miss_mutants(const ShapeOracle& oracle, std::mt19937_64& rng) {
    static const std::string outsiders = ".!@#$%^&*~+=/ ";
    std::vector<std::string> out;
    for (const auto& alt : oracle.alternatives) {
        for (std::size_t k = 0; k < alt.size(); ++k) {
            const Segment& seg = alt[k];
            if (seg.literal.empty()) {
                if (seg.min > 0) out.push_back(build_alt(alt, rng, static_cast<std::ptrdiff_t>(k), seg.min - 1));
                out.push_back(build_alt(alt, rng, static_cast<std::ptrdiff_t>(k), seg.max + 1));
            }
        }
        // One invalid character inside a class segment.
        std::string base = build_alt(alt, rng);
        std::size_t offset = 0;
        for (const auto& seg : alt) {
            if (!seg.literal.empty()) {
                offset += seg.literal.size();
                continue;
            }
            std::string bad = outsiders;
            bad.erase(std::remove_if(bad.begin(), bad.end(),
                                     [&](char c) { return seg.class_chars.find(c) != std::string::npos; }),
                      bad.end());
            std::string m = base;
            const std::size_t len = std::min(seg.max, m.size() - offset);
            if (len > 0) {
                m[offset + std::uniform_int_distribution<std::size_t>(0, len - 1)(rng)] = random_from(bad, 1, rng)[0];
                out.push_back(m);
            }
            break;
        }
        // Wrong prefix: alter the first literal character, or the first
        // class character when there is no literal.
        std::string p = build_alt(alt, rng);
        if (!alt.front().literal.empty()) {
            const std::size_t at = std::uniform_int_distribution<std::size_t>(0, alt.front().literal.size() - 1)(rng);
            p[at] = p[at] == 'Q' ? 'R' : 'Q';
        } else {
            p[0] = '.';
        }
        out.push_back(p);
    }
    return out;
}

// ---- planted corpus ----

namespace {

std::string smali_field(const std::string& name, const std::string& value) {
    return ".field public static final " + name + ":Ljava/lang/String; = \"" + value + "\"";
}

struct FileBuilder {
    std::vector<std::string> lines;
    std::uint32_t add(std::string line) {
        lines.push_back(std::move(line));
        return static_cast<std::uint32_t>(lines.size());
    }
    std::string text() const {
        std::string t;
        for (const auto& l : lines) t += l + "\n";
        return t;
    }
};

} // namespace

PlantedCorpus build_planted_corpus(const fs::path& dir) {
    std::mt19937_64 rng(20240607);
    const std::string g = chars_of("0-9A-Za-z_-");
    const std::string g_no_a = chars_of("0-9B-Zb-z_-"); // keeps "AIza" out of the fcm tail
    const std::string alnum = chars_of("0-9a-zA-Z");

    PlantedCorpus c;
    c.package_id = "com.example.planted";
    c.root = dir / c.package_id;
    const auto plant = [&](const std::string& kind, const std::string& value, const std::string& path, std::uint32_t line) {
        c.secrets.push_back({kind, value, path, line});
        c.planted_lines[path].insert(line);
    };

    const std::string google_listing = "AIzaSy" + random_from(g, 33, rng);
    const std::string google_manifest = "AIza" + random_from("bcdefghijk", 1, rng) + random_from(g, 34, rng);
    const std::string gcm = "AIzaSy" + random_from(g, 33, rng);
    const std::string fcm = "AAAA" + random_from(g_no_a, 7, rng) + ":" + random_from(g_no_a, 152, rng);
    const std::string tw_id = random_from(alnum, 20, rng);
    const std::string tw_secret = random_from(alnum, 45, rng);
    const std::string fb_id = "1" + random_from("0123456789", 15, rng);
    const std::string fb_secret = random_from("0123456789abcdef", 32, rng);
    const std::string numeric_a = "7" + random_from("0123456789", 10, rng);
    const std::string numeric_b = "4" + random_from("0123456789", 13, rng);
    const std::string api_secret = random_from(alnum, 24, rng);
    const std::string aes_key = "wUbU" + random_from(alnum, 12, rng);

    {
        FileBuilder f;
        f.add(R"(<?xml version="1.0" encoding="utf-8"?>)");
        f.add(R"(<manifest xmlns:android="http://schemas.android.com/apk/res/android" package="com.example.planted">)");
        f.add("  <application android:label=\"Planted\">");
        const auto line = f.add("    <meta-data android:name=\"com.google.android.geo.API_KEY\" android:value=\"" +
                                google_manifest + "\"/>");
        f.add("  </application>");
        f.add("</manifest>");
        write_file(c.root / "AndroidManifest.xml", f.text());
        plant("google_key_manifest", google_manifest, "AndroidManifest.xml", line);
    }
    const std::string pkg = "smali/com/example/planted/";
    {
        FileBuilder f;
        f.add(".class public final Lcom/example/planted/Config;");
        f.add(".super Ljava/lang/Object;");
        f.add("");
        const auto line = f.add(smali_field("GOOGLE_API_KEY", google_listing));
        write_file(c.root / (pkg + "Config.smali"), f.text());
        plant("google_key_listing", google_listing, pkg + "Config.smali", line);
    }
    {
        FileBuilder f;
        f.add(".class public final Lcom/example/planted/Push;");
        f.add(".super Ljava/lang/Object;");
        const auto l1 = f.add(smali_field("GCM_SENDER_KEY", gcm));
        const auto l2 = f.add(smali_field("FCM_SERVER_KEY", fcm));
        write_file(c.root / (pkg + "Push.smali"), f.text());
        plant("gcm_key", gcm, pkg + "Push.smali", l1);
        plant("fcm_server_key", fcm, pkg + "Push.smali", l2);
    }
    {
        FileBuilder f;
        f.add(".class public final Lcom/example/planted/TwitterKeys;");
        f.add(".super Ljava/lang/Object;");
        const auto l1 = f.add(smali_field("TWITTER_ID", tw_id));
        const auto l2 = f.add(smali_field("TWITTER_SECRET", tw_secret));
        write_file(c.root / (pkg + "TwitterKeys.smali"), f.text());
        plant("twitter_client_id", tw_id, pkg + "TwitterKeys.smali", l1);
        plant("twitter_client_secret", tw_secret, pkg + "TwitterKeys.smali", l2);
        c.pairs["twitter"] = {tw_id, tw_secret};
    }
    {
        FileBuilder f;
        f.add(".class public final Lcom/example/planted/Social;");
        f.add(".super Ljava/lang/Object;");
        const auto l1 = f.add(smali_field("FB_APP", fb_id));
        f.add("");
        const auto l2 = f.add(smali_field("FB_APP_SECRET", fb_secret));
        write_file(c.root / (pkg + "Social.smali"), f.text());
        plant("facebook_client_id", fb_id, pkg + "Social.smali", l1);
        plant("facebook_client_secret", fb_secret, pkg + "Social.smali", l2);
        c.pairs["facebook"] = {fb_id, fb_secret};
    }
    {
        FileBuilder f;
        f.add(".class public final Lcom/example/planted/Prefs;");
        f.add(".super Ljava/lang/Object;");
        const auto l1 = f.add(smali_field("PIN_PASSWORD", numeric_a));
        const auto l2 = f.add(smali_field("BACKUP_TOKEN", numeric_b));
        const auto l3 = f.add(smali_field("API_SECRET", api_secret));
        f.add("");
        f.add(".method public static cipher()Ljavax/crypto/spec/SecretKeySpec;");
        f.add("    .registers 3");
        const auto l4 = f.add("    const-string v0, \"" + aes_key + "\"");
        f.add("    sput-object v0, Lcom/example/planted/Prefs;->AES_KEY:Ljava/lang/String;");
        f.add("    const/4 v1, 0x0");
        f.add("    return-object v1");
        f.add(".end method");
        write_file(c.root / (pkg + "Prefs.smali"), f.text());
        plant("numeric_only", numeric_a, pkg + "Prefs.smali", l1);
        plant("numeric_only", numeric_b, pkg + "Prefs.smali", l2);
        plant("generic_api_secret", api_secret, pkg + "Prefs.smali", l3);
        plant("aes_key", aes_key, pkg + "Prefs.smali", l4);
    }
    // Noise: 4 files x 50 lines with long literals, numbers and alphanumeric
    // runs that fit the multi-factor shapes but carry no keyword or hint.
    const char* noise_names[] = {"USER_NAME", "GREETING", "ENDPOINT", "LABEL", "ORDER_NUMBER", "COLOR_SCHEME"};
    for (int file = 0; file < 4; ++file) {
        FileBuilder f;
        f.add(".class public final Lcom/example/planted/noise/Noise" + std::to_string(file) + ";");
        f.add(".super Ljava/lang/Object;");
        while (f.lines.size() < 50) {
            const std::size_t i = f.lines.size();
            switch (i % 5) {
            case 0:
                f.add(smali_field(std::string(noise_names[i % 6]) + "_" + std::to_string(i),
                                  "hello world number " + std::to_string(i)));
                break;
            case 1: f.add("    const-string v0, \"https://example.com/catalog/item" + std::to_string(i) + "\""); break;
            case 2: f.add(smali_field("ORDER_NUMBER_" + std::to_string(i), "9" + random_from("0123456789", 14, rng))); break;
            case 3: f.add(smali_field("COLOR_SCHEME_" + std::to_string(i), random_from(alnum, 44, rng))); break;
            default: f.add("    invoke-static {v0}, Landroid/util/Log;->d(Ljava/lang/String;)I"); break;
            }
        }
        write_file(c.root / (pkg + "noise/Noise" + std::to_string(file) + ".smali"), f.text());
        c.noise_lines += f.lines.size();
    }
    return c;
}

} // namespace apkleak::testing
