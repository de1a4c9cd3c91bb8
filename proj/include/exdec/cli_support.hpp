#pragma once

// Helpers behind the command-line front end: argument parsing, flat config
// files, full-precision CSV output and machine-readable errors.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "exdec/errors.hpp"
#include "exdec/oracle.hpp"
#include "exdec/rare_event.hpp"

#ifndef EXDEC_VERSION
#define EXDEC_VERSION "0.0.0"
#endif

namespace exdec::cli {

inline constexpr const char* kVersion = EXDEC_VERSION;

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& text) {
    const std::string s = trim(text);
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw InvalidParameter("not a number: '" + text + "'");
    return v;
}

inline long parse_long(const std::string& text) {
    const std::string s = trim(text);
    long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw InvalidParameter("not an integer: '" + text + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_double(item));
    if (out.empty()) throw InvalidParameter("empty list");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split(s, ',')) out.push_back(static_cast<int>(parse_long(item)));
    if (out.empty()) throw InvalidParameter("empty list");
    return out;
}

inline DecoderKind parse_decoder(const std::string& s) {
    if (s == "mwpm") return DecoderKind::Mwpm;
    if (s == "uf" || s == "unionfind") return DecoderKind::UnionFind;
    throw InvalidParameter("unknown decoder '" + s + "' (expected mwpm or uf)");
}

enum class Setting { CodeCapacity, Phenomenological };

inline Setting parse_setting(const std::string& s) {
    if (s == "cc" || s == "code-capacity") return Setting::CodeCapacity;
    if (s == "phenom" || s == "phenomenological") return Setting::Phenomenological;
    throw InvalidParameter("unknown setting '" + s + "' (expected cc or phenom)");
}

inline const char* setting_name(Setting s) { return s == Setting::CodeCapacity ? "cc" : "phenom"; }

inline Event parse_event(const std::string& s) {
    if (s == "failure") return Event::failure();
    if (s == "abort") return Event::abort();
    if (s == "accept") return Event::accept();
    throw InvalidParameter("unknown event '" + s + "' (expected failure, abort or accept)");
}

// ---------------------------------------------------------------------------
// Config files

/// key = value lines; '#' starts a comment. Keys may be written with or
/// without leading dashes.
inline std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw InvalidParameter("config line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
    return parse_config(in);
}

/// Long flags named on the command line, without dashes.
inline std::set<std::string> flags_given(const std::vector<std::string>& args) {
    std::set<std::string> out;
    for (const auto& a : args)
        if (a.size() > 2 && a.rfind("--", 0) == 0) out.insert(a.substr(2, a.find('=') - 2));
    return out;
}

/// Splices the entries of the file named by --config into `args` right after
/// the subcommand at position 1. Entries whose flag already appears on the
/// command line are dropped, so flags win.
inline std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || args.size() < 2) return args;
    const auto given = flags_given(args);
    std::vector<std::string> extra;
    for (const auto& [key, value] : read_config_file(path)) {
        if (key == "config" || given.count(key)) continue;
        extra.push_back("--" + key);
        extra.push_back(value);
    }
    std::vector<std::string> out(args.begin(), args.begin() + 2);
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), args.begin() + 2, args.end());
    return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    auto r = std::to_chars(buf, buf + 16, v, 16);
    std::string s(buf, r.ptr);
    return std::string(16 - s.size(), '0') + s;
}

/// Canonical, order-independent rendering of a resolved configuration.
inline std::string canonical_config(const std::map<std::string, std::string>& cfg) {
    std::string out;
    for (const auto& [k, v] : cfg) out += k + "=" + v + "\n";
    return out;
}

inline std::string config_hash(const std::map<std::string, std::string>& cfg) {
    return hex64(fnv1a(canonical_config(cfg)));
}

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;  // without the leading '#'

    void add_row(std::vector<std::string> row) {
        if (row.size() != header.size()) throw InvalidParameter("csv row width does not match the header");
        rows.push_back(std::move(row));
    }
    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw InvalidParameter("csv has no column '" + name + "'");
    }
    const std::string& at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }
};

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

/// Version stamp, config hash and config lines as '#' comments, then the table.
inline void write_csv(std::ostream& out, const CsvTable& t, const std::map<std::string, std::string>& cfg) {
    out << "# exdec " << kVersion << "\n";
    out << "# config_hash=" << config_hash(cfg) << "\n";
    for (const auto& [k, v] : cfg) out << "# " << k << "=" << v << "\n";
    for (const auto& c : t.comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << csv_escape(t.header[i]);
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
        out << "\n";
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(trim(line.substr(1)));
            continue;
        }
        auto cells = split_csv_line(line);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
        } else {
            t.add_row(std::move(cells));
        }
    }
    if (!have_header) throw InvalidParameter("csv has no header line");
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open '" + path + "'");
    return read_csv(in);
}

// ---------------------------------------------------------------------------
// Errors

/// One-line JSON error record. Exit codes: 2 usage, 3 refused budget, 4 runtime.
inline std::string error_json(const std::string& kind, const std::string& message, int code,
                              const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j.dump();
}

}  // namespace exdec::cli
