#include "holoquench/config.hpp"

#include "holoquench/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace holo {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while(a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while(b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string              cur;
    for(char ch : s) {
        if(ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct Entry {
    std::string value;
    int         line = 0;
};

class Reader {
  public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string &key) const { return entries_.count(key) > 0; }

    [[noreturn]] void fail(const std::string &key, const std::string &msg) const {
        const auto it = entries_.find(key);
        throw ConfigError(msg, it == entries_.end() ? 0 : it->second.line, key);
    }

    const std::string &raw(const std::string &key) const { return entries_.at(key).value; }

    double number(const std::string &key, const std::string &text) const {
        double v{};
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if(ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v))
            fail(key, "expected a number, got '" + text + "'");
        return v;
    }

    template <class T> T integer(const std::string &key) const {
        const auto &text = raw(key);
        T           v{};
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if(ec != std::errc() || p != text.data() + text.size())
            fail(key, "expected a non-negative integer, got '" + text + "'");
        return v;
    }

    bool boolean(const std::string &key) const {
        const auto &text = raw(key);
        if(text == "true") return true;
        if(text == "false") return false;
        fail(key, "expected true or false, got '" + text + "'");
    }

    std::vector<double> numbers(const std::string &key) const {
        std::vector<double> out;
        for(const auto &tok : split_list(raw(key))) out.push_back(number(key, tok));
        return out;
    }

    template <class F> auto wrap(const std::string &key, F &&f) const {
        try {
            return f(raw(key));
        } catch(const std::invalid_argument &e) {
            fail(key, e.what());
        }
    }

  private:
    std::map<std::string, Entry> entries_;
};

const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys = {"geometry",   "mu",          "t",      "task",
                                               "alphas",     "mus",         "renyi_ell", "offsets",
                                               "fit_margin", "fit_plateau", "probe_regions", "sample_outcomes",
                                               "seed",       "output"};
    return keys;
}

std::string num(double v) { return fmt::format("{}", v); }

std::string join_numbers(const std::vector<double> &v) {
    std::string out;
    for(std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
    return out;
}

} // namespace

ExperimentConfig parse_config_string(const std::string &text) {
    std::map<std::string, Entry> entries;
    std::istringstream           in(text);
    std::string                  line;
    int                          lineno = 0;
    while(std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const auto body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if(body.empty()) continue;
        const auto eq = body.find('=');
        if(eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
        const auto key   = trim(body.substr(0, eq));
        const auto value = trim(body.substr(eq + 1));
        if(key.empty()) throw ConfigError("missing key before '='", lineno);
        if(!known_keys().count(key)) throw ConfigError("unknown key", lineno, key);
        if(value.empty()) throw ConfigError("missing value", lineno, key);
        if(entries.count(key)) throw ConfigError("key given twice", lineno, key);
        entries.emplace(key, Entry{value, lineno});
    }

    const Reader     r(std::move(entries));
    ExperimentConfig cfg;

    if(!r.has("geometry")) throw ConfigError("missing required key", 0, "geometry");
    if(!r.has("task")) throw ConfigError("missing required key", 0, "task");
    cfg.geometry = r.wrap("geometry", [](const std::string &v) { return GeometrySpec::parse(v); });
    cfg.task     = r.wrap("task", [](const std::string &v) { return parse_task(v); });

    if(r.has("mu")) cfg.mu = r.number("mu", r.raw("mu"));
    else if(cfg.task == TaskKind::probe_map) cfg.mu = 1.0;
    else throw ConfigError("missing required key", 0, "mu");
    if(!(cfg.mu > 0.0)) r.fail("mu", "squeezing must be positive");

    if(r.has("t")) cfg.t = r.number("t", r.raw("t"));
    if(r.has("alphas")) cfg.alphas = r.numbers("alphas");
    for(double a : cfg.alphas)
        if(!(a > 0.0)) r.fail("alphas", "Renyi indices must be positive");
    if(r.has("mus")) cfg.mus = r.numbers("mus");
    for(double m : cfg.mus)
        if(!(m > 0.0)) r.fail("mus", "squeezing values must be positive");
    if(r.has("renyi_ell")) cfg.renyi_ell = r.integer<std::size_t>("renyi_ell");
    if(cfg.renyi_ell < 1) r.fail("renyi_ell", "region size must be at least 1");
    if(r.has("offsets")) cfg.offsets = r.wrap("offsets", [](const std::string &v) { return parse_offset_mode(v); });
    if(r.has("fit_margin")) cfg.fit_margin = r.integer<std::size_t>("fit_margin");
    if(r.has("fit_plateau")) cfg.fit_plateau = r.boolean("fit_plateau");
    if(r.has("probe_regions")) {
        for(const auto &tok : split_list(r.raw("probe_regions")))
            cfg.probe_regions.push_back(r.wrap("probe_regions", [&](const std::string &) { return ProbeRegionSpec::parse(tok); }));
    }
    if(r.has("sample_outcomes")) cfg.sample_outcomes = r.boolean("sample_outcomes");
    if(r.has("seed")) cfg.seed = r.integer<std::uint64_t>("seed");
    if(r.has("output")) cfg.output = r.raw("output");

    // consistency with geometry and task
    if(cfg.task == TaskKind::probe_map && cfg.geometry.kind != GeometryKind::disk)
        r.fail("task", "probe_map needs a disk geometry");
    if(cfg.task == TaskKind::probe_map && cfg.probe_regions.empty()) cfg.probe_regions = default_probe_regions();
    if(cfg.task == TaskKind::squeeze_sweep) {
        if(cfg.mus.size() < 3) r.fail(r.has("mus") ? "mus" : "task", "squeeze_sweep needs at least 3 mu values");
        const auto [lo, hi] = std::minmax_element(cfg.mus.begin(), cfg.mus.end());
        if(*hi < 10.0 * *lo * (1.0 - 1e-12)) r.fail("mus", "squeeze_sweep mu values must span a decade");
    }
    if(cfg.task == TaskKind::renyi_scan) {
        if(cfg.geometry.kind == GeometryKind::wormhole) r.fail("task", "renyi_scan needs a single-boundary geometry");
        if(cfg.mus.empty()) cfg.mus = {cfg.mu};
    }
    if(cfg.alphas.empty()) r.fail("alphas", "need at least one Renyi index");
    try {
        build_graph(cfg.geometry);
    } catch(const std::invalid_argument &e) {
        r.fail("geometry", e.what());
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_string(buf.str());
}

std::string config_echo(const ExperimentConfig &cfg) {
    std::string out;
    auto        put = [&](const std::string &k, const std::string &v) { out += k + " = " + v + "\n"; };
    put("geometry", cfg.geometry.str());
    put("task", std::string(to_string(cfg.task)));
    put("mu", num(cfg.mu));
    put("t", num(cfg.t));
    put("alphas", join_numbers(cfg.alphas));
    if(!cfg.mus.empty()) put("mus", join_numbers(cfg.mus));
    put("renyi_ell", std::to_string(cfg.renyi_ell));
    put("offsets", std::string(to_string(cfg.offsets)));
    put("fit_margin", std::to_string(cfg.fit_margin));
    put("fit_plateau", cfg.fit_plateau ? "true" : "false");
    if(!cfg.probe_regions.empty()) {
        std::string list;
        for(std::size_t i = 0; i < cfg.probe_regions.size(); ++i) list += (i ? ", " : "") + cfg.probe_regions[i].name;
        put("probe_regions", list);
    }
    put("sample_outcomes", cfg.sample_outcomes ? "true" : "false");
    put("seed", std::to_string(cfg.seed));
    put("output", cfg.output);
    return out;
}

} // namespace holo
