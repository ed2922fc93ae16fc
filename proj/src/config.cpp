#include "mcids/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "mcids/error.hpp"

namespace mcids {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

struct LineParser {
    std::size_t line;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config line " + std::to_string(line) + ": " + what);
    }

    std::string string_value(std::string_view v) const {
        v = trim(v);
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
        if (v.find_first_of("\"[]") != std::string_view::npos || v.empty()) fail("expected a string");
        return std::string(v);
    }

    std::int64_t int_value(std::string_view v) const {
        v = trim(v);
        std::string digits;
        for (char c : v) {
            if (c != '_') digits.push_back(c);
        }
        std::int64_t out = 0;
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
        if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty()) {
            fail("expected an integer, got '" + std::string(v) + "'");
        }
        return out;
    }

    bool bool_value(std::string_view v) const {
        v = trim(v);
        if (v == "true") return true;
        if (v == "false") return false;
        fail("expected true or false");
    }

    RuleSet rules_value(std::string_view v, Protocol protocol) const {
        v = trim(v);
        if (v.size() < 2 || v.front() != '[' || v.back() != ']') fail("expected a [list] of rules");
        RuleSet set(protocol);
        auto body = trim(v.substr(1, v.size() - 2));
        if (body.empty()) return set;
        std::size_t start = 0;
        while (start <= body.size()) {
            auto comma = body.find(',', start);
            auto item = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (item.empty()) fail("empty list item");
            std::optional<RuleId> id;
            if (item.front() == '"') {
                id = RuleId::parse(string_value(item));
            } else if (std::isdigit(static_cast<unsigned char>(item.front()))) {
                auto n = int_value(item);
                if (n >= 1 && n <= 8) id = RuleId(protocol, static_cast<int>(n));
            } else {
                id = RuleId::parse(item);
            }
            if (!id) fail("unknown rule '" + std::string(item) + "'");
            if (id->protocol() != protocol) fail("rule " + id->to_string() + " belongs to the other protocol");
            set.insert(*id);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return set;
    }
};

template <class T>
T narrow(const LineParser& lp, std::int64_t v) {
    if (v < 0 || static_cast<std::uint64_t>(v) > std::numeric_limits<T>::max()) lp.fail("value out of range");
    return static_cast<T>(v);
}

}  // namespace

std::vector<std::pair<std::string, std::int64_t>> threshold_items(const Thresholds& t) {
    return {
        {"goose_burst_count", t.goose_burst_count},
        {"goose_burst_window_us", t.goose_burst_window_us},
        {"goose_gap_us", t.goose_gap_us},
        {"sv_interval_min_us", t.sv_interval_min_us},
        {"sv_interval_max_us", t.sv_interval_max_us},
        {"sv_burst_count", t.sv_burst_count},
        {"sv_burst_window_us", t.sv_burst_window_us},
    };
}

void ConfigOverrides::apply(Rulebook& book) const {
    for (int l = 0; l < 3; ++l) {
        for (const auto& set : levels[l]) book.set_level(static_cast<TrainingLevel>(l), set);
    }
}

void ConfigOverrides::apply(Thresholds& t) const {
    for (const auto& key : threshold_keys) {
        if (key == "goose_burst_count") t.goose_burst_count = thresholds.goose_burst_count;
        else if (key == "goose_burst_window_us") t.goose_burst_window_us = thresholds.goose_burst_window_us;
        else if (key == "goose_gap_us") t.goose_gap_us = thresholds.goose_gap_us;
        else if (key == "sv_interval_min_us") t.sv_interval_min_us = thresholds.sv_interval_min_us;
        else if (key == "sv_interval_max_us") t.sv_interval_max_us = thresholds.sv_interval_max_us;
        else if (key == "sv_burst_count") t.sv_burst_count = thresholds.sv_burst_count;
        else if (key == "sv_burst_window_us") t.sv_burst_window_us = thresholds.sv_burst_window_us;
    }
}

ConfigOverrides parse_config(std::string_view text) {
    ConfigOverrides out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        LineParser lp{line_no};
        auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) lp.fail("expected key = value");
        auto key = std::string(trim(line.substr(0, eq)));
        auto value = line.substr(eq + 1);

        if (key == "seed") {
            auto v = lp.int_value(value);
            if (v < 0) lp.fail("seed must not be negative");
            out.seed = static_cast<std::uint64_t>(v);
        } else if (key == "detector.mode") {
            auto m = parse_detector_mode(lp.string_value(value));
            if (!m) lp.fail("mode must be strict or per-stream");
            out.mode = *m;
        } else if (key == "detector.gr8_literal") {
            out.gr8_literal = lp.bool_value(value);
        } else if (key.rfind("thresholds.", 0) == 0) {
            auto name = key.substr(11);
            auto v = lp.int_value(value);
            auto& t = out.thresholds;
            if (name == "goose_burst_count") t.goose_burst_count = narrow<std::uint32_t>(lp, v);
            else if (name == "goose_burst_window_us") t.goose_burst_window_us = narrow<std::int64_t>(lp, v);
            else if (name == "goose_gap_us") t.goose_gap_us = narrow<std::int64_t>(lp, v);
            else if (name == "sv_interval_min_us") t.sv_interval_min_us = narrow<std::int64_t>(lp, v);
            else if (name == "sv_interval_max_us") t.sv_interval_max_us = narrow<std::int64_t>(lp, v);
            else if (name == "sv_burst_count") t.sv_burst_count = narrow<std::uint32_t>(lp, v);
            else if (name == "sv_burst_window_us") t.sv_burst_window_us = narrow<std::int64_t>(lp, v);
            else lp.fail("unknown threshold '" + name + "'");
            out.threshold_keys.push_back(name);
        } else {
            auto dot = key.find('.');
            std::optional<Protocol> proto;
            std::optional<TrainingLevel> level;
            if (dot != std::string::npos) {
                proto = parse_protocol(key.substr(0, dot));
                level = parse_training_level(key.substr(dot + 1));
            }
            if (!proto || !level) lp.fail("unknown key '" + key + "'");
            auto& slot = out.levels[static_cast<int>(*level)];
            auto set = lp.rules_value(value, *proto);
            std::erase_if(slot, [&](const RuleSet& s) { return s.protocol() == *proto; });
            slot.push_back(set);
        }
    }
    return out;
}

ConfigOverrides load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace mcids
