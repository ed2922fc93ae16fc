// mcids: generate, detect and evaluate GOOSE / SV feature logs.
//
// Exit codes: 0 ok, 64 usage, 2 I/O, 3 input order or schema, 4 evaluation mismatch.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcids/config.hpp"
#include "mcids/error.hpp"
#include "mcids/goose_rules.hpp"
#include "mcids/ingest.hpp"
#include "mcids/metrics.hpp"
#include "mcids/report.hpp"
#include "mcids/rulebook.hpp"
#include "mcids/sv_rules.hpp"
#include "mcids/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mcids;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitIo = 2;
constexpr int kExitInput = 3;
constexpr int kExitEval = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string now_utc() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

Protocol protocol_arg(const std::string& text) {
    auto p = parse_protocol(text);
    if (!p) throw UsageError("--protocol must be goose or sv");
    return *p;
}

// ---- shared detector settings -------------------------------------------

struct DetectSettings {
    std::string level = "full";
    std::string rules;
    std::string mode = "strict";
    bool gr8_literal = false;
    std::string config;
    std::map<std::string, std::int64_t> threshold_flags;
};

void add_detect_flags(CLI::App* cmd, DetectSettings& s) {
    cmd->add_option("--level", s.level, "Training level: without, partial or full")->capture_default_str();
    cmd->add_option("--rules", s.rules, "Explicit rule list, e.g. GR1,GR3,GR7 (overrides --level)");
    cmd->add_option("--mode", s.mode, "Detector mode: strict or per-stream")->capture_default_str();
    cmd->add_flag("--gr8-literal", s.gr8_literal, "Apply GR8 to records whose data changed");
    cmd->add_option("--config", s.config, "key = value configuration file; overrides flags");
    for (const auto& [name, value] : threshold_items(Thresholds{})) {
        auto flag = "--" + name;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        cmd->add_option_function<std::int64_t>(
            flag, [&s, name = name](std::int64_t v) { s.threshold_flags[name] = v; },
            "Threshold override (default " + std::to_string(value) + ")");
    }
}

struct Resolved {
    Rulebook book;
    Thresholds thresholds;
    DetectorMode mode = DetectorMode::Strict;
    bool gr8_literal = false;
    std::optional<std::uint64_t> seed;
    std::optional<RuleSet> explicit_rules[2];
};

Resolved resolve(const DetectSettings& s) {
    Resolved r;
    auto mode = parse_detector_mode(s.mode);
    if (!mode) throw UsageError("--mode must be strict or per-stream");
    r.mode = *mode;
    r.gr8_literal = s.gr8_literal;
    std::string text;
    for (const auto& [name, v] : s.threshold_flags) text += "thresholds." + name + " = " + std::to_string(v) + "\n";
    parse_config(text).apply(r.thresholds);
    if (!s.rules.empty()) {
        RuleSet g(Protocol::Goose), v(Protocol::Sv);
        std::stringstream ss(s.rules);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto id = RuleId::parse(item);
            if (!id) throw UsageError("unknown rule '" + item + "'");
            (id->protocol() == Protocol::Goose ? g : v).insert(*id);
        }
        r.explicit_rules[0] = g;
        r.explicit_rules[1] = v;
    }
    if (!s.config.empty()) {
        ConfigOverrides cfg;
        try {
            cfg = load_config(s.config);
        } catch (const std::ios_base::failure& e) {
            throw IoError(e.what());
        }
        cfg.apply(r.book);
        cfg.apply(r.thresholds);
        if (cfg.mode) r.mode = *cfg.mode;
        if (cfg.gr8_literal) r.gr8_literal = *cfg.gr8_literal;
        r.seed = cfg.seed;
    }
    return r;
}

DetectorOptions options_for(const Resolved& r, Protocol protocol, TrainingLevel level) {
    DetectorOptions o(r.book.level(level, protocol));
    o.thresholds = r.thresholds;
    o.mode = r.mode;
    o.gr8_literal = r.gr8_literal;
    return o;
}

DetectorOptions options_for(const Resolved& r, Protocol protocol, const std::string& level_text) {
    if (const auto& rules = r.explicit_rules[static_cast<int>(protocol)]) {
        auto o = options_for(r, protocol, TrainingLevel::Full);
        o.rules = *rules;
        return o;
    }
    auto level = parse_training_level(level_text);
    if (!level) throw UsageError("--level must be without, partial or full");
    return options_for(r, protocol, *level);
}

json options_json(const DetectorOptions& o) {
    json rules = json::array();
    for (auto id : o.rules.ids()) rules.push_back(id.to_string());
    json th;
    for (const auto& [name, v] : threshold_items(o.thresholds)) th[name] = v;
    return json{{"rules", rules},
                {"mode", std::string(to_string(o.mode))},
                {"gr8_literal", o.gr8_literal},
                {"thresholds", th}};
}

// ---- input loading --------------------------------------------------------

struct Loaded {
    Protocol protocol = Protocol::Goose;
    std::vector<GooseEntry> goose;
    std::vector<SvEntry> sv;

    std::size_t size() const { return protocol == Protocol::Goose ? goose.size() : sv.size(); }
    std::string id() const { return protocol == Protocol::Goose ? stream_id(goose) : stream_id(sv); }
};

Loaded load_stream(const std::string& path, std::optional<Protocol> expected) {
    auto data = read_file(path);
    Loaded l;
    if (fs::path(path).extension() == ".csv") {
        l.protocol = sniff_csv_protocol(data);
        if (l.protocol == Protocol::Goose) l.goose = parse_csv_goose(data);
        else l.sv = parse_csv_sv(data);
    } else {
        std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(data.data()), data.size());
        auto records = read_frame_stream(bytes);
        l.protocol = expected.value_or(records.empty() || std::holds_alternative<GooseRecord>(records.front())
                                           ? Protocol::Goose
                                           : Protocol::Sv);
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (auto* g = std::get_if<GooseRecord>(&records[i]); g && l.protocol == Protocol::Goose) {
                l.goose.push_back(make_entry(*g));
            } else if (auto* s = std::get_if<SvRecord>(&records[i]); s && l.protocol == Protocol::Sv) {
                l.sv.push_back(make_entry(*s));
            } else {
                throw SchemaError("frame " + std::to_string(i) + " belongs to the other protocol");
            }
        }
    }
    if (expected && *expected != l.protocol) {
        throw SchemaError("input holds " + std::string(to_string(l.protocol)) + " records, expected " +
                          std::string(to_string(*expected)));
    }
    return l;
}

std::vector<LabelSet> label_loaded(const Loaded& l, const DetectorOptions& o) {
    return l.protocol == Protocol::Goose ? label_goose_stream(l.goose, o) : label_sv_stream(l.sv, o);
}

std::vector<Finding> findings_from(const Loaded& l, const std::vector<LabelSet>& labels) {
    std::vector<Finding> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) continue;
        out.push_back({i, labels[i],
                       l.protocol == Protocol::Goose ? stream_key(l.goose[i].record) : stream_key(l.sv[i].record)});
    }
    return out;
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
    std::string protocol;
    std::optional<double> duration_s;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> scenarios;
    std::vector<std::size_t> positions;
    std::uint32_t flood_count = 15;
    std::int64_t flood_span_us = 0;
    std::int64_t gap_us = 12'000'000;
    std::uint16_t jump_to = 5000;
    std::int64_t jitter_us = 60;
    std::optional<std::size_t> positives;
    std::optional<std::size_t> negatives;
    std::optional<std::int64_t> heartbeat_us;
    std::optional<double> state_change_rate;
    bool reproducible = false;
};

template <class S>
void write_stream_files(const S& s, const GenerateArgs& a, json meta) {
    fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    const bool csv = a.format == "csv" || a.format == "both";
    const bool bin = a.format == "bin" || a.format == "both";
    if (bin) {
        for (std::size_t i = 0; i < s.entries.size(); ++i) {
            const auto& e = s.entries[i];
            if (!e.time_known || e.raw_time != e.record.time.to_string()) {
                throw UsageError("record " + std::to_string(i) +
                                 " has non-canonical time text that the binary format cannot carry; use --format csv");
            }
        }
    }
    const auto id = stream_id(std::span(s.entries));
    if (csv) write_file(dir / "stream.csv", to_csv(std::span(s.entries)));
    if (bin) {
        std::vector<Record> records;
        records.reserve(s.entries.size());
        for (const auto& e : s.entries) records.emplace_back(e.record);
        auto out = open_out(dir / "stream.bin");
        write_frame_stream(out, records);
        if (!out) throw IoError("write failed: " + (dir / "stream.bin").string());
    }
    {
        auto out = open_out(dir / "labels.jsonl");
        write_labels(out, id, s.protocol, s.truth);
    }
    meta["stream_id"] = id;
    meta["protocol"] = std::string(to_string(s.protocol));
    meta["records"] = s.entries.size();
    meta["positives"] = s.positives();
    meta["seed"] = s.seed;
    meta["rng"] = s.rng;
    meta["profile"] = s.profile;
    meta["scenarios"] = s.scenarios;
    json th;
    for (const auto& [name, v] : threshold_items(Thresholds{})) th[name] = v;
    meta["thresholds"] = th;
    if (!a.reproducible) meta["generated_at"] = now_utc();
    write_file(dir / "meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << s.entries.size() << " records (" << s.positives() << " anomalous) to " << dir.string()
              << "\n";
}

int cmd_generate(const GenerateArgs& a) {
    if (a.format != "csv" && a.format != "bin" && a.format != "both") {
        throw UsageError("--format must be csv, bin or both");
    }
    const auto protocol = protocol_arg(a.protocol);
    json meta;
    meta["format"] = a.format;

    if (a.positives || a.negatives) {
        if (!a.scenarios.empty()) throw UsageError("--positives/--negatives cannot be combined with --scenario");
        auto s = scale_to_counts(protocol, a.positives.value_or(0), a.negatives.value_or(0), a.seed);
        std::visit([&](const auto& st) { write_stream_files(st, a, meta); }, s);
        return 0;
    }

    auto profile = protocol == Protocol::Goose ? BenignProfile::goose_default() : BenignProfile::sv_default();
    if (a.duration_s) {
        if (*a.duration_s < 0) throw UsageError("--duration must not be negative");
        profile.duration_us = std::llround(*a.duration_s * 1e6);
    }
    if (a.heartbeat_us) profile.goose_heartbeat_us = *a.heartbeat_us;
    if (a.state_change_rate) profile.goose_state_change_rate = *a.state_change_rate;

    auto stream = generate_benign(profile, a.seed);
    if (a.positions.size() > a.scenarios.size()) throw UsageError("more --position values than --scenario values");
    DeterministicRng rng(a.seed ^ 0x5ce7a110ULL);
    for (std::size_t i = 0; i < a.scenarios.size(); ++i) {
        auto kind = parse_attack_kind(a.scenarios[i]);
        if (!kind) throw UsageError("unknown scenario '" + a.scenarios[i] + "'");
        AttackScenario sc;
        sc.kind = *kind;
        sc.seed = rng.next();
        sc.flood_count = a.flood_count;
        sc.flood_span_us = a.flood_span_us;
        sc.gap_us = a.gap_us;
        sc.jump_to = a.jump_to;
        sc.jitter_us = a.jitter_us;
        const auto n = std::visit([](const auto& s) { return s.entries.size(); }, stream);
        if (n == 0) throw UsageError("cannot inject into an empty stream");
        sc.position = i < a.positions.size() ? a.positions[i] : n / 2;
        stream = inject(stream, sc);
    }
    std::visit([&](const auto& st) { write_stream_files(st, a, meta); }, stream);
    return 0;
}

// ---- detect ---------------------------------------------------------------

struct DetectArgs {
    std::string input;
    std::string protocol;
    std::string out;
    std::string summary;
    bool reproducible = false;
    DetectSettings settings;
};

int cmd_detect(const DetectArgs& a) {
    const auto resolved = resolve(a.settings);
    std::optional<Protocol> expected;
    if (!a.protocol.empty()) expected = protocol_arg(a.protocol);
    auto loaded = load_stream(a.input, expected);
    const auto options = options_for(resolved, loaded.protocol, a.settings.level);
    const auto labels = label_loaded(loaded, options);
    const auto findings = findings_from(loaded, labels);

    auto extra = options_json(options);
    if (!a.reproducible) extra["generated_at"] = now_utc();
    std::ostringstream body;
    if (loaded.protocol == Protocol::Goose) {
        write_findings<GooseEntry>(body, loaded.id(), loaded.protocol, loaded.goose, findings, extra.dump());
    } else {
        write_findings<SvEntry>(body, loaded.id(), loaded.protocol, loaded.sv, findings, extra.dump());
    }
    if (a.out.empty() || a.out == "-") {
        std::cout << body.str();
    } else {
        write_file(a.out, body.str());
    }
    auto summary = summary_json(loaded.size(), findings, options.rules);
    if (!a.summary.empty()) write_file(a.summary, summary + "\n");
    else std::cerr << summary << "\n";
    return 0;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
    std::string truth;
    std::string findings;
    std::string input;
    std::string levels;
    std::string out;
    DetectSettings settings;
};

LabelDocument read_doc(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    return read_label_document(in);
}

void require_match(const LabelDocument& truth, const std::string& id, Protocol protocol, std::size_t records,
                   const std::string& what) {
    if (truth.stream_id != id) {
        throw EvalError(what + " stream id " + id + " does not match labels stream id " + truth.stream_id);
    }
    if (truth.protocol != protocol || truth.records != records) {
        throw EvalError(what + " does not cover the same records as the labels");
    }
}

int cmd_evaluate(const EvaluateArgs& a) {
    const auto truth = read_doc(a.truth);
    json out;
    std::ostringstream text;

    if (!a.levels.empty()) {
        if (a.input.empty()) throw UsageError("--levels needs --input");
        const auto resolved = resolve(a.settings);
        auto loaded = load_stream(a.input, truth.protocol);
        require_match(truth, loaded.id(), loaded.protocol, loaded.size(), "input");
        std::map<TrainingLevel, MetricsReport> reports;
        std::stringstream ss(a.levels);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto level = parse_training_level(item);
            if (!level) throw UsageError("unknown level '" + item + "'");
            auto labels = label_loaded(loaded, options_for(resolved, loaded.protocol, *level));
            auto cm = confusion(truth.labels, labels);
            auto report = compute_metrics(cm);
            reports[*level] = report;
            out["levels"][std::string(to_string(*level))] = json::parse(metrics_json(cm, report));
            text << "== " << to_string(*level) << " ==\n" << metrics_table(cm, report) << "\n";
        }
        for (const auto& d : level_comparison(reports)) {
            out["accuracy_deltas_pp"].push_back(
                {{"from", std::string(to_string(d.from))}, {"to", std::string(to_string(d.to))}, {"delta", d.accuracy_pp}});
            char buf[96];
            std::snprintf(buf, sizeof buf, "accuracy %s -> %s: %+.4f pp\n", std::string(to_string(d.from)).c_str(),
                          std::string(to_string(d.to)).c_str(), d.accuracy_pp);
            text << buf;
        }
    } else {
        if (a.findings.empty()) throw UsageError("evaluate needs --findings or --input with --levels");
        const auto predicted = read_doc(a.findings);
        require_match(truth, predicted.stream_id, predicted.protocol, predicted.records, "findings");
        auto cm = confusion(truth.labels, predicted.labels);
        auto report = compute_metrics(cm);
        out = json::parse(metrics_json(cm, report));
        json per_label;
        for (const auto& [label, lcm] : per_label_confusion(truth.labels, predicted.labels)) {
            per_label[std::string(to_string(label))] = {{"tp", lcm.tp}, {"tn", lcm.tn}, {"fp", lcm.fp}, {"fn", lcm.fn}};
        }
        out["per_label"] = per_label;
        text << metrics_table(cm, report);
    }
    out["stream_id"] = truth.stream_id;
    if (!a.out.empty()) write_file(a.out, out.dump(2) + "\n");
    std::cout << text.str();
    return 0;
}

// ---- rules ----------------------------------------------------------------

int cmd_rules(const std::string& protocol_text, const DetectSettings& s) {
    const auto resolved = resolve(s);
    std::vector<Protocol> protocols;
    if (protocol_text.empty()) protocols = {Protocol::Goose, Protocol::Sv};
    else protocols = {protocol_arg(protocol_text)};
    for (auto p : protocols) {
        const auto o = options_for(resolved, p, s.level);
        for (auto id : all_rules()) {
            if (id.protocol() != p) continue;
            std::cout << (o.rules.contains(id) ? "* " : "  ") << id.to_string() << "  "
                      << describe_rule(id, o.thresholds).to_string() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IEC 61850 GOOSE / SV rule-based anomaly detection"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a synthetic labeled stream");
    g->add_option("--protocol", gen.protocol, "goose or sv")->required();
    g->add_option("--duration", gen.duration_s, "Stream length in seconds");
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("-o,--out", gen.out, "Output directory")->required();
    g->add_option("--format", gen.format, "csv, bin or both")->capture_default_str();
    g->add_option("--scenario", gen.scenarios, "Attack to inject (repeatable)");
    g->add_option("--position", gen.positions, "Record index per --scenario (default: middle)");
    g->add_option("--flood-count", gen.flood_count)->capture_default_str();
    g->add_option("--flood-span-us", gen.flood_span_us, "0 = protocol default");
    g->add_option("--gap-us", gen.gap_us)->capture_default_str();
    g->add_option("--jump-to", gen.jump_to)->capture_default_str();
    g->add_option("--jitter-us", gen.jitter_us)->capture_default_str();
    g->add_option("--positives", gen.positives, "Anomalous record count (fixed-count mode)");
    g->add_option("--negatives", gen.negatives, "Normal record count (fixed-count mode)");
    g->add_option("--heartbeat-us", gen.heartbeat_us, "GOOSE retransmission interval");
    g->add_option("--state-change-rate", gen.state_change_rate, "GOOSE state changes per second");
    g->add_flag("--reproducible", gen.reproducible, "Omit the generation timestamp");

    DetectArgs det;
    auto* d = app.add_subcommand("detect", "Run the rules over a capture");
    d->add_option("-i,--input", det.input, ".csv feature log or binary frame stream")->required();
    d->add_option("--protocol", det.protocol, "Expected protocol");
    d->add_option("-o,--out", det.out, "Findings file (JSON lines, default stdout)");
    d->add_option("--summary", det.summary, "Summary file (default stderr)");
    d->add_flag("--reproducible", det.reproducible, "Omit the run timestamp");
    add_detect_flags(d, det.settings);

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "Score findings against a labels sidecar");
    e->add_option("--truth", ev.truth, "Labels sidecar")->required();
    e->add_option("--findings", ev.findings, "Findings file from detect");
    e->add_option("-i,--input", ev.input, "Stream to detect at each of --levels");
    e->add_option("--levels", ev.levels, "Comma-separated levels, e.g. without,partial,full");
    e->add_option("-o,--out", ev.out, "Metrics JSON file");
    add_detect_flags(e, ev.settings);

    std::string rules_protocol;
    DetectSettings rules_settings;
    auto* r = app.add_subcommand("rules", "List the rule catalog");
    r->add_option("--protocol", rules_protocol);
    add_detect_flags(r, rules_settings);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kExitUsage;
    }

    try {
        if (g->parsed()) return cmd_generate(gen);
        if (d->parsed()) return cmd_detect(det);
        if (e->parsed()) return cmd_evaluate(ev);
        return cmd_rules(rules_protocol, rules_settings);
    } catch (const UsageError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitIo;
    } catch (const OrderError& err) {
        std::cerr << "error: record " << err.index() << ": " << err.what() << "\n";
        return kExitInput;
    } catch (const RowError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const SchemaError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const TruncationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const UnknownKindError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const TlvError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const EvalError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitEval;
    } catch (const ProfileError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const InjectError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitIo;
    }
}
