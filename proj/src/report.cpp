#include "mcids/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mcids/error.hpp"
#include "mcids/ingest.hpp"

namespace mcids {

using nlohmann::json;

namespace {

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json header(const char* kind, const std::string& id, Protocol protocol, std::size_t records) {
    return json{{"kind", kind}, {"stream_id", id}, {"protocol", std::string(to_string(protocol))}, {"records", records}};
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string stream_id(std::span<const GooseEntry> entries) { return fnv1a_hex(to_csv(entries)); }
std::string stream_id(std::span<const SvEntry> entries) { return fnv1a_hex(to_csv(entries)); }

void write_labels(std::ostream& out, const std::string& id, Protocol protocol, std::span<const LabelSet> labels) {
    out << header("labels", id, protocol, labels.size()).dump() << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) continue;
        out << json{{"index", i}, {"labels", labels[i].to_strings()}}.dump() << '\n';
    }
}

template <class E>
void write_findings(std::ostream& out, const std::string& id, Protocol protocol, std::span<const E> entries,
                    std::span<const Finding> findings, const std::string& header_extra_json) {
    auto h = header("findings", id, protocol, entries.size());
    auto extra = json::parse(header_extra_json);
    for (auto it = extra.begin(); it != extra.end(); ++it) h[it.key()] = it.value();
    out << h.dump() << '\n';
    for (const auto& f : findings) {
        const auto& e = entries[f.index];
        json line{{"index", f.index},
                  {"labels", f.labels.to_strings()},
                  {"stream", {{"sm", f.stream.sm.to_string()}, {"dm", f.stream.dm.to_string()}, {"appid", f.stream.appid}}},
                  {"time", e.time_known ? e.record.time.to_string() : e.raw_time}};
        if (e.time_known && e.raw_time != e.record.time.to_string()) line["raw_time"] = e.raw_time;
        out << line.dump() << '\n';
    }
}

template void write_findings<GooseEntry>(std::ostream&, const std::string&, Protocol, std::span<const GooseEntry>,
                                         std::span<const Finding>, const std::string&);
template void write_findings<SvEntry>(std::ostream&, const std::string&, Protocol, std::span<const SvEntry>,
                                      std::span<const Finding>, const std::string&);

LabelDocument read_label_document(std::istream& in) {
    LabelDocument doc;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    try {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            auto j = json::parse(line);
            if (!have_header) {
                doc.kind = j.at("kind").get<std::string>();
                doc.stream_id = j.at("stream_id").get<std::string>();
                auto p = parse_protocol(j.at("protocol").get<std::string>());
                if (!p) throw SchemaError("line 1: unknown protocol");
                doc.protocol = *p;
                doc.records = j.at("records").get<std::size_t>();
                doc.labels.assign(doc.records, LabelSet{});
                have_header = true;
                continue;
            }
            auto index = j.at("index").get<std::size_t>();
            if (index >= doc.records) {
                throw SchemaError("line " + std::to_string(line_no) + ": index " + std::to_string(index) +
                                  " beyond " + std::to_string(doc.records) + " records");
            }
            for (const auto& s : j.at("labels")) {
                auto label = parse_label(s.get<std::string>());
                if (!label) throw SchemaError("line " + std::to_string(line_no) + ": unknown label " + s.dump());
                doc.labels[index].insert(*label);
            }
        }
    } catch (const json::exception& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_header) throw SchemaError("missing header line");
    return doc;
}

std::string summary_json(std::size_t records, std::span<const Finding> findings, const RuleSet& rules) {
    std::map<std::string, std::size_t> per_rule;
    for (auto id : rules.ids()) per_rule[id.to_string()] = 0;
    std::map<std::string, std::size_t> per_label;
    for (const auto& f : findings) {
        for (auto label : f.labels.to_vector()) {
            ++per_label[std::string(to_string(label))];
            for (auto id : rules_for_label(label)) {
                if (rules.contains(id)) ++per_rule[id.to_string()];
            }
        }
    }
    json j{{"records", records}, {"flagged_records", findings.size()}, {"findings_per_rule", per_rule},
           {"findings_per_label", per_label}};
    return j.dump(2);
}

std::string metrics_json(const ConfusionMatrix& cm, const MetricsReport& r) {
    json j{{"confusion", {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}}},
           {"tpr", r.tpr},
           {"fpr", r.fpr},
           {"fnr", r.fnr},
           {"tnr", r.tnr},
           {"precision", r.precision},
           {"npv", r.npv},
           {"accuracy", r.accuracy},
           {"f1", r.f1},
           {"markedness", r.markedness},
           {"informedness", r.informedness},
           {"mcc", r.mcc}};
    return j.dump(2);
}

std::string metrics_table(const ConfusionMatrix& cm, const MetricsReport& r) {
    struct Row {
        const char* name;
        const char* description;
        std::string value;
    };
    const Row rows[] = {
        {"TP", "anomalous records flagged", std::to_string(cm.tp)},
        {"TN", "normal records passed", std::to_string(cm.tn)},
        {"FP", "normal records flagged", std::to_string(cm.fp)},
        {"FN", "anomalous records missed", std::to_string(cm.fn)},
        {"TPR", "TP / (TP + FN)", fixed4(r.tpr)},
        {"FPR", "FP / (FP + TN)", fixed4(r.fpr)},
        {"FNR", "FN / (FN + TP)", fixed4(r.fnr)},
        {"Precision", "TP / (TP + FP)", fixed4(r.precision)},
        {"Accuracy", "(TP + TN) / all", fixed4(r.accuracy)},
        {"F1", "2TP / (2TP + FP + FN)", fixed4(r.f1)},
        {"Markedness", "PPV + NPV - 1", fixed4(r.markedness)},
        {"Informedness", "TPR + TNR - 1", fixed4(r.informedness)},
        {"MCC", "(TP*TN - FP*FN) / sqrt(margins)", fixed4(r.mcc)},
    };
    std::size_t w_name = 6, w_desc = 11;
    for (const auto& row : rows) {
        w_name = std::max(w_name, std::string_view(row.name).size());
        w_desc = std::max(w_desc, std::string_view(row.description).size());
    }
    std::ostringstream os;
    auto emit = [&](std::string_view a, std::string_view b, std::string_view c) {
        os << a << std::string(w_name - a.size() + 2, ' ') << b << std::string(w_desc - b.size() + 2, ' ') << c
           << '\n';
    };
    emit("Metric", "Description", "Value");
    for (const auto& row : rows) emit(row.name, row.description, row.value);
    return os.str();
}

}  // namespace mcids
