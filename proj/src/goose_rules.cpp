#include "mcids/goose_rules.hpp"

#include <map>
#include <stdexcept>

#include "mcids/error.hpp"

namespace mcids {

std::string_view to_string(DetectorMode mode) {
    return mode == DetectorMode::Strict ? "strict" : "per-stream";
}

std::optional<DetectorMode> parse_detector_mode(std::string_view text) {
    if (text == "strict") return DetectorMode::Strict;
    if (text == "per-stream") return DetectorMode::PerStream;
    return std::nullopt;
}

GooseDetector::GooseDetector(DetectorOptions options) : options_(std::move(options)) {
    if (options_.rules.protocol() != Protocol::Goose) {
        throw std::invalid_argument("GooseDetector needs a GOOSE rule set");
    }
}

LabelSet GooseDetector::process(const GooseEntry& entry) {
    return process(entry.record, entry.raw_time, entry.time_known);
}

LabelSet GooseDetector::process(const GooseRecord& p, std::string_view raw_time, bool time_known) {
    const auto& rules = options_.rules;
    const auto& th = options_.thresholds;
    const std::int64_t now = p.time.micros_of_day();

    if (time_known && last_known_us_ && now < *last_known_us_) {
        throw OrderError(processed_, "timestamp " + p.time.to_string() + " precedes the previous record");
    }

    LabelSet out;
    if (prev_) {
        const auto& q = *prev_;
        const bool same_link = p.dm == q.dm && p.sm == q.sm;
        const bool data_changed = p.data1 != q.data1 || p.data2 != q.data2;
        const bool sq_next = p.sqnum == static_cast<std::uint64_t>(q.sqnum) + 1;

        if (rules.contains(1) && same_link && !data_changed && !sq_next) {
            out.insert(AnomalyLabel::SqnumAnomaly);
        }
        if (rules.contains(2) && data_changed &&
            !(p.stnum == static_cast<std::uint64_t>(q.stnum) + 1 && p.sqnum == 0)) {
            out.insert(AnomalyLabel::StnumSqnumResetAnomaly);
        }
        if (rules.contains(3) && same_link && p.stnum < q.stnum) {
            out.insert(AnomalyLabel::StnumDecreaseAnomaly);
        }
        if (rules.contains(4) && (!same_link || p.ethertype != q.ethertype || p.appid != q.appid ||
                                  p.dataset != q.dataset || p.goid != q.goid)) {
            out.insert(AnomalyLabel::AttributeChangeAnomaly);
        }
        if (rules.contains(7) && time_known && prev_time_known_ &&
            now - q.time.micros_of_day() > th.goose_gap_us) {
            out.insert(AnomalyLabel::DataGapAnomaly);
        }
        const bool gr8_applies = options_.gr8_literal ? data_changed : !data_changed;
        if (rules.contains(8) && gr8_applies && (p.stnum != q.stnum || !sq_next)) {
            out.insert(AnomalyLabel::DataChangeAnomaly);
        }
    }

    if (rules.contains(5) && !validate_time_format(raw_time)) {
        out.insert(AnomalyLabel::GooseTimeFormatAnomaly);
    }

    if (time_known) {
        while (!window_.empty() && now - window_.front() > th.goose_burst_window_us) window_.pop_front();
        window_.push_back(now);
        if (rules.contains(6) && window_.size() > th.goose_burst_count) {
            out.insert(AnomalyLabel::HighDataRateAnomaly);
        }
        last_known_us_ = now;
    }

    prev_ = p;
    prev_time_known_ = time_known;
    ++processed_;
    return out;
}

std::vector<LabelSet> label_goose_stream(std::span<const GooseEntry> entries, const DetectorOptions& options) {
    std::vector<LabelSet> labels;
    labels.reserve(entries.size());
    if (options.mode == DetectorMode::Strict) {
        GooseDetector detector(options);
        for (const auto& e : entries) {
            try {
                labels.push_back(detector.process(e));
            } catch (const OrderError&) {
                throw OrderError(labels.size(), "timestamp " + e.raw_time + " precedes the previous record");
            }
        }
        return labels;
    }

    std::map<StreamKey, GooseDetector> detectors;
    for (const auto& e : entries) {
        auto key = stream_key(e.record);
        auto it = detectors.find(key);
        if (it == detectors.end()) it = detectors.emplace(key, GooseDetector(options)).first;
        try {
            labels.push_back(it->second.process(e));
        } catch (const OrderError&) {
            throw OrderError(labels.size(), "timestamp " + e.raw_time + " precedes the previous record of its stream");
        }
    }
    return labels;
}

std::vector<Finding> detect_goose_stream(std::span<const GooseEntry> entries, const DetectorOptions& options) {
    auto labels = label_goose_stream(entries, options);
    std::vector<Finding> findings;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i].empty()) findings.push_back(Finding{i, labels[i], stream_key(entries[i].record)});
    }
    return findings;
}

}  // namespace mcids
