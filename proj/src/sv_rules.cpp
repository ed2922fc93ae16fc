#include "mcids/sv_rules.hpp"

#include <stdexcept>

#include "mcids/error.hpp"

namespace mcids {

SvDetector::SvDetector(DetectorOptions options) : options_(std::move(options)) {
    if (options_.rules.protocol() != Protocol::Sv) {
        throw std::invalid_argument("SvDetector needs an SV rule set");
    }
}

LabelSet SvDetector::process(const SvEntry& entry) {
    return process(entry.record, entry.raw_time, entry.time_known);
}

LabelSet SvDetector::process(const SvRecord& p, std::string_view raw_time, bool time_known) {
    const auto& rules = options_.rules;
    const auto& th = options_.thresholds;
    const std::int64_t now = p.time.micros_of_day();

    if (time_known && last_known_us_ && now < *last_known_us_) {
        throw OrderError(processed_, "timestamp " + p.time.to_string() + " precedes the previous record");
    }

    LabelSet out;
    if (rules.contains(1) && p.smpcnt > kSmpCntMax) out.insert(AnomalyLabel::SmpCntRangeAnomaly);

    if (smpcnt_prev_) {
        const std::uint32_t prev = *smpcnt_prev_;
        // SR2 and SR8 share one condition and one label.
        if ((rules.contains(2) || rules.contains(8)) && prev != kSmpCntMax && p.smpcnt != prev + 1) {
            out.insert(AnomalyLabel::SmpCntIncreaseAnomaly);
        }
        if (rules.contains(3) && prev < kSmpCntMax && p.smpcnt < prev) {
            out.insert(AnomalyLabel::SmpCntDecreaseAnomaly);
        }
    }

    if (rules.contains(4)) {
        const auto& reference = options_.mode == DetectorMode::PerStream ? baseline_ : prev_;
        if (reference && !reference->matches(p)) out.insert(AnomalyLabel::FieldConsistencyAnomaly);
    }

    if (rules.contains(5) && !validate_time_format(raw_time)) out.insert(AnomalyLabel::SvTimeFormatAnomaly);

    if (rules.contains(6) && time_known && prev_time_us_) {
        auto gap = now - *prev_time_us_;
        if (gap < th.sv_interval_min_us || gap > th.sv_interval_max_us) {
            out.insert(AnomalyLabel::TimeIntervalAnomaly);
        }
    }

    if (time_known) {
        while (!window_.empty() && now - window_.front() > th.sv_burst_window_us) window_.pop_front();
        window_.push_back(now);
        if (rules.contains(7) && window_.size() > th.sv_burst_count) out.insert(AnomalyLabel::DataRateAnomaly);
        last_known_us_ = now;
    }

    if (!prev_) {
        prev_ = Identity{p.dm, p.sm, p.ethertype, p.appid, p.svid};
        baseline_ = prev_;
    } else if (!prev_->matches(p)) {
        *prev_ = Identity{p.dm, p.sm, p.ethertype, p.appid, p.svid};
    }
    smpcnt_prev_ = p.smpcnt;
    prev_time_us_ = time_known ? std::optional<std::int64_t>(now) : std::nullopt;
    ++processed_;
    return out;
}

std::vector<LabelSet> label_sv_stream(std::span<const SvEntry> entries, const DetectorOptions& options) {
    std::vector<LabelSet> labels;
    labels.reserve(entries.size());
    SvDetector detector(options);
    for (const auto& e : entries) {
        try {
            labels.push_back(detector.process(e));
        } catch (const OrderError&) {
            throw OrderError(labels.size(), "timestamp " + e.raw_time + " precedes the previous record");
        }
    }
    return labels;
}

std::vector<Finding> detect_sv_stream(std::span<const SvEntry> entries, const DetectorOptions& options) {
    auto labels = label_sv_stream(entries, options);
    std::vector<Finding> findings;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i].empty()) findings.push_back(Finding{i, labels[i], stream_key(entries[i].record)});
    }
    return findings;
}

}  // namespace mcids
