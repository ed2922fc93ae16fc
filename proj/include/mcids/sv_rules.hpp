#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mcids/core.hpp"
#include "mcids/detector.hpp"

namespace mcids {

/// Streaming SV checker. Feed records in capture order. Not thread-safe.
class SvDetector {
public:
    /// Throws std::invalid_argument if options.rules is not an SV rule set.
    explicit SvDetector(DetectorOptions options);

    LabelSet process(const SvEntry& entry);
    LabelSet process(const SvRecord& record, std::string_view raw_time, bool time_known = true);

    std::size_t processed() const noexcept { return processed_; }
    const DetectorOptions& options() const noexcept { return options_; }

private:
    struct Identity {
        MacAddress dm;
        MacAddress sm;
        std::uint16_t ethertype;
        std::uint16_t appid;
        std::string svid;

        bool matches(const SvRecord& r) const {
            return dm == r.dm && sm == r.sm && ethertype == r.ethertype && appid == r.appid &&
                   svid == r.svid;
        }
    };

    DetectorOptions options_;
    std::optional<Identity> prev_;
    std::optional<Identity> baseline_;
    std::optional<std::uint16_t> smpcnt_prev_;
    std::optional<std::int64_t> prev_time_us_;  // empty when the predecessor's time is unknown
    std::optional<std::int64_t> last_known_us_;
    std::deque<std::int64_t> window_;
    std::size_t processed_ = 0;
};

std::vector<Finding> detect_sv_stream(std::span<const SvEntry> entries, const DetectorOptions& options);
std::vector<LabelSet> label_sv_stream(std::span<const SvEntry> entries, const DetectorOptions& options);

}  // namespace mcids
