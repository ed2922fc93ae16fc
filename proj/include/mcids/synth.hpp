#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mcids/core.hpp"

namespace mcids {

/// Identifier of the generator algorithm recorded in stream metadata.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

/// Seeded generator with platform-independent bounded draws. The standard
/// distributions are implementation-defined, so they are not used here.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [lo, hi], rejection sampled.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
    /// Uniform double in [0, 1) built from the top 53 bits.
    double unit();

private:
    std::mt19937_64 engine_;
};

struct BenignProfile {
    Protocol protocol = Protocol::Goose;
    std::int64_t duration_us = 10'000'000;
    MicroTimestamp start{10 * 3600, 0};

    // GOOSE
    std::int64_t goose_heartbeat_us = 1'000'000;
    double goose_state_change_rate = 0.0;  // events per second
    std::uint32_t goose_initial_stnum = 1;

    // SV
    std::uint32_t sv_rate = 4800;  // samples per second
    std::uint16_t sv_initial_smpcnt = 0;

    // publisher identity
    MacAddress dm;
    MacAddress sm;
    std::uint16_t appid = 0;
    std::string dataset;
    std::string goid;
    std::string svid;

    static BenignProfile goose_default();
    static BenignProfile sv_default();

    /// Throws ProfileError when the profile cannot produce a compliant stream.
    void validate() const;
    std::string describe() const;
};

template <class E>
struct LabeledStream {
    Protocol protocol = Protocol::Goose;
    std::vector<E> entries;
    /// Ground truth, one set per entry: the labels the full default rule set
    /// assigns. Empty for benign records.
    std::vector<LabelSet> truth;
    std::uint64_t seed = 0;
    std::string rng{kRngAlgorithm};
    std::string profile;
    std::vector<std::string> scenarios;

    std::size_t positives() const {
        std::size_t n = 0;
        for (const auto& t : truth) n += t.empty() ? 0 : 1;
        return n;
    }
};

using GooseStream = LabeledStream<GooseEntry>;
using SvStream = LabeledStream<SvEntry>;
using AnyStream = std::variant<GooseStream, SvStream>;

/// Produces benign GOOSE records one at a time: heartbeats every interval
/// with sqNum counting up, and seeded state changes that bump stNum, reset
/// sqNum and flip data1/data2. The last record lies at or before
/// start + duration.
class BenignGooseSource {
public:
    BenignGooseSource(BenignProfile profile, std::uint64_t seed,
                      std::optional<std::size_t> max_records = std::nullopt);
    std::optional<GooseEntry> next();

private:
    BenignProfile profile_;
    DeterministicRng rng_;
    std::optional<std::size_t> max_records_;
    std::size_t emitted_ = 0;
    GooseRecord current_;
};

/// Produces benign SV samples at floor(k * 1e6 / rate) µs offsets (208/209 µs
/// at 4800 Hz), smpCnt wrapping after 4799. Samples lie strictly before
/// start + duration.
class BenignSvSource {
public:
    BenignSvSource(BenignProfile profile, std::uint64_t seed,
                   std::optional<std::size_t> max_records = std::nullopt);
    std::optional<SvEntry> next();

private:
    BenignProfile profile_;
    std::optional<std::size_t> max_records_;
    std::size_t emitted_ = 0;
};

GooseStream generate_benign_goose(const BenignProfile& profile, std::uint64_t seed);
SvStream generate_benign_sv(const BenignProfile& profile, std::uint64_t seed);
AnyStream generate_benign(const BenignProfile& profile, std::uint64_t seed);

/// Benign stream of exactly `count` records; duration_us is ignored.
GooseStream generate_benign_goose_count(const BenignProfile& profile, std::size_t count, std::uint64_t seed);
SvStream generate_benign_sv_count(const BenignProfile& profile, std::size_t count, std::uint64_t seed);

enum class AttackKind : std::uint8_t {
    Replay,
    FalseDataInjection,
    DosFlood,
    DataGap,
    FieldTamper,
    CounterJump,
    IntervalJitter,
    TimeCorruption,
};

std::string_view to_string(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view text);
const std::vector<AttackKind>& all_attack_kinds();

/// Whether the kind can be injected into streams of the protocol.
bool applicable(AttackKind kind, Protocol protocol);

/// Labels the scenario is guaranteed to raise somewhere among the records it
/// inserts or modifies. Throws InjectError when not applicable.
LabelSet declared_labels(AttackKind kind, Protocol protocol);

struct AttackScenario {
    AttackKind kind = AttackKind::Replay;
    /// Index of the record the attack targets.
    std::size_t position = 0;
    std::uint64_t seed = 0;

    std::uint32_t flood_count = 15;
    /// Time the burst spans; 0 picks 8 µs for GOOSE and 140 µs for SV.
    std::int64_t flood_span_us = 0;
    std::int64_t gap_us = 12'000'000;
    std::uint16_t jump_to = 5000;
    std::int64_t jitter_us = 60;

    std::string describe() const;
};

/// Applies the scenario and returns the new stream with ground truth
/// updated. Throws InjectError when the position is out of range or the
/// scenario cannot be realized at that position.
///
/// Replay          GOOSE: copy of record p inserted after it.   SV: same, later samples shifted one slot.
/// FalseData...    data flipped and stNum rolled back / smpCnt rewound from p on.
/// DosFlood        burst inserted after p, counters kept continuous.
/// DataGap         records from p on delayed so the gap before p is gap_us.
/// FieldTamper     SM / APPID / identifier altered from p on.
/// CounterJump     SV: smpCnt of p set to jump_to.
/// IntervalJitter  SV: records from p on delayed by jitter_us.
/// TimeCorruption  time text of p rendered in a non-canonical shape.
GooseStream inject(const GooseStream& stream, const AttackScenario& scenario);
SvStream inject(const SvStream& stream, const AttackScenario& scenario);
AnyStream inject(const AnyStream& stream, const AttackScenario& scenario);

/// Stream with exactly `positives` anomalous and `negatives` normal records
/// under the full rule set. Throws ProfileError when the counts cannot fit.
AnyStream scale_to_counts(Protocol protocol, std::size_t positives, std::size_t negatives, std::uint64_t seed);

}  // namespace mcids
