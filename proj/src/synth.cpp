#include "mcids/synth.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mcids/error.hpp"
#include "mcids/ingest.hpp"
#include "mcids/rulebook.hpp"

namespace mcids {

std::uint64_t DeterministicRng::uniform(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform: empty range");
    const std::uint64_t range = hi - lo + 1;
    if (range == 0) return next();
    // Reject the low remainder so every residue is equally likely.
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
        auto x = next();
        if (x >= threshold) return lo + x % range;
    }
}

double DeterministicRng::unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

namespace {

constexpr std::int64_t kDayUs = MicroTimestamp::kMicrosPerDay;
constexpr std::uint32_t kSmpCntModulus = kSmpCntMax + 1;

const Thresholds kDefaults{};

MicroTimestamp time_at(std::int64_t us) {
    if (us < 0 || us >= kDayUs) throw InjectError("the attack would move records outside the capture day");
    return MicroTimestamp::from_micros_of_day(us);
}

// Non-canonical renderings that a lenient reader still maps back to the
// same instant.
std::string corrupt_time_text(const std::string& canonical, int style) {
    switch (style) {
        case 0: return canonical + "0";
        case 1: {
            auto s = canonical;
            s[8] = ',';
            return s;
        }
        default: return canonical + "000";
    }
}
constexpr int kCorruptionStyles = 3;

template <class E>
std::int64_t micros(const E& e) {
    return e.record.time.micros_of_day();
}

// Moves an entry to a new time, keeping the shape of its time text.
template <class E>
void retime(E& e, std::int64_t us) {
    if (!e.time_known) return;
    auto old_canonical = e.record.time.to_string();
    e.record.time = time_at(us);
    auto canonical = e.record.time.to_string();
    if (e.raw_time == old_canonical) {
        e.raw_time = canonical;
        return;
    }
    for (int style = 0; style < kCorruptionStyles; ++style) {
        if (e.raw_time == corrupt_time_text(old_canonical, style)) {
            e.raw_time = corrupt_time_text(canonical, style);
            return;
        }
    }
}

template <class E>
void shift_from(std::vector<E>& entries, std::size_t from, std::int64_t delta) {
    for (std::size_t i = from; i < entries.size(); ++i) retime(entries[i], micros(entries[i]) + delta);
}

template <class S>
void require_position(const S& s, std::size_t p, bool needs_predecessor) {
    if (p >= s.entries.size()) {
        throw InjectError("position " + std::to_string(p) + " is outside a stream of " +
                          std::to_string(s.entries.size()) + " records");
    }
    if (needs_predecessor && p == 0) throw InjectError("this attack needs a record before the position");
}

template <class S>
void require_known_time(const S& s, std::size_t i) {
    if (i < s.entries.size() && !s.entries[i].time_known) {
        throw InjectError("record " + std::to_string(i) + " has no usable timestamp");
    }
}

template <class S>
void require_no_labels(const S& s, std::size_t i, LabelSet labels, const char* why) {
    if (i < s.truth.size() && !(s.truth[i] & labels).empty()) {
        throw InjectError("record " + std::to_string(i) + " already carries " + why);
    }
}

template <class S, class E>
void insert_entry(S& s, std::size_t at, E entry, LabelSet truth) {
    s.entries.insert(s.entries.begin() + static_cast<std::ptrdiff_t>(at), std::move(entry));
    s.truth.insert(s.truth.begin() + static_cast<std::ptrdiff_t>(at), truth);
}

// Brute-force sliding-window count: for each index i in [from, ...) while
// entry i lies within `window` µs of `anchor_us`, counts earlier-or-equal
// records no more than `window` µs older than i. Adds `label` where the count
// exceeds `limit`.
template <class S>
bool add_window_truth(S& s, std::size_t from, std::int64_t anchor_us, std::int64_t window, std::size_t limit,
                      AnomalyLabel label) {
    bool any = false;
    for (std::size_t i = from; i < s.entries.size(); ++i) {
        if (!s.entries[i].time_known) continue;
        const auto ti = micros(s.entries[i]);
        if (ti - anchor_us > window) break;
        std::size_t count = 0;
        for (std::size_t j = i + 1; j-- > 0;) {
            if (!s.entries[j].time_known) continue;
            if (ti - micros(s.entries[j]) > window) break;
            ++count;
        }
        if (count > limit) {
            s.truth[i].insert(label);
            any = true;
        }
    }
    return any;
}

std::string cycle_identifier(const std::string& text) {
    static constexpr std::string_view alphabet =
        "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
    if (text.empty()) return "X";
    auto pos = alphabet.find(text.back());
    if (pos == std::string_view::npos) return text + "X";
    auto out = text;
    out.back() = alphabet[(pos + 1) % alphabet.size()];
    return out;
}

}  // namespace

// ---- profiles -------------------------------------------------------------

BenignProfile BenignProfile::goose_default() {
    BenignProfile p;
    p.protocol = Protocol::Goose;
    p.dm = *MacAddress::parse("01:00:03:00:00:01");
    p.sm = *MacAddress::parse("27:34:31:00:00:02");
    p.appid = 3;
    p.dataset = "DS1";
    p.goid = "GO1";
    return p;
}

BenignProfile BenignProfile::sv_default() {
    BenignProfile p;
    p.protocol = Protocol::Sv;
    p.duration_us = 1'000'000;
    p.dm = *MacAddress::parse("01:0c:cd:04:00:01");
    p.sm = *MacAddress::parse("aa:bb:cc:00:00:01");
    p.appid = 40;
    p.svid = "SV1";
    return p;
}

namespace {

void validate_profile(const BenignProfile& p, std::optional<std::size_t> count) {
    const auto& t = kDefaults;
    if (p.duration_us < 0) throw ProfileError("duration must not be negative");
    for (const auto* s : {&p.dataset, &p.goid, &p.svid}) {
        if (s->size() > kMaxTextField) throw ProfileError("identifier longer than 127 bytes");
    }
    const std::int64_t start = p.start.micros_of_day();
    std::int64_t last = 0;
    if (p.protocol == Protocol::Goose) {
        const auto h = p.goose_heartbeat_us;
        if (h < 1) throw ProfileError("heartbeat interval must be positive");
        if (h > t.goose_gap_us) throw ProfileError("heartbeat interval exceeds the data-gap limit");
        if (static_cast<std::uint64_t>(t.goose_burst_window_us / h) + 1 > t.goose_burst_count) {
            throw ProfileError("heartbeat interval is short enough to trip the data-rate rule");
        }
        const double prob = p.goose_state_change_rate * static_cast<double>(h) / 1e6;
        if (p.goose_state_change_rate < 0 || prob > 1.0) {
            throw ProfileError("state-change rate must lie in [0, 1/heartbeat]");
        }
        if (p.goose_initial_stnum == 0) throw ProfileError("stNum starts at 1");
        last = count ? (*count == 0 ? 0 : static_cast<std::int64_t>(*count - 1) * h) : p.duration_us;
    } else {
        if (p.sv_rate == 0) throw ProfileError("sample rate must be positive");
        const std::int64_t lo = 1'000'000 / p.sv_rate;
        const std::int64_t hi = (1'000'000 + p.sv_rate - 1) / p.sv_rate;
        if (lo < t.sv_interval_min_us || hi > t.sv_interval_max_us) {
            throw ProfileError("sample rate " + std::to_string(p.sv_rate) +
                               " Hz gives intervals outside [200, 215] µs");
        }
        if (p.sv_initial_smpcnt > kSmpCntMax) throw ProfileError("initial smpCnt above 4799");
        last = count ? (*count == 0 ? 0 : static_cast<std::int64_t>(*count - 1) * 1'000'000 / p.sv_rate)
                     : std::max<std::int64_t>(p.duration_us - 1, 0);
    }
    if (start + last >= kDayUs) throw ProfileError("the stream would run past midnight");
}

}  // namespace

void BenignProfile::validate() const { validate_profile(*this, std::nullopt); }

std::string BenignProfile::describe() const {
    std::ostringstream os;
    os << to_string(protocol) << " start=" << start.to_string() << " duration_us=" << duration_us;
    if (protocol == Protocol::Goose) {
        os << " heartbeat_us=" << goose_heartbeat_us << " state_change_rate=" << goose_state_change_rate;
    } else {
        os << " rate_hz=" << sv_rate;
    }
    return os.str();
}

// ---- benign sources -------------------------------------------------------

BenignGooseSource::BenignGooseSource(BenignProfile profile, std::uint64_t seed,
                                     std::optional<std::size_t> max_records)
    : profile_(std::move(profile)), rng_(seed), max_records_(max_records) {
    if (profile_.protocol != Protocol::Goose) throw ProfileError("profile is not a GOOSE profile");
    validate_profile(profile_, max_records_);
    current_.dm = profile_.dm;
    current_.sm = profile_.sm;
    current_.ethertype = kGooseEtherType;
    current_.appid = profile_.appid;
    current_.dataset = profile_.dataset;
    current_.goid = profile_.goid;
    current_.stnum = profile_.goose_initial_stnum;
    current_.sqnum = 0;
}

std::optional<GooseEntry> BenignGooseSource::next() {
    const auto offset = static_cast<std::int64_t>(emitted_) * profile_.goose_heartbeat_us;
    if (max_records_) {
        if (emitted_ >= *max_records_) return std::nullopt;
    } else if (profile_.duration_us == 0 || offset > profile_.duration_us) {
        return std::nullopt;
    }
    if (emitted_ > 0) {
        const double prob = profile_.goose_state_change_rate *
                            static_cast<double>(profile_.goose_heartbeat_us) / 1e6;
        if (prob > 0 && rng_.unit() < prob) {
            auto mask = rng_.uniform(1, 3);
            current_.data1 ^= (mask & 1) != 0;
            current_.data2 ^= (mask & 2) != 0;
            current_.stnum += 1;
            current_.sqnum = 0;
        } else {
            current_.sqnum += 1;
        }
    }
    current_.time = MicroTimestamp::from_micros_of_day(profile_.start.micros_of_day() + offset);
    ++emitted_;
    return make_entry(current_);
}

BenignSvSource::BenignSvSource(BenignProfile profile, std::uint64_t /*seed*/,
                               std::optional<std::size_t> max_records)
    : profile_(std::move(profile)), max_records_(max_records) {
    if (profile_.protocol != Protocol::Sv) throw ProfileError("profile is not an SV profile");
    validate_profile(profile_, max_records_);
}

std::optional<SvEntry> BenignSvSource::next() {
    const auto k = static_cast<std::int64_t>(emitted_);
    const std::int64_t offset = k * 1'000'000 / profile_.sv_rate;
    if (max_records_) {
        if (emitted_ >= *max_records_) return std::nullopt;
    } else if (offset >= profile_.duration_us) {
        return std::nullopt;
    }
    SvRecord r;
    r.time = MicroTimestamp::from_micros_of_day(profile_.start.micros_of_day() + offset);
    r.dm = profile_.dm;
    r.sm = profile_.sm;
    r.ethertype = kSvEtherType;
    r.appid = profile_.appid;
    r.svid = profile_.svid;
    r.smpcnt = static_cast<std::uint16_t>((profile_.sv_initial_smpcnt + emitted_) % kSmpCntModulus);
    ++emitted_;
    return make_entry(std::move(r));
}

namespace {

template <class Stream, class Source>
Stream drain(Source source, const BenignProfile& profile, std::uint64_t seed) {
    Stream s;
    s.protocol = profile.protocol;
    s.seed = seed;
    s.profile = profile.describe();
    while (auto e = source.next()) s.entries.push_back(std::move(*e));
    s.truth.assign(s.entries.size(), LabelSet{});
    return s;
}

}  // namespace

GooseStream generate_benign_goose(const BenignProfile& profile, std::uint64_t seed) {
    return drain<GooseStream>(BenignGooseSource(profile, seed), profile, seed);
}

SvStream generate_benign_sv(const BenignProfile& profile, std::uint64_t seed) {
    return drain<SvStream>(BenignSvSource(profile, seed), profile, seed);
}

AnyStream generate_benign(const BenignProfile& profile, std::uint64_t seed) {
    if (profile.protocol == Protocol::Goose) return generate_benign_goose(profile, seed);
    return generate_benign_sv(profile, seed);
}

GooseStream generate_benign_goose_count(const BenignProfile& profile, std::size_t count, std::uint64_t seed) {
    return drain<GooseStream>(BenignGooseSource(profile, seed, count), profile, seed);
}

SvStream generate_benign_sv_count(const BenignProfile& profile, std::size_t count, std::uint64_t seed) {
    return drain<SvStream>(BenignSvSource(profile, seed, count), profile, seed);
}

// ---- scenarios ------------------------------------------------------------

std::string_view to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::Replay: return "replay";
        case AttackKind::FalseDataInjection: return "false-data-injection";
        case AttackKind::DosFlood: return "dos-flood";
        case AttackKind::DataGap: return "data-gap";
        case AttackKind::FieldTamper: return "field-tamper";
        case AttackKind::CounterJump: return "counter-jump";
        case AttackKind::IntervalJitter: return "interval-jitter";
        case AttackKind::TimeCorruption: return "time-corruption";
    }
    return "?";
}

const std::vector<AttackKind>& all_attack_kinds() {
    static const std::vector<AttackKind> kinds = {
        AttackKind::Replay,      AttackKind::FalseDataInjection, AttackKind::DosFlood,
        AttackKind::DataGap,     AttackKind::FieldTamper,        AttackKind::CounterJump,
        AttackKind::IntervalJitter, AttackKind::TimeCorruption,
    };
    return kinds;
}

std::optional<AttackKind> parse_attack_kind(std::string_view text) {
    for (auto k : all_attack_kinds()) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

bool applicable(AttackKind kind, Protocol protocol) {
    if (protocol == Protocol::Goose) return kind != AttackKind::CounterJump && kind != AttackKind::IntervalJitter;
    return true;
}

LabelSet declared_labels(AttackKind kind, Protocol protocol) {
    using L = AnomalyLabel;
    if (!applicable(kind, protocol)) {
        throw InjectError(std::string(to_string(kind)) + " does not apply to " + std::string(to_string(protocol)));
    }
    const bool goose = protocol == Protocol::Goose;
    switch (kind) {
        case AttackKind::Replay: return goose ? LabelSet{L::SqnumAnomaly, L::DataChangeAnomaly} : LabelSet{L::SmpCntIncreaseAnomaly};
        case AttackKind::FalseDataInjection:
            return goose ? LabelSet{L::StnumSqnumResetAnomaly, L::StnumDecreaseAnomaly}
                         : LabelSet{L::SmpCntIncreaseAnomaly, L::SmpCntDecreaseAnomaly};
        case AttackKind::DosFlood:
            return goose ? LabelSet{L::HighDataRateAnomaly} : LabelSet{L::TimeIntervalAnomaly, L::DataRateAnomaly};
        case AttackKind::DataGap: return goose ? LabelSet{L::DataGapAnomaly} : LabelSet{L::TimeIntervalAnomaly};
        case AttackKind::FieldTamper: return goose ? LabelSet{L::AttributeChangeAnomaly} : LabelSet{L::FieldConsistencyAnomaly};
        case AttackKind::CounterJump: return LabelSet{L::SmpCntRangeAnomaly, L::SmpCntIncreaseAnomaly};
        case AttackKind::IntervalJitter: return LabelSet{L::TimeIntervalAnomaly};
        case AttackKind::TimeCorruption: return goose ? LabelSet{L::GooseTimeFormatAnomaly} : LabelSet{L::SvTimeFormatAnomaly};
    }
    return {};
}

std::string AttackScenario::describe() const {
    std::ostringstream os;
    os << to_string(kind) << " position=" << position << " seed=" << seed;
    switch (kind) {
        case AttackKind::DosFlood: os << " count=" << flood_count << " span_us=" << flood_span_us; break;
        case AttackKind::DataGap: os << " gap_us=" << gap_us; break;
        case AttackKind::CounterJump: os << " jump_to=" << jump_to; break;
        case AttackKind::IntervalJitter: os << " jitter_us=" << jitter_us; break;
        default: break;
    }
    return os.str();
}

// ---- GOOSE injection ------------------------------------------------------

namespace {

using L = AnomalyLabel;

void goose_replay(GooseStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, false);
    require_known_time(s, p);
    require_known_time(s, p + 1);
    require_no_labels(s, p + 1, {L::HighDataRateAnomaly, L::DataGapAnomaly}, "time-based labels");

    const auto ta = micros(s.entries[p]);
    std::int64_t t_copy;
    if (p + 1 < s.entries.size()) {
        const auto tb = micros(s.entries[p + 1]);
        if (tb - ta <= 2 * (kDefaults.goose_burst_window_us + 1)) {
            throw InjectError("no room between records " + std::to_string(p) + " and " + std::to_string(p + 1));
        }
        t_copy = ta + (tb - ta) / 2;
    } else {
        t_copy = ta + 500'000;
    }
    auto copy = make_entry(s.entries[p].record);
    copy.record.time = time_at(t_copy);
    copy.raw_time = copy.record.time.to_string();
    insert_entry(s, p + 1, std::move(copy), {L::SqnumAnomaly, L::DataChangeAnomaly});
}

void goose_false_data(GooseStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, true);
    const auto& prev = s.entries[p - 1].record;
    const auto& cur = s.entries[p].record;
    if (cur.stnum < prev.stnum) throw InjectError("stNum already decreases at the position");
    if (prev.stnum == 0) throw InjectError("stNum 0 cannot be rolled back");
    if (prev.dm != cur.dm || prev.sm != cur.sm) throw InjectError("publisher changes at the position");

    DeterministicRng rng(sc.seed);
    const unsigned delta = (cur.data1 != prev.data1 ? 1u : 0u) | (cur.data2 != prev.data2 ? 2u : 0u);
    unsigned mask;
    do {
        mask = static_cast<unsigned>(rng.uniform(1, 3));
    } while (mask == delta);
    // stNum rolled back to one below the predecessor's.
    const std::uint32_t rollback = cur.stnum - prev.stnum + 1;

    for (std::size_t i = p; i < s.entries.size(); ++i) {
        auto& r = s.entries[i].record;
        if (r.stnum < rollback) throw InjectError("stNum underflow while rolling back");
        r.data1 ^= (mask & 1) != 0;
        r.data2 ^= (mask & 2) != 0;
        r.stnum -= rollback;
    }
    s.truth[p] |= LabelSet{L::StnumSqnumResetAnomaly, L::StnumDecreaseAnomaly};
}

void goose_flood(GooseStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, false);
    require_known_time(s, p);
    require_known_time(s, p + 1);
    const auto n = sc.flood_count;
    const auto span = sc.flood_span_us > 0 ? sc.flood_span_us : 8;
    if (n == 0) throw InjectError("flood needs at least one packet");
    const auto window = kDefaults.goose_burst_window_us;

    const auto& a = s.entries[p].record;
    const auto ta = micros(s.entries[p]);
    std::int64_t start;
    if (p + 1 < s.entries.size()) {
        const auto tb = micros(s.entries[p + 1]);
        start = ta + (tb - ta - span) / 2;
        if (start - ta <= window || tb - (start + span) <= window) {
            throw InjectError("no room for the burst between records " + std::to_string(p) + " and " +
                              std::to_string(p + 1));
        }
    } else {
        start = ta + 1000;
    }

    std::vector<GooseEntry> burst;
    for (std::uint32_t i = 0; i < n; ++i) {
        auto e = make_entry(a);
        e.record.sqnum = a.sqnum + 1 + i;
        auto offset = n > 1 ? static_cast<std::int64_t>(i) * span / static_cast<std::int64_t>(n - 1) : 0;
        e.record.time = time_at(start + offset);
        e.raw_time = e.record.time.to_string();
        burst.push_back(std::move(e));
    }
    // Retransmissions after the burst keep counting from its last sqNum.
    for (std::size_t j = p + 1; j < s.entries.size(); ++j) {
        auto& r = s.entries[j].record;
        if (r.stnum != a.stnum || r.data1 != a.data1 || r.data2 != a.data2 || stream_key(r) != stream_key(a)) break;
        r.sqnum += n;
    }
    for (std::uint32_t i = 0; i < n; ++i) insert_entry(s, p + 1 + i, std::move(burst[i]), {});

    if (!add_window_truth(s, p + 1, start, window, kDefaults.goose_burst_count, L::HighDataRateAnomaly)) {
        throw InjectError("burst of " + std::to_string(n) + " packets in " + std::to_string(span) +
                          " µs stays under the data-rate limit");
    }
}

void goose_gap(GooseStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, true);
    require_known_time(s, p - 1);
    require_known_time(s, p);
    if (sc.gap_us <= kDefaults.goose_gap_us) throw InjectError("gap must exceed 10 s to be observable");
    const auto current = micros(s.entries[p]) - micros(s.entries[p - 1]);
    if (sc.gap_us < current) throw InjectError("requested gap is shorter than the existing one");
    shift_from(s.entries, p, sc.gap_us - current);
    s.truth[p].insert(L::DataGapAnomaly);
}

void goose_tamper(GooseStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, true);
    DeterministicRng rng(sc.seed);
    auto field = rng.uniform(0, 3);
    if (field == 0 && !(s.truth[p] & LabelSet{L::SqnumAnomaly, L::StnumDecreaseAnomaly}).empty()) field = 1;
    const auto mask = static_cast<std::uint8_t>(rng.uniform(1, 255));
    for (std::size_t i = p; i < s.entries.size(); ++i) {
        auto& r = s.entries[i].record;
        switch (field) {
            case 0: r.sm.octets[5] ^= mask; break;
            case 1: r.appid ^= mask; break;
            case 2: r.dataset = cycle_identifier(r.dataset); break;
            default: r.goid = cycle_identifier(r.goid); break;
        }
    }
    s.truth[p].insert(L::AttributeChangeAnomaly);
}

template <class S>
void corrupt_time(S& s, const AttackScenario& sc, AnomalyLabel label) {
    const auto p = sc.position;
    require_position(s, p, false);
    require_known_time(s, p);
    DeterministicRng rng(sc.seed);
    auto& e = s.entries[p];
    e.raw_time = corrupt_time_text(e.record.time.to_string(), static_cast<int>(rng.uniform(0, kCorruptionStyles - 1)));
    s.truth[p].insert(label);
}

// ---- SV injection ---------------------------------------------------------

std::int64_t slot_interval(const SvStream& s, std::size_t p) {
    if (p + 1 < s.entries.size()) return micros(s.entries[p + 1]) - micros(s.entries[p]);
    return 208;
}

void require_in_range(const SvStream& s, std::size_t from) {
    for (std::size_t i = from; i < s.entries.size(); ++i) {
        if (s.entries[i].record.smpcnt > kSmpCntMax) {
            throw InjectError("record " + std::to_string(i) + " already has an out-of-range smpCnt");
        }
    }
}

void sv_replay(SvStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, false);
    require_known_time(s, p);
    require_known_time(s, p + 1);
    if (s.entries[p].record.smpcnt >= kSmpCntMax) {
        throw InjectError("a replayed smpCnt of 4799 is indistinguishable from the wrap");
    }
    const auto d = slot_interval(s, p);
    if (d < kDefaults.sv_interval_min_us || d > kDefaults.sv_interval_max_us) {
        throw InjectError("the record after the position is not on the sample schedule");
    }
    auto copy = make_entry(s.entries[p].record);
    copy.record.time = time_at(micros(s.entries[p]) + d);
    copy.raw_time = copy.record.time.to_string();
    shift_from(s.entries, p + 1, d);
    insert_entry(s, p + 1, std::move(copy), {L::SmpCntIncreaseAnomaly});
}

void sv_false_data(SvStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, true);
    require_in_range(s, p - 1);
    const std::uint32_t c = s.entries[p - 1].record.smpcnt;
    if (c < 1 || c >= kSmpCntMax) throw InjectError("smpCnt before the position must lie in [1, 4798]");
    DeterministicRng rng(sc.seed);
    const auto target = static_cast<std::uint32_t>(rng.uniform(0, c - 1));
    const std::uint32_t x = s.entries[p].record.smpcnt;
    const std::uint32_t rewind = (x + kSmpCntModulus - target) % kSmpCntModulus;
    if (rewind == 0) throw InjectError("record at the position already decreases");
    for (std::size_t i = p; i < s.entries.size(); ++i) {
        auto& r = s.entries[i].record;
        r.smpcnt = static_cast<std::uint16_t>((r.smpcnt + kSmpCntModulus - rewind) % kSmpCntModulus);
    }
    s.truth[p] |= LabelSet{L::SmpCntIncreaseAnomaly, L::SmpCntDecreaseAnomaly};
}

void sv_flood(SvStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, false);
    require_known_time(s, p);
    require_in_range(s, p);
    const auto n = sc.flood_count;
    const auto span = sc.flood_span_us > 0 ? sc.flood_span_us : 140;
    if (n == 0) throw InjectError("flood needs at least one packet");
    const std::int64_t step = span / static_cast<std::int64_t>(n);
    if (step < 1 || step >= kDefaults.sv_interval_min_us) {
        throw InjectError("flood spacing must lie in [1, 199] µs");
    }

    const auto& a = s.entries[p].record;
    const auto ta = micros(s.entries[p]);
    std::vector<SvEntry> burst;
    for (std::uint32_t i = 0; i < n; ++i) {
        auto e = make_entry(a);
        e.record.smpcnt = static_cast<std::uint16_t>((a.smpcnt + 1 + i) % kSmpCntModulus);
        e.record.time = time_at(ta + static_cast<std::int64_t>(i + 1) * step);
        e.raw_time = e.record.time.to_string();
        burst.push_back(std::move(e));
    }
    const auto burst_len = static_cast<std::int64_t>(n) * step;
    for (std::size_t j = p + 1; j < s.entries.size(); ++j) {
        auto& r = s.entries[j].record;
        r.smpcnt = static_cast<std::uint16_t>((r.smpcnt + n) % kSmpCntModulus);
    }
    shift_from(s.entries, p + 1, burst_len);
    for (std::uint32_t i = 0; i < n; ++i) insert_entry(s, p + 1 + i, std::move(burst[i]), {L::TimeIntervalAnomaly});

    if (!add_window_truth(s, p + 1, ta + step, kDefaults.sv_burst_window_us, kDefaults.sv_burst_count,
                          L::DataRateAnomaly)) {
        throw InjectError("burst of " + std::to_string(n) + " samples stays under the data-rate limit");
    }
}

void sv_gap(SvStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, true);
    require_known_time(s, p - 1);
    require_known_time(s, p);
    if (sc.gap_us >= kDefaults.sv_interval_min_us && sc.gap_us <= kDefaults.sv_interval_max_us) {
        throw InjectError("gap lies inside the compliant interval");
    }
    const auto current = micros(s.entries[p]) - micros(s.entries[p - 1]);
    if (sc.gap_us < current) throw InjectError("requested gap is shorter than the existing one");
    shift_from(s.entries, p, sc.gap_us - current);
    s.truth[p].insert(L::TimeIntervalAnomaly);
}

void sv_tamper(SvStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, true);
    DeterministicRng rng(sc.seed);
    const auto field = rng.uniform(0, 2);
    const auto mask = static_cast<std::uint8_t>(rng.uniform(1, 255));
    for (std::size_t i = p; i < s.entries.size(); ++i) {
        auto& r = s.entries[i].record;
        switch (field) {
            case 0: r.sm.octets[5] ^= mask; break;
            case 1: r.appid ^= mask; break;
            default: r.svid = cycle_identifier(r.svid); break;
        }
    }
    s.truth[p].insert(L::FieldConsistencyAnomaly);
}

void sv_counter_jump(SvStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, false);
    if (sc.jump_to <= kSmpCntMax) throw InjectError("jump target must exceed 4799");
    const LabelSet counters{L::SmpCntRangeAnomaly, L::SmpCntIncreaseAnomaly, L::SmpCntDecreaseAnomaly};
    require_no_labels(s, p, counters, "counter labels");
    require_no_labels(s, p + 1, counters, "counter labels");
    if (s.entries[p].record.smpcnt > kSmpCntMax ||
        (p + 1 < s.entries.size() && s.entries[p + 1].record.smpcnt > kSmpCntMax)) {
        throw InjectError("counter already out of range near the position");
    }
    s.entries[p].record.smpcnt = sc.jump_to;
    s.truth[p].insert(L::SmpCntRangeAnomaly);
    if (p > 0 && s.entries[p - 1].record.smpcnt != kSmpCntMax) s.truth[p].insert(L::SmpCntIncreaseAnomaly);
    if (p + 1 < s.entries.size()) s.truth[p + 1].insert(L::SmpCntIncreaseAnomaly);
}

void sv_jitter(SvStream& s, const AttackScenario& sc) {
    const auto p = sc.position;
    require_position(s, p, true);
    require_known_time(s, p - 1);
    require_known_time(s, p);
    const auto interval = micros(s.entries[p]) - micros(s.entries[p - 1]) + sc.jitter_us;
    if (interval < 0) throw InjectError("jitter would reorder records");
    if (interval >= kDefaults.sv_interval_min_us && interval <= kDefaults.sv_interval_max_us) {
        throw InjectError("jittered interval is still compliant");
    }
    shift_from(s.entries, p, sc.jitter_us);
    s.truth[p].insert(L::TimeIntervalAnomaly);
    if (sc.jitter_us < 0) {
        add_window_truth(s, p, micros(s.entries[p]), kDefaults.sv_burst_window_us, kDefaults.sv_burst_count,
                         L::DataRateAnomaly);
    }
}

}  // namespace

GooseStream inject(const GooseStream& stream, const AttackScenario& sc) {
    if (!applicable(sc.kind, Protocol::Goose)) {
        throw InjectError(std::string(to_string(sc.kind)) + " does not apply to GOOSE");
    }
    auto s = stream;
    s.truth.resize(s.entries.size());
    switch (sc.kind) {
        case AttackKind::Replay: goose_replay(s, sc); break;
        case AttackKind::FalseDataInjection: goose_false_data(s, sc); break;
        case AttackKind::DosFlood: goose_flood(s, sc); break;
        case AttackKind::DataGap: goose_gap(s, sc); break;
        case AttackKind::FieldTamper: goose_tamper(s, sc); break;
        case AttackKind::TimeCorruption: corrupt_time(s, sc, L::GooseTimeFormatAnomaly); break;
        default: break;
    }
    s.scenarios.push_back(sc.describe());
    return s;
}

SvStream inject(const SvStream& stream, const AttackScenario& sc) {
    auto s = stream;
    s.truth.resize(s.entries.size());
    switch (sc.kind) {
        case AttackKind::Replay: sv_replay(s, sc); break;
        case AttackKind::FalseDataInjection: sv_false_data(s, sc); break;
        case AttackKind::DosFlood: sv_flood(s, sc); break;
        case AttackKind::DataGap: sv_gap(s, sc); break;
        case AttackKind::FieldTamper: sv_tamper(s, sc); break;
        case AttackKind::CounterJump: sv_counter_jump(s, sc); break;
        case AttackKind::IntervalJitter: sv_jitter(s, sc); break;
        case AttackKind::TimeCorruption: corrupt_time(s, sc, L::SvTimeFormatAnomaly); break;
    }
    s.scenarios.push_back(sc.describe());
    return s;
}

AnyStream inject(const AnyStream& stream, const AttackScenario& scenario) {
    return std::visit([&](const auto& s) -> AnyStream { return inject(s, scenario); }, stream);
}

// ---- fixed-count datasets -------------------------------------------------

namespace {

// Kinds that touch exactly one record and compose when applied from the
// highest position downwards.
template <class S>
S scale(S s, std::size_t positives, std::vector<AttackKind> kinds, DeterministicRng& rng) {
    const auto total = s.entries.size();
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    for (std::size_t i = total; i > 1; --i) std::swap(order[i - 1], order[rng.uniform(0, i - 1)]);
    order.resize(positives);
    std::sort(order.rbegin(), order.rend());

    for (auto pos : order) {
        AttackScenario sc;
        sc.position = pos;
        sc.seed = rng.next();
        sc.kind = pos == 0 ? AttackKind::TimeCorruption : kinds[rng.uniform(0, kinds.size() - 1)];
        sc.jitter_us = static_cast<std::int64_t>(rng.uniform(50, 100));
        s = inject(s, sc);
    }
    if (s.positives() != positives || s.entries.size() != total) {
        throw std::logic_error("scaled stream does not have the requested counts");
    }
    return s;
}

}  // namespace

AnyStream scale_to_counts(Protocol protocol, std::size_t positives, std::size_t negatives, std::uint64_t seed) {
    const auto total = positives + negatives;
    DeterministicRng rng(seed);
    auto profile = protocol == Protocol::Goose ? BenignProfile::goose_default() : BenignProfile::sv_default();
    if (protocol == Protocol::Goose) {
        auto s = scale(generate_benign_goose_count(profile, total, seed), positives,
                       {AttackKind::TimeCorruption, AttackKind::FieldTamper}, rng);
        s.scenarios.insert(s.scenarios.begin(), "scale positives=" + std::to_string(positives) +
                                                    " negatives=" + std::to_string(negatives));
        return s;
    }
    auto s = scale(generate_benign_sv_count(profile, total, seed), positives,
                   {AttackKind::TimeCorruption, AttackKind::FieldTamper, AttackKind::IntervalJitter}, rng);
    s.scenarios.insert(s.scenarios.begin(), "scale positives=" + std::to_string(positives) +
                                                " negatives=" + std::to_string(negatives));
    return s;
}

}  // namespace mcids
