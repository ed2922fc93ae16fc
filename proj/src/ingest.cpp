#include "mcids/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "mcids/error.hpp"

namespace mcids {

FrameKind frame_kind(std::uint16_t ethertype) {
    if (ethertype == kGooseEtherType) return FrameKind::Goose;
    if (ethertype == kSvEtherType) return FrameKind::Sv;
    char buf[48];
    std::snprintf(buf, sizeof buf, "unknown EtherType 0x%04x", ethertype);
    throw UnknownKindError(buf);
}

const std::vector<std::string>& goose_csv_columns() {
    static const std::vector<std::string> cols = {"Time",    "DM",    "SM",    "Type",
                                                  "APPID",   "Dataset", "GoID", "StNum",
                                                  "SqNum",   "Data1", "Data2"};
    return cols;
}

const std::vector<std::string>& sv_csv_columns() {
    static const std::vector<std::string> cols = {"Time",  "DM",   "SM",    "Type",
                                                  "APPID", "SvID", "SmpCnt"};
    return cols;
}

namespace {

// ---- CSV tokenizer --------------------------------------------------------

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> cells;
};

// Splits text into rows. Handles quoted cells with "" escapes, CRLF, a UTF-8
// BOM and blank lines (skipped).
std::vector<CsvRow> tokenize(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string cell;
    bool in_quotes = false;
    bool row_has_content = false;
    std::size_t line = 1;
    row.line = 1;

    auto end_cell = [&] {
        row.cells.push_back(std::move(cell));
        cell.clear();
    };
    auto end_row = [&] {
        end_cell();
        if (row_has_content) rows.push_back(std::move(row));
        row = CsvRow{};
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                row_has_content = true;
                end_cell();
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                ++line;
                row.line = line;
                break;
            default:
                row_has_content = true;
                cell.push_back(c);
        }
    }
    if (in_quotes) throw RowError(row.line, "unterminated quoted cell");
    end_row();
    return rows;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool header_matches(const CsvRow& header, const std::vector<std::string>& columns) {
    if (header.cells.size() != columns.size()) return false;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (!iequals(trim(header.cells[i]), columns[i])) return false;
    }
    return true;
}

std::string describe_header(const CsvRow& header) {
    std::string s;
    for (std::size_t i = 0; i < header.cells.size(); ++i) {
        if (i) s += ',';
        s += header.cells[i];
    }
    return s;
}

// ---- cell parsers ---------------------------------------------------------

template <class T>
T parse_unsigned(std::string_view text, int base, std::size_t line, const char* field) {
    text = trim(text);
    if (base == 16 && (text.starts_with("0x") || text.starts_with("0X"))) text.remove_prefix(2);
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw RowError(line, std::string("invalid ") + field + " '" + std::string(text) + "'");
    }
    return value;
}

std::uint16_t parse_appid(std::string_view text, std::size_t line) {
    auto t = trim(text);
    if (t.starts_with("0x") || t.starts_with("0X")) return parse_unsigned<std::uint16_t>(t, 16, line, "APPID");
    return parse_unsigned<std::uint16_t>(t, 10, line, "APPID");
}

MacAddress parse_mac(std::string_view text, std::size_t line, const char* field) {
    auto mac = MacAddress::parse(trim(text));
    if (!mac) throw RowError(line, std::string("invalid ") + field + " '" + std::string(text) + "'");
    return *mac;
}

bool parse_flag(std::string_view text, std::size_t line, const char* field) {
    auto t = trim(text);
    if (t == "1" || iequals(t, "true")) return true;
    if (t == "0" || iequals(t, "false")) return false;
    throw RowError(line, std::string("invalid ") + field + " '" + std::string(text) + "'");
}

// Time cells never reject a row: an unreadable value is kept as text and
// marked unknown.
template <class Record>
void parse_time_cell(Entry<Record>& entry, std::string_view cell) {
    entry.raw_time = std::string(cell);
    auto t = MicroTimestamp::parse_lenient(cell);
    entry.time_known = t.has_value();
    entry.record.time = t.value_or(MicroTimestamp{});
}

std::string read_all(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

template <class Fn>
auto parse_rows(std::string_view text, const std::vector<std::string>& columns, const char* name,
                Fn&& parse_row) {
    auto rows = tokenize(text);
    if (rows.empty()) throw SchemaError(std::string("missing ") + name + " header");
    if (!header_matches(rows.front(), columns)) {
        throw SchemaError(std::string("header does not match the ") + name + " schema: '" +
                          describe_header(rows.front()) + "'");
    }
    std::vector<decltype(parse_row(rows.front()))> out;
    out.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.cells.size() != columns.size()) {
            throw RowError(row.line, "expected " + std::to_string(columns.size()) + " cells, got " +
                                         std::to_string(row.cells.size()));
        }
        out.push_back(parse_row(row));
    }
    return out;
}

// ---- CSV writer -----------------------------------------------------------

void write_cell(std::ostream& out, std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out << ',';
        out << cols[i];
    }
    out << '\n';
}

std::string hex4(std::uint16_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04x", v);
    return buf;
}

}  // namespace

std::vector<GooseEntry> parse_csv_goose(std::string_view text) {
    return parse_rows(text, goose_csv_columns(), "GOOSE", [](const CsvRow& row) {
        const auto& c = row.cells;
        GooseEntry e;
        parse_time_cell(e, c[0]);
        auto& r = e.record;
        r.dm = parse_mac(c[1], row.line, "DM");
        r.sm = parse_mac(c[2], row.line, "SM");
        r.ethertype = parse_unsigned<std::uint16_t>(c[3], 16, row.line, "Type");
        r.appid = parse_appid(c[4], row.line);
        r.dataset = std::string(c[5]);
        r.goid = std::string(c[6]);
        r.stnum = parse_unsigned<std::uint32_t>(c[7], 10, row.line, "StNum");
        r.sqnum = parse_unsigned<std::uint32_t>(c[8], 10, row.line, "SqNum");
        r.data1 = parse_flag(c[9], row.line, "Data1");
        r.data2 = parse_flag(c[10], row.line, "Data2");
        return e;
    });
}

std::vector<SvEntry> parse_csv_sv(std::string_view text) {
    return parse_rows(text, sv_csv_columns(), "SV", [](const CsvRow& row) {
        const auto& c = row.cells;
        SvEntry e;
        parse_time_cell(e, c[0]);
        auto& r = e.record;
        r.dm = parse_mac(c[1], row.line, "DM");
        r.sm = parse_mac(c[2], row.line, "SM");
        r.ethertype = parse_unsigned<std::uint16_t>(c[3], 16, row.line, "Type");
        r.appid = parse_appid(c[4], row.line);
        r.svid = std::string(c[5]);
        r.smpcnt = parse_unsigned<std::uint16_t>(c[6], 10, row.line, "SmpCnt");
        return e;
    });
}

std::vector<GooseEntry> parse_csv_goose(std::istream& in) { return parse_csv_goose(read_all(in)); }
std::vector<SvEntry> parse_csv_sv(std::istream& in) { return parse_csv_sv(read_all(in)); }

Protocol sniff_csv_protocol(std::string_view text) {
    auto nl = text.find('\n');
    auto rows = tokenize(text.substr(0, nl));
    if (rows.empty()) throw SchemaError("empty CSV input");
    if (header_matches(rows.front(), goose_csv_columns())) return Protocol::Goose;
    if (header_matches(rows.front(), sv_csv_columns())) return Protocol::Sv;
    throw SchemaError("header matches neither the GOOSE nor the SV schema: '" +
                      describe_header(rows.front()) + "'");
}

void write_csv(std::ostream& out, std::span<const GooseEntry> entries) {
    write_header(out, goose_csv_columns());
    for (const auto& e : entries) {
        const auto& r = e.record;
        write_cell(out, e.raw_time);
        out << ',' << r.dm.to_string() << ',' << r.sm.to_string() << ',' << hex4(r.ethertype) << ','
            << r.appid << ',';
        write_cell(out, r.dataset);
        out << ',';
        write_cell(out, r.goid);
        out << ',' << r.stnum << ',' << r.sqnum << ',' << (r.data1 ? 1 : 0) << ','
            << (r.data2 ? 1 : 0) << '\n';
    }
}

void write_csv(std::ostream& out, std::span<const SvEntry> entries) {
    write_header(out, sv_csv_columns());
    for (const auto& e : entries) {
        const auto& r = e.record;
        write_cell(out, e.raw_time);
        out << ',' << r.dm.to_string() << ',' << r.sm.to_string() << ',' << hex4(r.ethertype) << ','
            << r.appid << ',';
        write_cell(out, r.svid);
        out << ',' << r.smpcnt << '\n';
    }
}

std::string to_csv(std::span<const GooseEntry> entries) {
    std::ostringstream os;
    write_csv(os, entries);
    return os.str();
}

std::string to_csv(std::span<const SvEntry> entries) {
    std::ostringstream os;
    write_csv(os, entries);
    return os.str();
}

// ---- binary frames --------------------------------------------------------

namespace {

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v >> 8));
        u8(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint32_t v) {
        u16(static_cast<std::uint16_t>(v >> 16));
        u16(static_cast<std::uint16_t>(v));
    }
    void mac(const MacAddress& m) { buf_.insert(buf_.end(), m.octets.begin(), m.octets.end()); }

    void tlv_text(std::uint8_t tag, std::string_view s, const char* field) {
        if (s.size() > kMaxTextField) {
            throw EncodeError(std::string(field) + " is " + std::to_string(s.size()) +
                              " bytes; the short-form limit is 127");
        }
        u8(tag);
        u8(static_cast<std::uint8_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void tlv_u32(std::uint8_t tag, std::uint32_t v) {
        u8(tag);
        u8(4);
        u32(v);
    }
    void tlv_u16(std::uint8_t tag, std::uint16_t v) {
        u8(tag);
        u8(2);
        u16(v);
    }
    void tlv_bool(std::uint8_t tag, bool v) {
        u8(tag);
        u8(1);
        u8(v ? 1 : 0);
    }

    void begin(const MacAddress& dm, const MacAddress& sm, std::uint16_t ethertype,
               std::uint16_t appid, MicroTimestamp time) {
        mac(dm);
        mac(sm);
        u16(ethertype);
        u16(appid);
        u16(0);  // patched by finish()
        u32(time.seconds_of_day());
        u32(time.microseconds());
    }

    std::vector<std::uint8_t> finish() {
        auto pdu = buf_.size() - 18;
        buf_[16] = static_cast<std::uint8_t>(pdu >> 8);
        buf_[17] = static_cast<std::uint8_t>(pdu);
        return std::move(buf_);
    }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        auto v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t hi = u16();
        return (hi << 16) | u16();
    }
    MacAddress mac() {
        need(6);
        MacAddress m;
        std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), 6, m.octets.begin());
        pos_ += 6;
        return m;
    }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    void need(std::size_t n) const {
        if (remaining() < n) throw TruncationError("frame ends at byte " + std::to_string(bytes_.size()));
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

// TLV walker that enforces ascending tags, each exactly once.
class TlvReader {
public:
    explicit TlvReader(std::span<const std::uint8_t> body) : body_(body) {}

    std::span<const std::uint8_t> expect(std::uint8_t tag, const char* field) {
        if (pos_ + 2 > body_.size()) throw TlvError(std::string("missing ") + field + " TLV");
        auto t = body_[pos_];
        auto len = body_[pos_ + 1];
        if (t != tag) {
            throw TlvError(std::string("expected ") + field + " TLV (tag " + std::to_string(tag) +
                           "), found tag " + std::to_string(t));
        }
        if (len > kMaxTextField) throw TlvError(std::string(field) + " TLV uses a long-form length");
        if (pos_ + 2 + len > body_.size()) {
            throw TlvError(std::string(field) + " TLV length overruns the PDU");
        }
        auto value = body_.subspan(pos_ + 2, len);
        pos_ += 2 + static_cast<std::size_t>(len);
        return value;
    }

    std::string text(std::uint8_t tag, const char* field) {
        auto v = expect(tag, field);
        return std::string(v.begin(), v.end());
    }

    std::uint32_t u32(std::uint8_t tag, const char* field) {
        auto v = expect(tag, field);
        if (v.size() != 4) throw TlvError(std::string(field) + " TLV must be 4 bytes");
        return (std::uint32_t{v[0]} << 24) | (std::uint32_t{v[1]} << 16) | (std::uint32_t{v[2]} << 8) | v[3];
    }

    std::uint16_t u16(std::uint8_t tag, const char* field) {
        auto v = expect(tag, field);
        if (v.size() != 2) throw TlvError(std::string(field) + " TLV must be 2 bytes");
        return static_cast<std::uint16_t>((v[0] << 8) | v[1]);
    }

    bool flag(std::uint8_t tag, const char* field) {
        auto v = expect(tag, field);
        if (v.size() != 1 || v[0] > 1) throw TlvError(std::string(field) + " TLV must be one byte, 0 or 1");
        return v[0] == 1;
    }

    void finish() const {
        if (pos_ != body_.size()) throw TlvError("unexpected bytes after the last TLV");
    }

private:
    std::span<const std::uint8_t> body_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_frame(const GooseRecord& r) {
    Writer w;
    w.begin(r.dm, r.sm, r.ethertype, r.appid, r.time);
    w.tlv_text(0x01, r.dataset, "dataset");
    w.tlv_text(0x02, r.goid, "goID");
    w.tlv_u32(0x03, r.stnum);
    w.tlv_u32(0x04, r.sqnum);
    w.tlv_bool(0x05, r.data1);
    w.tlv_bool(0x06, r.data2);
    return w.finish();
}

std::vector<std::uint8_t> encode_frame(const SvRecord& r) {
    Writer w;
    w.begin(r.dm, r.sm, r.ethertype, r.appid, r.time);
    w.tlv_text(0x01, r.svid, "svID");
    w.tlv_u16(0x02, r.smpcnt);
    return w.finish();
}

std::vector<std::uint8_t> encode_frame(const Record& record) {
    return std::visit([](const auto& r) { return encode_frame(r); }, record);
}

Record decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kFrameHeaderSize) {
        throw TruncationError("frame of " + std::to_string(bytes.size()) + " bytes is shorter than the " +
                              std::to_string(kFrameHeaderSize) + "-byte header");
    }
    Reader rd(bytes);
    auto dm = rd.mac();
    auto sm = rd.mac();
    auto ethertype = rd.u16();
    auto kind = frame_kind(ethertype);
    auto appid = rd.u16();
    auto pdu_len = rd.u16();
    if (pdu_len < 8) throw TlvError("PDU length " + std::to_string(pdu_len) + " cannot hold the timestamp");
    if (pdu_len > rd.remaining()) {
        throw TruncationError("PDU declares " + std::to_string(pdu_len) + " bytes, " +
                              std::to_string(rd.remaining()) + " available");
    }
    if (pdu_len < rd.remaining()) throw TlvError("trailing bytes after the declared PDU");

    auto seconds = rd.u32();
    auto micros = rd.u32();
    if (seconds >= MicroTimestamp::kSecondsPerDay || micros >= MicroTimestamp::kMicrosPerSecond) {
        throw TlvError("timestamp out of range");
    }
    MicroTimestamp time(seconds, micros);
    TlvReader tlv(rd.take(rd.remaining()));

    if (kind == FrameKind::Goose) {
        GooseRecord r;
        r.time = time;
        r.dm = dm;
        r.sm = sm;
        r.ethertype = ethertype;
        r.appid = appid;
        r.dataset = tlv.text(0x01, "dataset");
        r.goid = tlv.text(0x02, "goID");
        r.stnum = tlv.u32(0x03, "stNum");
        r.sqnum = tlv.u32(0x04, "sqNum");
        r.data1 = tlv.flag(0x05, "data1");
        r.data2 = tlv.flag(0x06, "data2");
        tlv.finish();
        return r;
    }
    SvRecord r;
    r.time = time;
    r.dm = dm;
    r.sm = sm;
    r.ethertype = ethertype;
    r.appid = appid;
    r.svid = tlv.text(0x01, "svID");
    r.smpcnt = tlv.u16(0x02, "smpCnt");
    tlv.finish();
    return r;
}

void write_frame_stream(std::ostream& out, std::span<const Record> records) {
    for (const auto& rec : records) {
        auto frame = encode_frame(rec);
        auto n = static_cast<std::uint32_t>(frame.size());
        char len[4] = {static_cast<char>(n >> 24), static_cast<char>(n >> 16), static_cast<char>(n >> 8),
                       static_cast<char>(n)};
        out.write(len, 4);
        out.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
    }
}

std::vector<Record> read_frame_stream(std::span<const std::uint8_t> bytes) {
    std::vector<Record> out;
    Reader rd(bytes);
    while (rd.remaining() > 0) {
        if (rd.remaining() < 4) throw TruncationError("frame stream ends inside a length prefix");
        auto n = rd.u32();
        if (n > rd.remaining()) {
            throw TruncationError("frame " + std::to_string(out.size()) + " declares " + std::to_string(n) +
                                  " bytes, " + std::to_string(rd.remaining()) + " available");
        }
        out.push_back(decode_frame(rd.take(n)));
    }
    return out;
}

}  // namespace mcids
