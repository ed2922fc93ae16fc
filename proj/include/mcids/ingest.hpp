#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mcids/core.hpp"

namespace mcids {

enum class FrameKind : std::uint8_t { Goose, Sv };

/// Throws UnknownKindError for anything but 0x88B8 / 0x88BA.
FrameKind frame_kind(std::uint16_t ethertype);

// ---------------------------------------------------------------------------
// Feature-log CSV
//
// GOOSE: Time,DM,SM,Type,APPID,Dataset,GoID,StNum,SqNum,Data1,Data2
// SV:    Time,DM,SM,Type,APPID,SvID,SmpCnt
//
// Type is hex ("88b8", optional 0x). APPID is decimal unless 0x-prefixed.
// Data1/Data2 accept 0/1/true/false. The header must match exactly, ignoring
// case. A time cell that cannot be read at all still yields a row, with
// time_known = false, so the time-format rule can see it.
// ---------------------------------------------------------------------------

const std::vector<std::string>& goose_csv_columns();
const std::vector<std::string>& sv_csv_columns();

std::vector<GooseEntry> parse_csv_goose(std::istream& in);
std::vector<SvEntry> parse_csv_sv(std::istream& in);
std::vector<GooseEntry> parse_csv_goose(std::string_view text);
std::vector<SvEntry> parse_csv_sv(std::string_view text);

/// Reads the header row only and reports which schema it matches.
/// Throws SchemaError when it matches neither.
Protocol sniff_csv_protocol(std::string_view text);

void write_csv(std::ostream& out, std::span<const GooseEntry> entries);
void write_csv(std::ostream& out, std::span<const SvEntry> entries);
std::string to_csv(std::span<const GooseEntry> entries);
std::string to_csv(std::span<const SvEntry> entries);

// ---------------------------------------------------------------------------
// Canonical binary frame, big-endian:
//   0-5 DM | 6-11 SM | 12-13 EtherType | 14-15 APPID
//   16-17 PDU length (bytes after offset 17)
//   18-21 seconds of day | 22-25 microseconds | TLVs...
// TLV = tag(1) len(1, <= 127) value, ascending tags, each exactly once.
//   GOOSE: 01 dataset, 02 goID, 03 stNum(4), 04 sqNum(4), 05 data1(1), 06 data2(1)
//   SV:    01 svID, 02 smpCnt(2)
// ---------------------------------------------------------------------------

inline constexpr std::size_t kFrameHeaderSize = 26;
inline constexpr std::size_t kMaxTextField = 127;

using Record = std::variant<GooseRecord, SvRecord>;

/// Throws EncodeError when a text field exceeds 127 bytes.
std::vector<std::uint8_t> encode_frame(const GooseRecord& record);
std::vector<std::uint8_t> encode_frame(const SvRecord& record);
std::vector<std::uint8_t> encode_frame(const Record& record);

/// The buffer must hold exactly one frame. Throws TruncationError,
/// UnknownKindError or TlvError; never reads outside `bytes`.
Record decode_frame(std::span<const std::uint8_t> bytes);

/// Frame stream container: repeated [4-byte big-endian length][frame].
void write_frame_stream(std::ostream& out, std::span<const Record> records);
std::vector<Record> read_frame_stream(std::span<const std::uint8_t> bytes);

}  // namespace mcids
