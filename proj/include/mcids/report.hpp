#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mcids/core.hpp"
#include "mcids/metrics.hpp"
#include "mcids/rulebook.hpp"

namespace mcids {

/// 16 hex digits of FNV-1a 64 over the canonical CSV rendering.
std::string stream_id(std::span<const GooseEntry> entries);
std::string stream_id(std::span<const SvEntry> entries);

/// Per-record label sets keyed to a stream, as stored in labels sidecars and
/// findings files. Both are JSON lines: one header object with "stream_id",
/// "protocol" and "records", then one object per record with a non-empty
/// set: {"index": i, "labels": [...]}. Findings lines also carry "stream"
/// and "time"; readers ignore keys they do not use.
struct LabelDocument {
    std::string kind;  // "labels" or "findings"
    std::string stream_id;
    Protocol protocol = Protocol::Goose;
    std::size_t records = 0;
    std::vector<LabelSet> labels;
};

void write_labels(std::ostream& out, const std::string& stream_id, Protocol protocol,
                  std::span<const LabelSet> labels);

template <class E>
void write_findings(std::ostream& out, const std::string& stream_id, Protocol protocol,
                    std::span<const E> entries, std::span<const Finding> findings,
                    const std::string& header_extra_json = "{}");

/// Throws SchemaError on malformed input.
LabelDocument read_label_document(std::istream& in);

/// Findings per label and the number of flagged records.
std::string summary_json(std::size_t records, std::span<const Finding> findings, const RuleSet& rules);

std::string metrics_json(const ConfusionMatrix& cm, const MetricsReport& report);

/// Aligned name / description / value table, 4 decimal places.
std::string metrics_table(const ConfusionMatrix& cm, const MetricsReport& report);

}  // namespace mcids
