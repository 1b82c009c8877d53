#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prefnet/graph.hpp"
#include "prefnet/schema.hpp"

namespace prefnet {

enum class CommKind { call, text };

struct CommEvent {
  std::int64_t timestamp = 0;
  std::string sender;
  std::string receiver;
  CommKind kind = CommKind::call;
  std::int64_t duration = 0;  // seconds for calls, characters for texts
  int semester = 0;

  bool operator==(const CommEvent&) const = default;
};

struct EventLog {
  std::vector<CommEvent> events;  // sorted by timestamp
  std::size_t self_loops = 0;
  std::size_t out_of_window = 0;
};

/// Reads events.csv (`timestamp,sender,receiver,kind,duration`).
EventLog parse_events(const std::filesystem::path& path, const SemesterCalendar& calendar);
EventLog parse_events_text(std::string_view text, const SemesterCalendar& calendar,
                           std::string_view origin = "events.csv");

/// Participants may name at most this many alters per semester.
inline constexpr std::size_t kMaxNominations = 20;

struct Nomination {
  int semester = 0;
  std::string ego;
  std::string alter;

  bool operator==(const Nomination&) const = default;
};

struct NominationLog {
  std::vector<Nomination> nominations;
  std::size_t self_nominations = 0;
  std::size_t duplicates = 0;
};

NominationLog parse_nominations(const std::filesystem::path& path, const SemesterCalendar& calendar);
NominationLog parse_nominations_text(std::string_view text, const SemesterCalendar& calendar,
                                     std::string_view origin = "nominations.csv");

struct AttributeRecord {
  int semester = 0;
  std::string node;
  std::size_t attribute = 0;  // index into the schema
  std::size_t value = 0;      // index into the attribute's values

  bool operator==(const AttributeRecord&) const = default;
};

std::vector<AttributeRecord> parse_attributes(const std::filesystem::path& path,
                                              const SchemaFile& schema);
std::vector<AttributeRecord> parse_attributes_text(std::string_view text, const SchemaFile& schema,
                                                   std::string_view origin = "attributes.csv");

struct SnapshotOptions {
  /// Require both endpoints to nominate each other for a cognitive edge.
  bool mutual_nominations = false;
};

/// Counters for everything dropped during ingestion.
struct IngestWarnings {
  std::size_t self_loops = 0;
  std::size_t out_of_window = 0;
  std::size_t self_nominations = 0;
  std::size_t duplicate_nominations = 0;
  std::size_t dropped_events = 0;       // an endpoint has no attribute history
  std::size_t dropped_nominations = 0;  // idem
  std::vector<std::string> excluded_nodes;

  std::size_t total() const;
};

/// A schema, its calendar and one snapshot per calendar semester.
struct SnapshotSeries {
  AttributeSchema schema;
  SemesterCalendar calendar;
  std::vector<Snapshot> snapshots;

  /// 1-based semester lookup; throws Error(domain) when out of range.
  const Snapshot& semester(int index) const;
  bool operator==(const SnapshotSeries&) const = default;
};

SnapshotSeries build_snapshots(const EventLog& events, const NominationLog& nominations,
                               const std::vector<AttributeRecord>& attributes,
                               const SchemaFile& schema, const SnapshotOptions& options = {},
                               IngestWarnings* warnings = nullptr);

struct IngestPaths {
  std::filesystem::path schema;
  std::filesystem::path events;
  std::filesystem::path nominations;
  std::filesystem::path attributes;
};

/// Parses all four inputs and assembles the series.
SnapshotSeries ingest(const IngestPaths& paths, const SnapshotOptions& options = {},
                      IngestWarnings* warnings = nullptr);

// Canonical JSON form:
// {"format": "prefnet.snapshots/1",
//  "schema": {"<attr>": [values...], ..., "calendar": [{index, start, end}...]},
//  "snapshots": [{"semester": k,
//                 "nodes": [{"id": "...", "attributes": {"<attr>": "<value>"}}],
//                 "behavioral_edges": [{"u": "...", "v": "...", "weight": w}],
//                 "cognitive_edges": [["u", "v"]]}]}
// Node ids within a pair are in node order; pairs are sorted.
std::string series_to_json(const SnapshotSeries& series);
SnapshotSeries series_from_json(std::string_view text);
std::string snapshot_to_json(const Snapshot& snapshot, const AttributeSchema& schema);
Snapshot snapshot_from_json(std::string_view text, const AttributeSchema& schema);

void save_series(const SnapshotSeries& series, const std::filesystem::path& path);
SnapshotSeries load_series(const std::filesystem::path& path);

std::string warnings_to_json(const IngestWarnings& warnings);

}  // namespace prefnet
