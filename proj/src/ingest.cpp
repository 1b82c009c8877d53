#include "prefnet/ingest.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "prefnet/error.hpp"
#include "util.hpp"

namespace prefnet {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void row_error(ErrorKind kind, std::string_view origin, std::size_t line,
                            const std::string& message) {
  throw Error(kind, std::string(origin) + ":" + std::to_string(line) + ": " + message);
}

// Reads the header line and checks it names exactly `expected`.
void expect_header(detail::LineReader& reader, std::string_view origin,
                   const std::vector<std::string>& expected) {
  std::string_view line;
  while (reader.next(line)) {
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = detail::split_csv_line(line);
    } catch (const Error& e) {
      row_error(ErrorKind::parse, origin, reader.line_number(), e.what());
    }
    if (fields != expected) {
      std::string want;
      for (const auto& f : expected) want += (want.empty() ? "" : ",") + f;
      row_error(ErrorKind::parse, origin, reader.line_number(), "expected header '" + want + "'");
    }
    return;
  }
  throw Error(ErrorKind::parse, std::string(origin) + ": empty file, header required");
}

std::vector<std::string> row_fields(std::string_view line, std::size_t count,
                                    std::string_view origin, std::size_t number) {
  std::vector<std::string> fields;
  try {
    fields = detail::split_csv_line(line);
  } catch (const Error& e) {
    row_error(ErrorKind::parse, origin, number, e.what());
  }
  if (fields.size() != count)
    row_error(ErrorKind::parse, origin, number,
              "expected " + std::to_string(count) + " fields, found " + std::to_string(fields.size()));
  return fields;
}

int parse_semester(const std::string& field, const SemesterCalendar& calendar,
                   std::string_view origin, std::size_t number) {
  const auto value = detail::parse_int(field);
  if (!value) row_error(ErrorKind::parse, origin, number, "semester '" + field + "' is not an integer");
  if (!calendar.has(static_cast<int>(*value)))
    row_error(ErrorKind::validation, origin, number, "semester " + field + " is not in the calendar");
  return static_cast<int>(*value);
}

void require_id(const std::string& id, const char* what, std::string_view origin, std::size_t number) {
  if (id.empty()) row_error(ErrorKind::parse, origin, number, std::string("empty ") + what);
}

}  // namespace

EventLog parse_events_text(std::string_view text, const SemesterCalendar& calendar,
                           std::string_view origin) {
  detail::LineReader reader(text);
  expect_header(reader, origin, {"timestamp", "sender", "receiver", "kind", "duration"});
  EventLog log;
  std::string_view line;
  while (reader.next(line)) {
    if (detail::trim(line).empty()) continue;
    const auto number = reader.line_number();
    const auto fields = row_fields(line, 5, origin, number);
    CommEvent event;
    const auto ts = detail::parse_int(fields[0]);
    if (!ts) row_error(ErrorKind::parse, origin, number, "timestamp '" + fields[0] + "' is not an integer");
    event.timestamp = *ts;
    event.sender = fields[1];
    event.receiver = fields[2];
    require_id(event.sender, "sender", origin, number);
    require_id(event.receiver, "receiver", origin, number);
    if (fields[3] == "call") event.kind = CommKind::call;
    else if (fields[3] == "text") event.kind = CommKind::text;
    else row_error(ErrorKind::parse, origin, number, "kind '" + fields[3] + "' is not call|text");
    const auto duration = detail::parse_int(fields[4]);
    if (!duration || *duration < 0)
      row_error(ErrorKind::parse, origin, number, "duration '" + fields[4] + "' is not a non-negative integer");
    event.duration = *duration;

    if (event.sender == event.receiver) {
      ++log.self_loops;
      continue;
    }
    const auto semester = calendar.semester_of(event.timestamp);
    if (!semester) {
      ++log.out_of_window;
      continue;
    }
    event.semester = *semester;
    log.events.push_back(std::move(event));
  }
  std::sort(log.events.begin(), log.events.end(), [](const CommEvent& a, const CommEvent& b) {
    return std::tie(a.timestamp, a.sender, a.receiver, a.kind, a.duration) <
           std::tie(b.timestamp, b.sender, b.receiver, b.kind, b.duration);
  });
  return log;
}

EventLog parse_events(const std::filesystem::path& path, const SemesterCalendar& calendar) {
  return parse_events_text(detail::read_file(path), calendar, path.string());
}

NominationLog parse_nominations_text(std::string_view text, const SemesterCalendar& calendar,
                                     std::string_view origin) {
  detail::LineReader reader(text);
  expect_header(reader, origin, {"semester", "ego", "alter"});
  NominationLog log;
  std::set<std::tuple<int, std::string, std::string>> seen;
  std::map<std::pair<int, std::string>, std::size_t> per_ego;
  std::string_view line;
  while (reader.next(line)) {
    if (detail::trim(line).empty()) continue;
    const auto number = reader.line_number();
    const auto fields = row_fields(line, 3, origin, number);
    Nomination nomination;
    nomination.semester = parse_semester(fields[0], calendar, origin, number);
    nomination.ego = fields[1];
    nomination.alter = fields[2];
    require_id(nomination.ego, "ego", origin, number);
    require_id(nomination.alter, "alter", origin, number);
    if (nomination.ego == nomination.alter) {
      ++log.self_nominations;
      continue;
    }
    if (!seen.emplace(nomination.semester, nomination.ego, nomination.alter).second) {
      ++log.duplicates;
      continue;
    }
    if (++per_ego[{nomination.semester, nomination.ego}] > kMaxNominations)
      row_error(ErrorKind::validation, origin, number,
                "ego '" + nomination.ego + "' lists more than " + std::to_string(kMaxNominations) +
                    " alters in semester " + std::to_string(nomination.semester));
    log.nominations.push_back(std::move(nomination));
  }
  return log;
}

NominationLog parse_nominations(const std::filesystem::path& path, const SemesterCalendar& calendar) {
  return parse_nominations_text(detail::read_file(path), calendar, path.string());
}

std::vector<AttributeRecord> parse_attributes_text(std::string_view text, const SchemaFile& schema,
                                                   std::string_view origin) {
  detail::LineReader reader(text);
  expect_header(reader, origin, {"semester", "node", "attribute", "value"});
  std::vector<AttributeRecord> records;
  std::map<std::tuple<int, std::string, std::size_t>, std::size_t> assigned;
  std::string_view line;
  while (reader.next(line)) {
    if (detail::trim(line).empty()) continue;
    const auto number = reader.line_number();
    const auto fields = row_fields(line, 4, origin, number);
    AttributeRecord record;
    record.semester = parse_semester(fields[0], schema.calendar, origin, number);
    record.node = fields[1];
    require_id(record.node, "node", origin, number);
    const auto attribute = schema.schema.find(fields[2]);
    if (!attribute) row_error(ErrorKind::validation, origin, number, "unknown attribute '" + fields[2] + "'");
    record.attribute = *attribute;
    const auto value = schema.schema.at(*attribute).value_index(fields[3]);
    if (!value)
      row_error(ErrorKind::validation, origin, number,
                "value '" + fields[3] + "' is not listed for attribute '" + fields[2] + "'");
    record.value = *value;
    const auto key = std::make_tuple(record.semester, record.node, record.attribute);
    if (const auto it = assigned.find(key); it != assigned.end()) {
      if (it->second != record.value)
        row_error(ErrorKind::validation, origin, number,
                  "conflicting values for node '" + record.node + "' attribute '" + fields[2] + "'");
      continue;
    }
    assigned.emplace(key, record.value);
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<AttributeRecord> parse_attributes(const std::filesystem::path& path,
                                              const SchemaFile& schema) {
  return parse_attributes_text(detail::read_file(path), schema, path.string());
}

std::size_t IngestWarnings::total() const {
  return self_loops + out_of_window + self_nominations + duplicate_nominations + dropped_events +
         dropped_nominations + excluded_nodes.size();
}

const Snapshot& SnapshotSeries::semester(int index) const {
  if (index < 1 || index > static_cast<int>(snapshots.size()))
    throw Error(ErrorKind::domain, "semester " + std::to_string(index) + " not in series of " +
                                       std::to_string(snapshots.size()));
  return snapshots[static_cast<std::size_t>(index - 1)];
}

SnapshotSeries build_snapshots(const EventLog& events, const NominationLog& nominations,
                               const std::vector<AttributeRecord>& attributes,
                               const SchemaFile& schema, const SnapshotOptions& options,
                               IngestWarnings* warnings) {
  IngestWarnings local;
  local.self_loops = events.self_loops;
  local.out_of_window = events.out_of_window;
  local.self_nominations = nominations.self_nominations;
  local.duplicate_nominations = nominations.duplicates;

  // Participants are nodes with any attribute history; ids sorted.
  std::set<std::string> participant_set;
  for (const auto& record : attributes) participant_set.insert(record.node);
  std::vector<std::string> ids(participant_set.begin(), participant_set.end());
  std::map<std::string, NodeIndex, std::less<>> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<NodeIndex>(i));

  std::set<std::string> excluded;
  auto lookup = [&](const std::string& id) -> std::optional<NodeIndex> {
    const auto it = index.find(id);
    if (it == index.end()) {
      excluded.insert(id);
      return std::nullopt;
    }
    return it->second;
  };

  const auto semesters = schema.calendar.size();
  const auto attribute_count = schema.schema.size();

  // history[node][attribute] -> semester -> value
  std::vector<std::vector<std::map<int, std::size_t>>> history(
      ids.size(), std::vector<std::map<int, std::size_t>>(attribute_count));
  for (const auto& record : attributes)
    history[index.at(record.node)][record.attribute][record.semester] = record.value;

  struct Counts {
    std::uint64_t calls = 0;
    std::uint64_t texts = 0;
  };
  std::vector<std::map<NodePair, Counts>> volume(semesters);
  for (const auto& event : events.events) {
    const auto a = lookup(event.sender);
    const auto b = lookup(event.receiver);
    if (!a || !b) {
      ++local.dropped_events;
      continue;
    }
    auto& counts = volume.at(static_cast<std::size_t>(event.semester - 1))[NodePair::of(*a, *b)];
    (event.kind == CommKind::call ? counts.calls : counts.texts) += 1;
  }

  std::vector<std::set<std::pair<NodeIndex, NodeIndex>>> nominated(semesters);
  for (const auto& nomination : nominations.nominations) {
    const auto ego = lookup(nomination.ego);
    const auto alter = lookup(nomination.alter);
    if (!ego || !alter) {
      ++local.dropped_nominations;
      continue;
    }
    nominated.at(static_cast<std::size_t>(nomination.semester - 1)).emplace(*ego, *alter);
  }

  SnapshotSeries series;
  series.schema = schema.schema;
  series.calendar = schema.calendar;
  for (std::size_t s = 0; s < semesters; ++s) {
    const int semester = static_cast<int>(s) + 1;
    std::vector<AttributeRow> rows(ids.size(), AttributeRow(attribute_count));
    for (std::size_t node = 0; node < ids.size(); ++node) {
      for (std::size_t a = 0; a < attribute_count; ++a) {
        const auto& h = history[node][a];
        // Latest record at or before this semester.
        auto it = h.upper_bound(semester);
        if (it != h.begin()) rows[node][a] = std::prev(it)->second;
      }
    }
    std::map<NodePair, std::uint64_t> behavioral;
    for (const auto& [pair, counts] : volume[s]) behavioral.emplace(pair, edge_weight(counts.calls, counts.texts));
    std::set<NodePair> cognitive;
    for (const auto& [ego, alter] : nominated[s]) {
      if (options.mutual_nominations && !nominated[s].contains({alter, ego})) continue;
      cognitive.insert(NodePair::of(ego, alter));
    }
    series.snapshots.emplace_back(semester, ids, std::move(rows), std::move(behavioral),
                                  std::move(cognitive));
  }

  local.excluded_nodes.assign(excluded.begin(), excluded.end());
  if (warnings) *warnings = std::move(local);
  return series;
}

SnapshotSeries ingest(const IngestPaths& paths, const SnapshotOptions& options,
                      IngestWarnings* warnings) {
  const auto schema = parse_schema(paths.schema);
  const auto events = parse_events(paths.events, schema.calendar);
  const auto nominations = parse_nominations(paths.nominations, schema.calendar);
  const auto attributes = parse_attributes(paths.attributes, schema);
  return build_snapshots(events, nominations, attributes, schema, options, warnings);
}

namespace {

ordered_json snapshot_json(const Snapshot& snapshot, const AttributeSchema& schema) {
  ordered_json nodes = ordered_json::array();
  for (NodeIndex i = 0; i < snapshot.node_count(); ++i) {
    ordered_json attrs = ordered_json::object();
    const auto& row = snapshot.attributes(i);
    for (std::size_t a = 0; a < row.size(); ++a)
      if (row[a]) attrs[schema.at(a).name] = schema.at(a).values.at(*row[a]);
    nodes.push_back({{"id", snapshot.node_id(i)}, {"attributes", std::move(attrs)}});
  }
  ordered_json behavioral = ordered_json::array();
  for (const auto& [pair, weight] : snapshot.behavioral_edges())
    behavioral.push_back(
        {{"u", snapshot.node_id(pair.u)}, {"v", snapshot.node_id(pair.v)}, {"weight", weight}});
  ordered_json cognitive = ordered_json::array();
  for (const auto& pair : snapshot.cognitive_edges())
    cognitive.push_back({snapshot.node_id(pair.u), snapshot.node_id(pair.v)});
  return {{"semester", snapshot.semester()},
          {"nodes", std::move(nodes)},
          {"behavioral_edges", std::move(behavioral)},
          {"cognitive_edges", std::move(cognitive)}};
}

template <typename T>
T field(const ordered_json& object, const char* name, std::string_view where) {
  if (!object.is_object() || !object.contains(name))
    throw Error(ErrorKind::parse, std::string(where) + ": missing '" + name + "'");
  try {
    return object.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::parse, std::string(where) + ": field '" + name + "' has the wrong type");
  }
}

Snapshot snapshot_from(const ordered_json& root, const AttributeSchema& schema) {
  const auto semester = field<int>(root, "semester", "snapshot");
  const auto where = "snapshot " + std::to_string(semester);
  const auto& nodes = root.at("nodes");
  std::vector<std::string> ids;
  std::vector<AttributeRow> rows;
  std::map<std::string, NodeIndex, std::less<>> index;
  for (const auto& node : nodes) {
    auto id = field<std::string>(node, "id", where);
    AttributeRow row(schema.size());
    if (node.contains("attributes")) {
      for (const auto& [name, value] : node.at("attributes").items()) {
        const auto a = schema.find(name);
        if (!a) throw Error(ErrorKind::validation, where + ": unknown attribute '" + name + "'");
        const auto v = value.is_string() ? schema.at(*a).value_index(value.get<std::string>())
                                         : std::nullopt;
        if (!v)
          throw Error(ErrorKind::validation,
                      where + ": node '" + id + "' has an invalid value for '" + name + "'");
        row[*a] = *v;
      }
    }
    index.emplace(id, static_cast<NodeIndex>(ids.size()));
    ids.push_back(std::move(id));
    rows.push_back(std::move(row));
  }
  auto node_of = [&](const std::string& id) {
    const auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorKind::validation, where + ": edge endpoint '" + id + "' is not a node");
    return it->second;
  };
  std::map<NodePair, std::uint64_t> behavioral;
  for (const auto& edge : root.at("behavioral_edges")) {
    const auto pair = NodePair::of(node_of(field<std::string>(edge, "u", where)),
                                   node_of(field<std::string>(edge, "v", where)));
    behavioral[pair] = field<std::uint64_t>(edge, "weight", where);
  }
  std::set<NodePair> cognitive;
  for (const auto& edge : root.at("cognitive_edges")) {
    if (!edge.is_array() || edge.size() != 2)
      throw Error(ErrorKind::parse, where + ": cognitive edge must be a two-element array");
    cognitive.insert(NodePair::of(node_of(edge[0].get<std::string>()), node_of(edge[1].get<std::string>())));
  }
  return Snapshot(semester, std::move(ids), std::move(rows), std::move(behavioral), std::move(cognitive));
}

ordered_json parse_json(std::string_view text, std::string_view origin) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string(origin) + ": " + e.what());
  }
}

}  // namespace

std::string snapshot_to_json(const Snapshot& snapshot, const AttributeSchema& schema) {
  return snapshot_json(snapshot, schema).dump(2) + "\n";
}

Snapshot snapshot_from_json(std::string_view text, const AttributeSchema& schema) {
  try {
    return snapshot_from(parse_json(text, "snapshot"), schema);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("snapshot: ") + e.what());
  }
}

std::string series_to_json(const SnapshotSeries& series) {
  ordered_json root;
  root["format"] = "prefnet.snapshots/1";
  root["schema"] = ordered_json::parse(schema_to_json({series.schema, series.calendar}));
  ordered_json snapshots = ordered_json::array();
  for (const auto& snapshot : series.snapshots) snapshots.push_back(snapshot_json(snapshot, series.schema));
  root["snapshots"] = std::move(snapshots);
  return root.dump(2) + "\n";
}

SnapshotSeries series_from_json(std::string_view text) {
  const auto root = parse_json(text, "snapshots");
  if (!root.is_object() || root.value("format", "") != "prefnet.snapshots/1")
    throw Error(ErrorKind::parse, "snapshots: expected format 'prefnet.snapshots/1'");
  if (!root.contains("schema") || !root.contains("snapshots"))
    throw Error(ErrorKind::parse, "snapshots: missing 'schema' or 'snapshots'");
  const auto schema = parse_schema_text(root.at("schema").dump(), "snapshots:schema");
  SnapshotSeries series;
  series.schema = schema.schema;
  series.calendar = schema.calendar;
  try {
    for (const auto& snapshot : root.at("snapshots")) series.snapshots.push_back(snapshot_from(snapshot, series.schema));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("snapshots: ") + e.what());
  }
  return series;
}

void save_series(const SnapshotSeries& series, const std::filesystem::path& path) {
  detail::write_file(path, series_to_json(series));
}

SnapshotSeries load_series(const std::filesystem::path& path) {
  return series_from_json(detail::read_file(path));
}

std::string warnings_to_json(const IngestWarnings& warnings) {
  ordered_json root = {{"self_loops", warnings.self_loops},
                       {"out_of_window", warnings.out_of_window},
                       {"self_nominations", warnings.self_nominations},
                       {"duplicate_nominations", warnings.duplicate_nominations},
                       {"dropped_events", warnings.dropped_events},
                       {"dropped_nominations", warnings.dropped_nominations},
                       {"excluded_nodes", warnings.excluded_nodes},
                       {"total", warnings.total()}};
  return root.dump(2) + "\n";
}

}  // namespace prefnet
