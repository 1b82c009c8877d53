#include "prefnet/schema.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "prefnet/error.hpp"
#include "util.hpp"

namespace prefnet {

using ordered_json = nlohmann::ordered_json;

std::optional<std::size_t> Attribute::value_index(std::string_view value) const {
  const auto it = std::find(values.begin(), values.end(), value);
  if (it == values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  if (attributes_.empty()) throw Error(ErrorKind::validation, "schema lists no attributes");
  std::set<std::string, std::less<>> names;
  for (const auto& attribute : attributes_) {
    if (attribute.name.empty()) throw Error(ErrorKind::validation, "attribute with empty name");
    if (!names.insert(attribute.name).second)
      throw Error(ErrorKind::validation, "attribute '" + attribute.name + "' is defined twice");
    std::set<std::string, std::less<>> values;
    for (const auto& value : attribute.values) {
      if (!values.insert(value).second)
        throw Error(ErrorKind::validation,
                    "attribute '" + attribute.name + "' lists value '" + value + "' twice");
    }
    if (values.size() < 2)
      throw Error(ErrorKind::validation,
                  "attribute '" + attribute.name + "' needs at least 2 distinct values");
  }
}

std::optional<std::size_t> AttributeSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return i;
  return std::nullopt;
}

std::size_t AttributeSchema::index_of(std::string_view name) const {
  if (auto index = find(name)) return *index;
  throw Error(ErrorKind::validation, "unknown attribute '" + std::string(name) + "'");
}

std::vector<std::string> AttributeSchema::names() const {
  std::vector<std::string> out;
  out.reserve(attributes_.size());
  for (const auto& attribute : attributes_) out.push_back(attribute.name);
  return out;
}

SemesterCalendar::SemesterCalendar(std::vector<Semester> semesters)
    : semesters_(std::move(semesters)) {
  if (semesters_.empty()) throw Error(ErrorKind::validation, "calendar lists no semesters");
  for (std::size_t i = 0; i < semesters_.size(); ++i) {
    const auto& s = semesters_[i];
    if (s.index != static_cast<int>(i) + 1)
      throw Error(ErrorKind::validation, "calendar semester #" + std::to_string(i + 1) +
                                             " has index " + std::to_string(s.index) +
                                             "; indices must run 1..S in order");
    if (s.start >= s.end)
      throw Error(ErrorKind::validation,
                  "calendar semester " + std::to_string(s.index) + " ends before it starts");
    if (i > 0 && semesters_[i - 1].end > s.start)
      throw Error(ErrorKind::validation, "calendar semesters " + std::to_string(s.index - 1) +
                                             " and " + std::to_string(s.index) + " overlap");
  }
}

std::optional<int> SemesterCalendar::semester_of(std::int64_t timestamp) const {
  for (const auto& s : semesters_)
    if (s.contains(timestamp)) return s.index;
  return std::nullopt;
}

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + std::min(offset, text.size()), '\n'));
}

// Line of the n-th (0-based) occurrence of a quoted top-level key.
std::size_t line_of_key(std::string_view text, std::string_view key, int occurrence) {
  const std::string needle = "\"" + std::string(key) + "\"";
  std::size_t pos = 0;
  for (int seen = 0;; ++seen) {
    pos = text.find(needle, pos);
    if (pos == std::string_view::npos) return 0;
    if (seen == occurrence) return line_of_offset(text, pos);
    pos += needle.size();
  }
}

std::int64_t calendar_int(const ordered_json& entry, const char* field, std::size_t position,
                          std::string_view origin) {
  if (!entry.contains(field) || !entry[field].is_number_integer())
    throw Error(ErrorKind::parse, std::string(origin) + ": calendar[" + std::to_string(position) +
                                      "]." + field + " must be an integer");
  return entry[field].get<std::int64_t>();
}

}  // namespace

SchemaFile parse_schema_text(std::string_view text, std::string_view origin) {
  std::set<std::string> seen;
  auto callback = [&](int depth, nlohmann::json::parse_event_t event, ordered_json& parsed) {
    if (depth == 1 && event == nlohmann::json::parse_event_t::key) {
      const auto key = parsed.get<std::string>();
      if (!seen.insert(key).second) {
        throw Error(ErrorKind::validation,
                    std::string(origin) + ":" + std::to_string(line_of_key(text, key, 1)) +
                        ": attribute '" + key + "' is defined twice");
      }
    }
    return true;
  };

  ordered_json root;
  try {
    root = ordered_json::parse(text.begin(), text.end(), callback);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string(origin) + ": " + e.what());
  }
  if (!root.is_object())
    throw Error(ErrorKind::parse, std::string(origin) + ": top level must be a JSON object");

  std::vector<Attribute> attributes;
  std::vector<Semester> semesters;
  bool have_calendar = false;
  for (const auto& [key, value] : root.items()) {
    if (key == "calendar") {
      have_calendar = true;
      if (!value.is_array())
        throw Error(ErrorKind::parse, std::string(origin) + ": 'calendar' must be an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const auto& entry = value[i];
        if (!entry.is_object())
          throw Error(ErrorKind::parse, std::string(origin) + ": calendar[" +
                                            std::to_string(i) + "] must be an object");
        Semester s;
        s.index = static_cast<int>(calendar_int(entry, "index", i, origin));
        s.start = calendar_int(entry, "start", i, origin);
        s.end = calendar_int(entry, "end", i, origin);
        semesters.push_back(s);
      }
      continue;
    }
    const auto line = line_of_key(text, key, 0);
    const auto where = std::string(origin) + ":" + std::to_string(line) + ": attribute '" + key + "'";
    if (!value.is_array()) throw Error(ErrorKind::parse, where + " must map to an array of strings");
    Attribute attribute{key, {}};
    for (const auto& v : value) {
      if (!v.is_string()) throw Error(ErrorKind::parse, where + " has a non-string value");
      attribute.values.push_back(v.get<std::string>());
    }
    attributes.push_back(std::move(attribute));
  }
  if (!have_calendar) throw Error(ErrorKind::validation, std::string(origin) + ": missing 'calendar'");

  SchemaFile file;
  try {
    file.schema = AttributeSchema(std::move(attributes));
    file.calendar = SemesterCalendar(std::move(semesters));
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(origin) + ": " + e.what());
  }
  return file;
}

SchemaFile parse_schema(const std::filesystem::path& path) {
  return parse_schema_text(detail::read_file(path), path.string());
}

std::string schema_to_json(const SchemaFile& file, int indent) {
  ordered_json root = ordered_json::object();
  for (const auto& attribute : file.schema.attributes()) root[attribute.name] = attribute.values;
  ordered_json calendar = ordered_json::array();
  for (const auto& s : file.calendar.semesters())
    calendar.push_back({{"index", s.index}, {"start", s.start}, {"end", s.end}});
  root["calendar"] = std::move(calendar);
  return root.dump(indent) + "\n";
}

}  // namespace prefnet
