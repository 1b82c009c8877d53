#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prefnet {

struct Attribute {
  std::string name;
  std::vector<std::string> values;

  std::optional<std::size_t> value_index(std::string_view value) const;
  std::size_t size() const { return values.size(); }

  bool operator==(const Attribute&) const = default;
};

/// Ordered universe of attributes and their finite value sets.
///
/// Names are unique, each attribute has at least two values and no value is
/// listed twice. Order is significant: it fixes feature columns and matrix
/// row/column order everywhere downstream.
class AttributeSchema {
 public:
  AttributeSchema() = default;
  explicit AttributeSchema(std::vector<Attribute> attributes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const Attribute& at(std::size_t index) const { return attributes_.at(index); }
  std::size_t size() const { return attributes_.size(); }
  bool empty() const { return attributes_.empty(); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws Error(validation) naming the attribute when absent.
  std::size_t index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  bool operator==(const AttributeSchema&) const = default;

 private:
  std::vector<Attribute> attributes_;
};

/// Half-open window [start, end) in UTC epoch seconds.
struct Semester {
  int index = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool contains(std::int64_t t) const { return t >= start && t < end; }
  bool operator==(const Semester&) const = default;
};

/// Semesters numbered 1..S in chronological, non-overlapping order.
class SemesterCalendar {
 public:
  SemesterCalendar() = default;
  explicit SemesterCalendar(std::vector<Semester> semesters);

  const std::vector<Semester>& semesters() const { return semesters_; }
  std::size_t size() const { return semesters_.size(); }
  bool has(int index) const { return index >= 1 && index <= static_cast<int>(semesters_.size()); }
  std::optional<int> semester_of(std::int64_t timestamp) const;

  bool operator==(const SemesterCalendar&) const = default;

 private:
  std::vector<Semester> semesters_;
};

/// Contents of schema.json: the attribute schema plus the semester calendar.
struct SchemaFile {
  AttributeSchema schema;
  SemesterCalendar calendar;
};

SchemaFile parse_schema(const std::filesystem::path& path);
SchemaFile parse_schema_text(std::string_view text, std::string_view origin = "schema.json");
std::string schema_to_json(const SchemaFile& file, int indent = 2);

}  // namespace prefnet
