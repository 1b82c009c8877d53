#include "prefnet/survival.hpp"

#include <cmath>

#include <json.hpp>

#include "prefnet/error.hpp"
#include "util.hpp"

namespace prefnet {

double agreement_fraction(const Snapshot& snapshot, NodeIndex u, NodeIndex v) {
  const auto& a = snapshot.attributes(u);
  const auto& b = snapshot.attributes(v);
  std::size_t comparable = 0;
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i] || !b[i]) continue;
    ++comparable;
    equal += *a[i] == *b[i];
  }
  if (comparable == 0)
    throw Error(ErrorKind::domain, "nodes '" + snapshot.node_id(u) + "' and '" + snapshot.node_id(v) +
                                       "' share no comparable attribute");
  return static_cast<double>(equal) / static_cast<double>(comparable);
}

std::optional<double> SurvivalReport::gap() const {
  if (!strong_rate || !weak_rate) return std::nullopt;
  return *strong_rate - *weak_rate;
}

namespace {

std::optional<double> ratio(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) return std::nullopt;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

bool present_in(const Snapshot& from, const Snapshot& other, NodePair pair, NetworkKind kind) {
  const auto u = other.find_node(from.node_id(pair.u));
  const auto v = other.find_node(from.node_id(pair.v));
  return u && v && other.has_edge(kind, *u, *v);
}

}  // namespace

SurvivalReport survival_rates(std::span<const Snapshot> snapshots, NetworkKind kind, double threshold) {
  if (snapshots.size() < 2) throw Error(ErrorKind::invalid_argument, "survival needs at least two snapshots");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(ErrorKind::invalid_argument, "threshold must lie in [0, 1]");
  SurvivalReport report;
  report.network = kind;
  report.threshold = threshold;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const auto& snapshot = snapshots[s];
    SemesterSurvival row;
    row.semester = snapshot.semester();
    row.has_next = s + 1 < snapshots.size();
    for (const auto& pair : snapshot.edges(kind)) {
      ++row.edges;
      std::optional<bool> strong;
      try {
        strong = agreement_fraction(snapshot, pair.u, pair.v) > threshold;
      } catch (const Error&) {
        ++row.unclassified;
      }
      if (strong) (*strong ? row.strong : row.weak) += 1;
      if (row.has_next && strong && present_in(snapshot, snapshots[s + 1], pair, kind))
        (*strong ? row.strong_survived : row.weak_survived) += 1;
      if (s > 0 && strong && present_in(snapshot, snapshots[s - 1], pair, kind)) {
        ++row.aged_edges;
        row.aged_strong += *strong;
      }
    }
    row.strong_fraction = ratio(row.strong, row.strong + row.weak);
    row.aged_strong_fraction = ratio(row.aged_strong, row.aged_edges);
    if (row.has_next) {
      row.strong_rate = ratio(row.strong_survived, row.strong);
      row.weak_rate = ratio(row.weak_survived, row.weak);
      report.strong_total += row.strong;
      report.strong_survived += row.strong_survived;
      report.weak_total += row.weak;
      report.weak_survived += row.weak_survived;
    }
    report.semesters.push_back(row);
  }
  report.strong_rate = ratio(report.strong_survived, report.strong_total);
  report.weak_rate = ratio(report.weak_survived, report.weak_total);
  return report;
}

std::vector<SurvivalReport> sweep_threshold(std::span<const Snapshot> snapshots, NetworkKind kind,
                                            std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::invalid_argument, "threshold grid is empty");
  std::vector<SurvivalReport> reports;
  for (const double t : grid) reports.push_back(survival_rates(snapshots, kind, t));
  return reports;
}

std::vector<double> parse_grid(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos)
    throw Error(ErrorKind::invalid_argument, "grid must be 'start:stop:step', got '" + std::string(text) + "'");
  const auto start = detail::parse_double(text.substr(0, first));
  const auto stop = detail::parse_double(text.substr(first + 1, second - first - 1));
  const auto step = detail::parse_double(text.substr(second + 1));
  if (!start || !stop || !step || !(*step > 0.0) || *stop < *start)
    throw Error(ErrorKind::invalid_argument, "grid must be 'start:stop:step' with step > 0 and start <= stop");
  std::vector<double> grid;
  // Points are start + i*step; the tolerance keeps a stop that is a whole number of steps away.
  const auto count = static_cast<std::size_t>(std::floor((*stop - *start) / *step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) {
    const double value = *start + static_cast<double>(i) * *step;
    grid.push_back(std::round(value * 1e12) / 1e12);
  }
  return grid;
}

std::string survival_to_csv(const SurvivalReport& report) {
  using detail::format_optional;
  std::string out =
      "semester,edges,strong,weak,unclassified,strong_fraction,strong_survived,weak_survived,strong_rate,weak_rate,"
      "aged_edges,aged_strong,aged_strong_fraction\n";
  for (const auto& row : report.semesters) {
    out += std::to_string(row.semester) + "," + std::to_string(row.edges) + "," + std::to_string(row.strong) + "," +
           std::to_string(row.weak) + "," + std::to_string(row.unclassified) + "," +
           format_optional(row.strong_fraction) + ",";
    if (row.has_next)
      out += std::to_string(row.strong_survived) + "," + std::to_string(row.weak_survived) + ",";
    else
      out += ",,";
    out += format_optional(row.strong_rate) + "," + format_optional(row.weak_rate) + ",";
    if (row.semester != report.semesters.front().semester)
      out += std::to_string(row.aged_edges) + "," + std::to_string(row.aged_strong) + ",";
    else
      out += ",,";
    out += format_optional(row.aged_strong_fraction) + "\n";
  }
  out += "all,," + std::to_string(report.strong_total) + "," + std::to_string(report.weak_total) + ",,," +
         std::to_string(report.strong_survived) + "," +
         std::to_string(report.weak_survived) + "," + format_optional(report.strong_rate) + "," +
         format_optional(report.weak_rate) + ",,,\n";
  return out;
}

std::string sweep_to_csv(const std::vector<SurvivalReport>& reports) {
  using detail::format_optional;
  std::string out = "threshold,strong_total,weak_total,strong_survived,weak_survived,strong_rate,weak_rate,gap\n";
  for (const auto& report : reports)
    out += detail::format_double(report.threshold) + "," + std::to_string(report.strong_total) + "," +
           std::to_string(report.weak_total) + "," + std::to_string(report.strong_survived) + "," +
           std::to_string(report.weak_survived) + "," + format_optional(report.strong_rate) + "," +
           format_optional(report.weak_rate) + "," + format_optional(report.gap()) + "\n";
  return out;
}

std::string survival_to_json(const SurvivalReport& report) {
  using nlohmann::ordered_json;
  const auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json root;
  root["network"] = to_string(report.network);
  root["threshold"] = report.threshold;
  auto semesters = ordered_json::array();
  for (const auto& row : report.semesters) {
    ordered_json entry = {{"semester", row.semester},
                          {"edges", row.edges},
                          {"strong", row.strong},
                          {"weak", row.weak},
                          {"unclassified", row.unclassified},
                          {"strong_fraction", opt(row.strong_fraction)}};
    if (row.has_next) {
      entry["strong_survived"] = row.strong_survived;
      entry["weak_survived"] = row.weak_survived;
      entry["strong_rate"] = opt(row.strong_rate);
      entry["weak_rate"] = opt(row.weak_rate);
    }
    entry["aged_edges"] = row.aged_edges;
    entry["aged_strong"] = row.aged_strong;
    entry["aged_strong_fraction"] = opt(row.aged_strong_fraction);
    semesters.push_back(std::move(entry));
  }
  root["semesters"] = std::move(semesters);
  root["pooled"] = {{"strong_total", report.strong_total},
                    {"strong_survived", report.strong_survived},
                    {"weak_total", report.weak_total},
                    {"weak_survived", report.weak_survived},
                    {"strong_rate", opt(report.strong_rate)},
                    {"weak_rate", opt(report.weak_rate)},
                    {"gap", opt(report.gap())}};
  return root.dump(2) + "\n";
}

}  // namespace prefnet
