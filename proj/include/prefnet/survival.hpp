#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefnet/graph.hpp"
#include "prefnet/ingest.hpp"

namespace prefnet {

inline constexpr double kDefaultStrongThreshold = 0.75;

/// Share of attributes on which u and v hold the same value, over the
/// attributes both have. Throws Error(domain) when none are comparable.
double agreement_fraction(const Snapshot& snapshot, NodeIndex u, NodeIndex v);

struct SemesterSurvival {
  int semester = 0;
  std::size_t edges = 0;
  std::size_t strong = 0;
  std::size_t weak = 0;
  std::size_t unclassified = 0;  // no comparable attributes
  std::optional<double> strong_fraction;

  // Survival into the next semester; absent for the last one.
  bool has_next = false;
  std::size_t strong_survived = 0;
  std::size_t weak_survived = 0;
  std::optional<double> strong_rate;
  std::optional<double> weak_rate;

  // Edges also present in the previous semester.
  std::size_t aged_edges = 0;
  std::size_t aged_strong = 0;
  std::optional<double> aged_strong_fraction;
};

struct SurvivalReport {
  NetworkKind network = NetworkKind::behavioral;
  double threshold = kDefaultStrongThreshold;
  std::vector<SemesterSurvival> semesters;

  // Totals over every semester transition.
  std::size_t strong_total = 0;
  std::size_t strong_survived = 0;
  std::size_t weak_total = 0;
  std::size_t weak_survived = 0;
  std::optional<double> strong_rate;
  std::optional<double> weak_rate;

  /// Pooled strong minus weak survival, when both are defined.
  std::optional<double> gap() const;
};

/// Strong edges agree on more than `threshold` of their attributes.
SurvivalReport survival_rates(std::span<const Snapshot> snapshots, NetworkKind kind,
                              double threshold = kDefaultStrongThreshold);

std::vector<SurvivalReport> sweep_threshold(std::span<const Snapshot> snapshots, NetworkKind kind,
                                            std::span<const double> grid);

/// Parses "a:b:step" into an inclusive grid.
std::vector<double> parse_grid(std::string_view text);

std::string survival_to_csv(const SurvivalReport& report);
std::string sweep_to_csv(const std::vector<SurvivalReport>& reports);
std::string survival_to_json(const SurvivalReport& report);

}  // namespace prefnet
