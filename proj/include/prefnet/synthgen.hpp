#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace prefnet {

struct AttributeSpec {
  std::string name;
  std::vector<std::string> values;
  std::vector<double> distribution;
  /// affinity[own][other] >= 0; multiplies the formation weight of a dyad.
  std::vector<std::vector<double>> affinity;
  /// Recorded in the first survey only.
  bool surveyed_once = false;
};

/// Dissolution of existing ties between semesters. A tie is strong when its
/// endpoints agree on more than `threshold` of their attributes.
struct DissolutionModel {
  double threshold = 0.75;
  double strong_rate = 0.20;
  double weak_rate = 0.56;
  /// Share of dissolutions that keep the tie at reduced volume.
  double decay_share = 0.5;
  /// Volume multiplier applied to decayed ties.
  double decay_factor = 0.1;
};

/// Per tie per semester: calls ~ Poisson(calls * s), texts ~ Poisson(texts * s)
/// with tie strength s ~ LogNormal(0, strength_sigma) floored at 0.5.
struct VolumeModel {
  double calls = 5.0;
  double texts = 50.0;
  double strength_sigma = 0.3;
};

struct GenConfig {
  std::size_t nodes = 200;
  int semesters = 4;
  std::uint64_t seed = 7;
  std::vector<AttributeSpec> attributes;
  /// Expected degree of the first-semester tie graph.
  double mean_degree = 8.0;
  /// Per-dyad formation probability is
  /// min(1, formation_rate * affinity(u,v) * closure(cn)) with
  /// closure(cn) = cn^closure_exponent for cn >= 1 and distant_weight otherwise.
  double formation_rate = 0.002;
  double closure_exponent = 2.0;
  double distant_weight = 0.05;
  DissolutionModel dissolution;
  VolumeModel volume;
  /// Chance that a participant lists a given tie as a top contact.
  double nomination_prob = 0.5;
  int start_year = 2011;
};

/// NetSense-shaped defaults: 200 nodes, four semesters, mild homophily.
GenConfig default_gen_config();

void validate(const GenConfig& config);
GenConfig gen_config_from_json(std::string_view text);
std::string gen_config_to_json(const GenConfig& config);

/// Planted affinity of a dyad: product over attributes of
/// affinity[a][u][v] * affinity[a][v][u].
double dyad_affinity(const GenConfig& config, const std::vector<std::size_t>& u_values,
                     const std::vector<std::size_t>& v_values);

enum class TieOutcome { initial, formed, survived, decayed, removed };

std::string_view to_string(TieOutcome outcome);

struct LedgerEntry {
  int semester = 0;  // semester in which the outcome is observed
  std::string u;
  std::string v;
  TieOutcome outcome = TieOutcome::initial;
  double affinity = 0.0;
  double agreement = 0.0;
  bool strong = false;
};

struct GeneratedData {
  std::string schema_json;
  std::string events_csv;
  std::string nominations_csv;
  std::string attributes_csv;
  std::string ledger_json;
  std::vector<LedgerEntry> ledger;
};

GeneratedData generate(const GenConfig& config);

/// Writes schema.json, events.csv, nominations.csv, attributes.csv and ledger.json.
std::vector<std::filesystem::path> write_generated(const GeneratedData& data,
                                                   const std::filesystem::path& dir);

}  // namespace prefnet
