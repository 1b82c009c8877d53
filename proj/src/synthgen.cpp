#include "prefnet/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <type_traits>

#include <json.hpp>

#include "prefnet/error.hpp"
#include "util.hpp"

namespace prefnet {

using ordered_json = nlohmann::ordered_json;

namespace {

AttributeSpec homophilous(std::string name, std::vector<std::string> values, std::vector<double> distribution,
                          double homophily, bool surveyed_once = false) {
  AttributeSpec spec;
  spec.name = std::move(name);
  spec.values = std::move(values);
  spec.distribution = std::move(distribution);
  const auto k = spec.values.size();
  spec.affinity.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) spec.affinity[i][i] = homophily;
  spec.surveyed_once = surveyed_once;
  return spec;
}

}  // namespace

GenConfig default_gen_config() {
  GenConfig config;
  config.attributes = {
      homophilous("political_views", {"conservative", "moderate", "liberal"}, {0.25, 0.40, 0.35}, 1.3),
      homophilous("religion", {"none", "catholic", "protestant", "other"}, {0.25, 0.40, 0.20, 0.15}, 1.2),
      homophilous("parental_income", {"low", "middle", "high", "very_high"}, {0.15, 0.35, 0.30, 0.20}, 1.2, true),
      homophilous("gender", {"female", "male"}, {0.55, 0.45}, 1.4),
      homophilous("race", {"white", "asian", "hispanic", "black", "other"}, {0.60, 0.15, 0.10, 0.08, 0.07}, 1.3),
      homophilous("hometown", {"rural", "town", "city"}, {0.25, 0.40, 0.35}, 1.1),
      homophilous("major", {"stem", "business", "humanities", "arts"}, {0.40, 0.25, 0.20, 0.15}, 1.2),
      homophilous("smoking", {"no", "yes"}, {0.90, 0.10}, 1.5),
      homophilous("drinking", {"never", "sometimes", "often"}, {0.30, 0.50, 0.20}, 1.3),
      homophilous("exercise", {"rarely", "weekly", "daily"}, {0.30, 0.45, 0.25}, 1.1),
  };
  return config;
}

void validate(const GenConfig& config) {
  const auto fail = [](const std::string& message) { throw Error(ErrorKind::validation, "generator config: " + message); };
  const auto rate = [&](double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
  };
  const auto non_negative = [&](double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) fail(std::string(name) + " must be finite and non-negative");
  };
  if (config.nodes < 2) fail("need at least two nodes");
  if (config.semesters < 1) fail("need at least one semester");
  if (config.attributes.empty()) fail("need at least one attribute");
  std::set<std::string> names;
  for (const auto& a : config.attributes) {
    if (a.name.empty() || a.name == "calendar") fail("invalid attribute name '" + a.name + "'");
    if (!names.insert(a.name).second) fail("attribute '" + a.name + "' is defined twice");
    const auto k = a.values.size();
    if (k < 2) fail("attribute '" + a.name + "' needs at least two values");
    if (std::set<std::string>(a.values.begin(), a.values.end()).size() != k)
      fail("attribute '" + a.name + "' repeats a value");
    if (a.distribution.size() != k) fail("distribution of '" + a.name + "' has the wrong length");
    double total = 0.0;
    for (const double p : a.distribution) {
      non_negative(p, "distribution entries");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) fail("distribution of '" + a.name + "' does not sum to 1");
    if (a.affinity.size() != k) fail("affinity of '" + a.name + "' must be a square matrix over its values");
    for (const auto& row : a.affinity) {
      if (row.size() != k) fail("affinity of '" + a.name + "' must be a square matrix over its values");
      for (const double x : row) non_negative(x, "affinity entries");
    }
  }
  if (!(config.mean_degree > 0.0)) fail("mean_degree must be positive");
  if (config.mean_degree > static_cast<double>(config.nodes - 1))
    fail("expected degree " + detail::format_double(config.mean_degree) + " exceeds n - 1 = " +
         std::to_string(config.nodes - 1));
  non_negative(config.formation_rate, "formation_rate");
  non_negative(config.closure_exponent, "closure_exponent");
  non_negative(config.distant_weight, "distant_weight");
  rate(config.dissolution.threshold, "dissolution.threshold");
  rate(config.dissolution.strong_rate, "dissolution.strong_rate");
  rate(config.dissolution.weak_rate, "dissolution.weak_rate");
  rate(config.dissolution.decay_share, "dissolution.decay_share");
  rate(config.dissolution.decay_factor, "dissolution.decay_factor");
  non_negative(config.volume.calls, "volume.calls");
  non_negative(config.volume.texts, "volume.texts");
  non_negative(config.volume.strength_sigma, "volume.strength_sigma");
  if (!(config.volume.calls + config.volume.texts > 0.0)) fail("volume.calls + volume.texts must be positive");
  rate(config.nomination_prob, "nomination_prob");
  if (config.start_year < 1971 || config.start_year > 9000) fail("start_year out of range");
}

namespace {

template <typename T>
void read(const ordered_json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  const auto& value = j.at(key);
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>)
    if (!value.is_number_unsigned())
      throw Error(ErrorKind::validation, std::string("generator config: '") + key + "' must be a non-negative integer");
  target = value.get<T>();
}

AttributeSpec attribute_from_json(const ordered_json& j) {
  AttributeSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.values = j.at("values").get<std::vector<std::string>>();
  const auto k = spec.values.size();
  if (j.contains("distribution"))
    spec.distribution = j.at("distribution").get<std::vector<double>>();
  else
    spec.distribution.assign(k, k ? 1.0 / static_cast<double>(k) : 0.0);
  if (j.contains("affinity") && j.contains("homophily"))
    throw Error(ErrorKind::validation, "attribute '" + spec.name + "': give either affinity or homophily");
  if (j.contains("affinity")) {
    spec.affinity = j.at("affinity").get<std::vector<std::vector<double>>>();
  } else {
    const double h = j.value("homophily", 1.0);
    spec.affinity.assign(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i) spec.affinity[i][i] = h;
  }
  read(j, "surveyed_once", spec.surveyed_once);
  return spec;
}

}  // namespace

GenConfig gen_config_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("generator config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::parse, "generator config must be a JSON object");
  static const std::set<std::string> known = {"nodes", "semesters", "seed", "attributes", "mean_degree",
                                              "formation_rate", "closure_exponent", "distant_weight", "dissolution",
                                              "volume", "nomination_prob", "start_year"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw Error(ErrorKind::validation, "generator config: unknown key '" + key + "'");
  auto config = default_gen_config();
  try {
    read(j, "nodes", config.nodes);
    read(j, "semesters", config.semesters);
    read(j, "seed", config.seed);
    if (j.contains("attributes")) {
      config.attributes.clear();
      for (const auto& a : j.at("attributes")) config.attributes.push_back(attribute_from_json(a));
    }
    read(j, "mean_degree", config.mean_degree);
    read(j, "formation_rate", config.formation_rate);
    read(j, "closure_exponent", config.closure_exponent);
    read(j, "distant_weight", config.distant_weight);
    if (j.contains("dissolution")) {
      const auto& d = j.at("dissolution");
      read(d, "threshold", config.dissolution.threshold);
      read(d, "strong_rate", config.dissolution.strong_rate);
      read(d, "weak_rate", config.dissolution.weak_rate);
      read(d, "decay_share", config.dissolution.decay_share);
      read(d, "decay_factor", config.dissolution.decay_factor);
    }
    if (j.contains("volume")) {
      const auto& v = j.at("volume");
      read(v, "calls", config.volume.calls);
      read(v, "texts", config.volume.texts);
      read(v, "strength_sigma", config.volume.strength_sigma);
    }
    read(j, "nomination_prob", config.nomination_prob);
    read(j, "start_year", config.start_year);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("generator config: ") + e.what());
  }
  validate(config);
  return config;
}

std::string gen_config_to_json(const GenConfig& config) {
  ordered_json j;
  j["nodes"] = config.nodes;
  j["semesters"] = config.semesters;
  j["seed"] = config.seed;
  auto attributes = ordered_json::array();
  for (const auto& a : config.attributes)
    attributes.push_back({{"name", a.name},
                          {"values", a.values},
                          {"distribution", a.distribution},
                          {"affinity", a.affinity},
                          {"surveyed_once", a.surveyed_once}});
  j["attributes"] = std::move(attributes);
  j["mean_degree"] = config.mean_degree;
  j["formation_rate"] = config.formation_rate;
  j["closure_exponent"] = config.closure_exponent;
  j["distant_weight"] = config.distant_weight;
  j["dissolution"] = {{"threshold", config.dissolution.threshold},
                      {"strong_rate", config.dissolution.strong_rate},
                      {"weak_rate", config.dissolution.weak_rate},
                      {"decay_share", config.dissolution.decay_share},
                      {"decay_factor", config.dissolution.decay_factor}};
  j["volume"] = {{"calls", config.volume.calls},
                 {"texts", config.volume.texts},
                 {"strength_sigma", config.volume.strength_sigma}};
  j["nomination_prob"] = config.nomination_prob;
  j["start_year"] = config.start_year;
  return j.dump(2) + "\n";
}

double dyad_affinity(const GenConfig& config, const std::vector<std::size_t>& u_values,
                     const std::vector<std::size_t>& v_values) {
  double phi = 1.0;
  for (std::size_t a = 0; a < config.attributes.size(); ++a) {
    const auto& m = config.attributes[a].affinity;
    phi *= m.at(u_values.at(a)).at(v_values.at(a)) * m.at(v_values.at(a)).at(u_values.at(a));
  }
  return phi;
}

std::string_view to_string(TieOutcome outcome) {
  switch (outcome) {
    case TieOutcome::initial: return "initial";
    case TieOutcome::formed: return "formed";
    case TieOutcome::survived: return "survived";
    case TieOutcome::decayed: return "decayed";
    case TieOutcome::removed: return "removed";
  }
  return "unknown";
}

namespace {

struct Window {
  std::int64_t start = 0;
  std::int64_t end = 0;
};

std::int64_t epoch_seconds(int year, unsigned month) {
  using namespace std::chrono;
  const sys_days day{std::chrono::year{year} / std::chrono::month{month} / 1};
  return duration_cast<seconds>(day.time_since_epoch()).count();
}

/// Fall runs Aug 1 to Jan 1, spring Jan 1 to Jun 1; no summer semester.
std::vector<Window> calendar(int start_year, int semesters) {
  std::vector<Window> windows;
  for (int s = 0; s < semesters; ++s) {
    const int year = start_year + (s + 1) / 2;
    if (s % 2 == 0)
      windows.push_back({epoch_seconds(year, 8), epoch_seconds(year + 1, 1)});
    else
      windows.push_back({epoch_seconds(year, 1), epoch_seconds(year, 6)});
  }
  return windows;
}

struct Tie {
  double strength = 1.0;  // persistent tie strength
  double scale = 1.0;     // cumulative decay
};

using Bits = std::vector<std::uint64_t>;

std::size_t shared(const Bits& a, const Bits& b) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return count;
}

struct Event {
  std::int64_t timestamp;
  std::size_t sender;
  std::size_t receiver;
  bool call;
  std::int64_t duration;
  auto operator<=>(const Event&) const = default;
};

}  // namespace

GeneratedData generate(const GenConfig& config) {
  validate(config);
  const auto n = config.nodes;
  const auto attributes = config.attributes.size();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto width = std::to_string(n).size();
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto digits = std::to_string(i + 1);
    ids[i] = "n" + std::string(width - digits.size(), '0') + digits;
  }

  std::vector<std::vector<std::size_t>> values(n, std::vector<std::size_t>(attributes));
  for (std::size_t a = 0; a < attributes; ++a) {
    std::discrete_distribution<std::size_t> draw(config.attributes[a].distribution.begin(),
                                                 config.attributes[a].distribution.end());
    for (std::size_t i = 0; i < n; ++i) values[i][a] = draw(rng);
  }

  // Pair (u < v) index: affinity and agreement are static.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<double> phi(pairs.size());
  std::vector<double> agree(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [u, v] = pairs[p];
    phi[p] = dyad_affinity(config, values[u], values[v]);
    std::size_t equal = 0;
    for (std::size_t a = 0; a < attributes; ++a) equal += values[u][a] == values[v][a];
    agree[p] = static_cast<double>(equal) / static_cast<double>(attributes);
  }

  // Scale the first-semester tie probabilities to the requested mean degree.
  const double target = config.mean_degree * static_cast<double>(n) / 2.0;
  const auto expected = [&](double c) {
    double total = 0.0;
    for (const double f : phi) total += std::min(1.0, c * f);
    return total;
  };
  const auto positive_pairs = static_cast<double>(std::count_if(phi.begin(), phi.end(), [](double f) { return f > 0.0; }));
  if (positive_pairs < target)
    throw Error(ErrorKind::validation, "generator config: affinities allow fewer ties than the requested mean degree");
  double lo = 0.0;
  double hi = 1.0;
  while (expected(hi) < target) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = (lo + hi) / 2.0;
    (expected(mid) < target ? lo : hi) = mid;
  }
  const double c0 = hi;

  std::lognormal_distribution<double> strength_draw(0.0, config.volume.strength_sigma);
  const auto new_strength = [&] { return std::max(0.5, strength_draw(rng)); };

  GeneratedData data;
  const auto record = [&](int semester, std::size_t p, TieOutcome outcome) {
    data.ledger.push_back({semester, ids[pairs[p].first], ids[pairs[p].second], outcome, phi[p], agree[p],
                           agree[p] > config.dissolution.threshold});
  };

  std::vector<std::map<std::size_t, Tie>> ties(static_cast<std::size_t>(config.semesters));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (unit(rng) < std::min(1.0, c0 * phi[p])) {
      ties[0][p] = {new_strength(), 1.0};
      record(1, p, TieOutcome::initial);
    }
  }

  const auto words = (n + 63) / 64;
  for (int s = 1; s < config.semesters; ++s) {
    const auto& before = ties[static_cast<std::size_t>(s - 1)];
    auto& after = ties[static_cast<std::size_t>(s)];
    const int semester = s + 1;
    for (const auto& [p, tie] : before) {
      const bool strong = agree[p] > config.dissolution.threshold;
      const double rate = strong ? config.dissolution.strong_rate : config.dissolution.weak_rate;
      if (unit(rng) >= rate) {
        after[p] = tie;
        record(semester, p, TieOutcome::survived);
      } else if (unit(rng) < config.dissolution.decay_share) {
        after[p] = {tie.strength, tie.scale * config.dissolution.decay_factor};
        record(semester, p, TieOutcome::decayed);
      } else {
        record(semester, p, TieOutcome::removed);
      }
    }
    std::vector<Bits> adjacency(n, Bits(words, 0));
    for (const auto& [p, tie] : before) {
      const auto [u, v] = pairs[p];
      adjacency[u][v / 64] |= std::uint64_t{1} << (v % 64);
      adjacency[v][u / 64] |= std::uint64_t{1} << (u % 64);
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (before.contains(p)) continue;
      const auto [u, v] = pairs[p];
      const auto cn = shared(adjacency[u], adjacency[v]);
      const double closure =
          cn >= 1 ? std::pow(static_cast<double>(cn), config.closure_exponent) : config.distant_weight;
      if (unit(rng) < std::min(1.0, config.formation_rate * phi[p] * closure)) {
        after[p] = {new_strength(), 1.0};
        record(semester, p, TieOutcome::formed);
      }
    }
  }

  const auto windows = calendar(config.start_year, config.semesters);

  // Communication events.
  std::vector<Event> events;
  for (int s = 0; s < config.semesters; ++s) {
    const auto& window = windows[static_cast<std::size_t>(s)];
    std::uniform_int_distribution<std::int64_t> when(window.start, window.end - 1);
    for (const auto& [p, tie] : ties[static_cast<std::size_t>(s)]) {
      const double level = tie.strength * tie.scale;
      std::poisson_distribution<long> call_draw(config.volume.calls * level);
      std::poisson_distribution<long> text_draw(config.volume.texts * level);
      long calls = config.volume.calls > 0.0 ? call_draw(rng) : 0;
      long texts = config.volume.texts > 0.0 ? text_draw(rng) : 0;
      if (calls + texts == 0) (config.volume.texts > 0.0 ? texts : calls) = 1;
      const auto [u, v] = pairs[p];
      const auto emit = [&](bool call) {
        const bool forward = unit(rng) < 0.5;
        const std::int64_t duration = call ? std::uniform_int_distribution<std::int64_t>(10, 1800)(rng)
                                           : std::uniform_int_distribution<std::int64_t>(1, 160)(rng);
        events.push_back({when(rng), forward ? u : v, forward ? v : u, call, duration});
      };
      for (long i = 0; i < calls; ++i) emit(true);
      for (long i = 0; i < texts; ++i) emit(false);
    }
  }
  std::sort(events.begin(), events.end());
  data.events_csv = "timestamp,sender,receiver,kind,duration\n";
  for (const auto& e : events)
    data.events_csv += std::to_string(e.timestamp) + "," + ids[e.sender] + "," + ids[e.receiver] + "," +
                       (e.call ? "call" : "text") + "," + std::to_string(e.duration) + "\n";

  // Nominations: strongest ties first, each listed with nomination_prob, at most 20.
  data.nominations_csv = "semester,ego,alter\n";
  for (int s = 0; s < config.semesters; ++s) {
    std::vector<std::vector<std::pair<double, std::size_t>>> alters(n);
    for (const auto& [p, tie] : ties[static_cast<std::size_t>(s)]) {
      const auto [u, v] = pairs[p];
      const double level = tie.strength * tie.scale;
      alters[u].emplace_back(level, v);
      alters[v].emplace_back(level, u);
    }
    for (std::size_t ego = 0; ego < n; ++ego) {
      auto& list = alters[ego];
      std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      std::size_t listed = 0;
      for (const auto& [level, alter] : list) {
        if (listed == 20) break;
        if (unit(rng) >= config.nomination_prob) continue;
        data.nominations_csv += std::to_string(s + 1) + "," + ids[ego] + "," + ids[alter] + "\n";
        ++listed;
      }
    }
  }

  data.attributes_csv = "semester,node,attribute,value\n";
  for (int s = 0; s < config.semesters; ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < attributes; ++a) {
        const auto& spec = config.attributes[a];
        if (spec.surveyed_once && s > 0) continue;
        data.attributes_csv +=
            std::to_string(s + 1) + "," + ids[i] + "," + spec.name + "," + spec.values[values[i][a]] + "\n";
      }

  ordered_json schema;
  for (const auto& spec : config.attributes) schema[spec.name] = spec.values;
  auto cal = ordered_json::array();
  for (std::size_t s = 0; s < windows.size(); ++s)
    cal.push_back({{"index", s + 1}, {"start", windows[s].start}, {"end", windows[s].end}});
  schema["calendar"] = std::move(cal);
  data.schema_json = schema.dump(2) + "\n";

  ordered_json ledger;
  ledger["seed"] = config.seed;
  ledger["threshold"] = config.dissolution.threshold;
  auto entries = ordered_json::array();
  for (const auto& e : data.ledger)
    entries.push_back({{"semester", e.semester},
                       {"u", e.u},
                       {"v", e.v},
                       {"outcome", to_string(e.outcome)},
                       {"affinity", e.affinity},
                       {"agreement", e.agreement},
                       {"strong", e.strong}});
  ledger["entries"] = std::move(entries);
  data.ledger_json = ledger.dump(1) + "\n";
  return data;
}

std::vector<std::filesystem::path> write_generated(const GeneratedData& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
  const std::vector<std::pair<std::string, const std::string*>> files = {
      {"schema.json", &data.schema_json},
      {"events.csv", &data.events_csv},
      {"nominations.csv", &data.nominations_csv},
      {"attributes.csv", &data.attributes_csv},
      {"ledger.json", &data.ledger_json}};
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const auto path = dir / name;
    detail::write_file(path, *content);
    written.push_back(path);
  }
  return written;
}

}  // namespace prefnet
