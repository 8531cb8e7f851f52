#include "hexatm/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace hexatm {

namespace {

constexpr const char* kHeader = "scenario_id,o0,d0,o1,d1,o2,d2,o3,d3,intruder_idx,intruder_entry_s";

template <typename T>
T parse_number(const std::string& field, std::size_t line) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError("line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return value;
}

}  // namespace

const char* to_string(ScenarioSet s) { return s == ScenarioSet::Unperturbed ? "unperturbed" : "recovery"; }

std::optional<ScenarioSet> parse_scenario_set(const std::string& s) {
  if (s == "unperturbed") return ScenarioSet::Unperturbed;
  if (s == "recovery") return ScenarioSet::Recovery;
  return std::nullopt;
}

const char* rule_name(ScenarioSet s) {
  return s == ScenarioSet::Unperturbed ? "distinct-origin-4-sets" : "unperturbed-x-intruder-role";
}

std::vector<Mission> valid_missions(const AirspaceConfig& cfg, int min_distance) {
  std::vector<Mission> out;
  const auto ring = outer_ring(cfg);
  for (CellId o : ring) {
    for (CellId d : ring) {
      if (hex_distance(o, d, cfg) >= min_distance) out.push_back({0, o, d});
    }
  }
  return out;
}

std::vector<ScenarioConfig> gen_unperturbed(const AirspaceConfig& cfg) {
  cfg.validate();
  const auto ring = outer_ring(cfg);
  const auto missions = valid_missions(cfg);
  std::vector<std::vector<CellId>> dests(cfg.cell_count());
  for (const auto& m : missions) dests[m.origin.index].push_back(m.destination);

  // Origins with at least one destination, ascending.
  std::vector<CellId> origins;
  for (CellId c : ring) {
    if (!dests[c.index].empty()) origins.push_back(c);
  }

  std::vector<ScenarioConfig> out;
  std::uint64_t id = 0;
  const std::size_t n = origins.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        for (std::size_t d = c + 1; d < n; ++d) {
          const std::array<CellId, 4> o{origins[a], origins[b], origins[c], origins[d]};
          for (CellId d0 : dests[o[0].index]) {
            for (CellId d1 : dests[o[1].index]) {
              for (CellId d2 : dests[o[2].index]) {
                for (CellId d3 : dests[o[3].index]) {
                  ScenarioConfig sc;
                  sc.scenario_id = id++;
                  sc.missions = {{0, o[0], d0}, {1, o[1], d1}, {2, o[2], d2}, {3, o[3], d3}};
                  out.push_back(std::move(sc));
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<ScenarioConfig> gen_recovery(const AirspaceConfig& cfg, double entry_s) {
  const auto base = gen_unperturbed(cfg);
  std::vector<ScenarioConfig> out;
  out.reserve(base.size() * 4);
  for (const auto& sc : base) {
    for (int k = 0; k < 4; ++k) {
      ScenarioConfig r = sc;
      r.scenario_id = sc.scenario_id * 4 + static_cast<std::uint64_t>(k);
      r.intruder_index = k;
      r.intruder_entry_s = entry_s;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<ScenarioConfig> generate(ScenarioSet set, const AirspaceConfig& cfg) {
  return set == ScenarioSet::Unperturbed ? gen_unperturbed(cfg) : gen_recovery(cfg);
}

std::vector<ScenarioConfig> sample(const std::vector<ScenarioConfig>& all, std::size_t k, std::uint64_t seed) {
  if (k > all.size()) throw std::domain_error("sample larger than the scenario set");
  if (k == all.size()) return all;
  std::mt19937_64 rng(seed);
  std::vector<ScenarioConfig> out;
  out.reserve(k);
  const std::size_t n = all.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t lo = i * n / k;
    const std::size_t hi = (i + 1) * n / k;
    out.push_back(all[lo + rng() % (hi - lo)]);
  }
  return out;
}

void validate_scenario(const ScenarioConfig& sc, const AirspaceConfig& cfg, std::size_t aircraft) {
  const std::string where = "scenario " + std::to_string(sc.scenario_id) + ": ";
  if (sc.missions.size() != aircraft) throw DataError(where + "expected " + std::to_string(aircraft) + " missions");
  std::set<CellId> origins;
  for (std::size_t i = 0; i < sc.missions.size(); ++i) {
    const auto& m = sc.missions[i];
    if (m.id != static_cast<int>(i)) throw DataError(where + "mission ids out of order");
    if (!is_valid(m.origin, cfg) || !is_valid(m.destination, cfg)) throw DataError(where + "cell outside airspace");
    if (!is_outer(m.origin, cfg) || !is_outer(m.destination, cfg)) throw DataError(where + "endpoint not on outer ring");
    if (hex_distance(m.origin, m.destination, cfg) < kMinMissionDistance) throw DataError(where + "mission too short");
    if (!origins.insert(m.origin).second) throw DataError(where + "duplicate origin");
  }
  if (sc.intruder_index < -1 || sc.intruder_index >= static_cast<int>(aircraft)) {
    throw DataError(where + "bad intruder index");
  }
  if (sc.has_intruder() && !(sc.intruder_entry_s >= 0.0)) throw DataError(where + "bad intruder entry time");
}

ScenarioConfig canonicalize(const ScenarioConfig& sc) {
  ScenarioConfig out = sc;
  std::vector<std::size_t> order(sc.missions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ma = sc.missions[a];
    const auto& mb = sc.missions[b];
    return ma.origin != mb.origin ? ma.origin < mb.origin : ma.destination < mb.destination;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.missions[i] = sc.missions[order[i]];
    out.missions[i].id = static_cast<int>(i);
    if (sc.has_intruder() && static_cast<int>(order[i]) == sc.intruder_index) out.intruder_index = static_cast<int>(i);
  }
  return out;
}

void write_scenarios_csv(std::ostream& out, const std::vector<ScenarioConfig>& scenarios) {
  out << kHeader << '\n';
  for (const auto& sc : scenarios) {
    out << sc.scenario_id;
    for (const auto& m : sc.missions) out << ',' << m.origin.index << ',' << m.destination.index;
    out << ',' << sc.intruder_index << ',' << sc.intruder_entry_s << '\n';
  }
}

std::vector<ScenarioConfig> read_scenarios_csv(std::istream& in, const AirspaceConfig& cfg) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty scenario file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw DataError("unexpected scenario file header");
  std::vector<ScenarioConfig> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 11) throw DataError("line " + std::to_string(lineno) + ": expected 11 fields");
    ScenarioConfig sc;
    sc.scenario_id = parse_number<std::uint64_t>(fields[0], lineno);
    for (int k = 0; k < 4; ++k) {
      sc.missions.push_back({k, CellId{parse_number<std::uint32_t>(fields[1 + 2 * k], lineno)},
                             CellId{parse_number<std::uint32_t>(fields[2 + 2 * k], lineno)}});
    }
    sc.intruder_index = parse_number<int>(fields[9], lineno);
    sc.intruder_entry_s = parse_number<double>(fields[10], lineno);
    validate_scenario(sc, cfg);
    out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace hexatm
