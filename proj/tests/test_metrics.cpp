#include <algorithm>
#include <random>

#include "doctest.h"
#include "hexatm/metrics.hpp"

using namespace hexatm;

namespace {

const AirspaceConfig kAir{};

// Collinear corner-to-corner mission across the centre.
const Mission kAcross{0, CellId{7}, CellId{13}};

AircraftResult flown(int id, const Mission& m, double extra, bool finished = true) {
  AircraftResult a;
  a.id = id;
  a.mission = m;
  a.finished = finished;
  a.flown_distance_m = distance(centroid(m.origin, kAir), centroid(m.destination, kAir)) + extra;
  return a;
}

ScenarioResult with_extras(std::vector<double> extras, Mode mode = Mode::StrategicU) {
  ScenarioResult r;
  r.mode = mode;
  for (std::size_t i = 0; i < extras.size(); ++i) r.aircraft.push_back(flown(static_cast<int>(i), kAcross, extras[i]));
  r.actual_hmd_m = 2000.0;
  return r;
}

EngineConfig strategic() {
  EngineConfig ec;
  ec.mode = Mode::StrategicU;
  return ec;
}

}  // namespace

TEST_CASE("extra distance of a collinear strategic flight") {
  REQUIRE(hex_distance(kAcross.origin, kAcross.destination, kAir) == 4);
  ScenarioConfig sc;
  sc.missions = {kAcross};
  const auto r = run_scenario(sc, strategic());
  REQUIRE(r.aircraft[0].finished);
  CHECK(r.aircraft[0].plan_legs == 4);
  CHECK(std::abs(extra_distance(r.aircraft[0], kAir)) <= 1.0);
}

TEST_CASE("one extra leg costs one leg length") {
  // find a second mission that pushes the collinear flight onto a five-leg plan
  bool found = false;
  for (const auto& m : valid_missions(kAir)) {
    if (m.origin == kAcross.origin) continue;
    ScenarioConfig sc;
    sc.missions = {kAcross, Mission{1, m.origin, m.destination}};
    const auto r = run_scenario(sc, strategic());
    if (r.aircraft[0].plan_legs != 5) continue;
    REQUIRE(r.aircraft[0].finished);
    CHECK(extra_distance(r.aircraft[0], kAir) == doctest::Approx(4000.0).epsilon(0.01));
    found = true;
    break;
  }
  CHECK(found);
}

TEST_CASE("equity_std closed form") {
  const auto r = with_extras({0, 0, 0, 4000});
  REQUIRE(equity_std(r, kAir));
  CHECK(*equity_std(r, kAir) == doctest::Approx(2000.0));
  CHECK(*mean_extra_distance(r, kAir) == doctest::Approx(1000.0));

  CHECK(*equity_std(with_extras({500, 500, 500, 500}), kAir) == doctest::Approx(0.0).epsilon(1e-9));

  // 1, 2, 3, 4: variance 5/3
  CHECK(*equity_std(with_extras({1, 2, 3, 4}), kAir) == doctest::Approx(std::sqrt(5.0 / 3.0)));

  std::vector<double> xs{120, 4000, 37, 980};
  const double base = *equity_std(with_extras(xs), kAir);
  std::sort(xs.begin(), xs.end());
  do {
    CHECK(*equity_std(with_extras(xs), kAir) == doctest::Approx(base));
  } while (std::next_permutation(xs.begin(), xs.end()));
}

TEST_CASE("equity_std needs two finished aircraft") {
  auto r = with_extras({0, 4000});
  r.aircraft[1].finished = false;
  CHECK_FALSE(equity_std(r, kAir));
  REQUIRE(mean_extra_distance(r, kAir));
  CHECK(*mean_extra_distance(r, kAir) == doctest::Approx(0.0));
  r.aircraft[0].finished = false;
  CHECK_FALSE(mean_extra_distance(r, kAir));
}

TEST_CASE("aggregate rates") {
  std::vector<ScenarioResult> one{with_extras({0, 0, 0, 0})};
  const auto quiet = aggregate(one, kAir);
  CHECK(quiet.scenario_count == 1);
  CHECK(quiet.rate_hmd_violation == 0.0);
  CHECK(quiet.rate_astm_los == 0.0);
  CHECK(quiet.rate_excursion == 0.0);
  CHECK(quiet.rate_timeout == 0.0);

  auto bad = with_extras({0, 0, 0, 0});
  bad.events.hmd_violation = true;
  bad.actual_hmd_m = 900.0;
  one.push_back(bad);
  const auto two = aggregate(one, kAir);
  CHECK(two.rate_hmd_violation == 0.5);
  CHECK(*two.min_actual_hmd_m == 900.0);
  CHECK(*two.mean_actual_hmd_m == doctest::Approx(1450.0));
  std::uint64_t total = two.hmd_undefined;
  for (const auto& b : two.hmd_histogram) total += b.count;
  CHECK(total == two.scenario_count);
  CHECK(two.hmd_histogram.size() == 41);  // [0, 2050)
  CHECK(two.hmd_histogram[18].count == 1);
  CHECK(two.hmd_histogram[40].count == 1);
}

TEST_CASE("aggregate rejects empty and mixed input") {
  std::vector<ScenarioResult> none;
  CHECK_THROWS_AS(aggregate(none, kAir), std::domain_error);
  std::vector<ScenarioResult> mixed{with_extras({0, 0}), with_extras({0, 0}, Mode::DaaU)};
  CHECK_THROWS_AS(aggregate(mixed, kAir), std::invalid_argument);
  Aggregator a(kAir, 50.0);
  const Aggregator b(kAir, 25.0);
  CHECK_THROWS_AS(a.merge(b), std::invalid_argument);
}

TEST_CASE("merging partitions equals aggregating the whole") {
  EngineConfig ec;
  ec.mode = Mode::DaaU;
  const auto pool = sample(gen_unperturbed(kAir), 40, 7);
  std::vector<ScenarioResult> results;
  for (const auto& sc : pool) results.push_back(run_scenario(sc, ec));
  // unfinished aircraft and a missing HMD exercise the edge paths
  results.back().actual_hmd_m.reset();

  const auto whole = aggregate(results, kAir);
  CHECK(*whole.min_actual_hmd_m <= *whole.mean_actual_hmd_m);
  CHECK(whole.rate_astm_los <= whole.rate_hmd_violation);
  CHECK(whole.hmd_undefined == 1);
  const std::string expected = to_json(whole).dump();

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto order = results;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t parts = 1 + rng() % 6;
    std::vector<Aggregator> aggs(parts, Aggregator(kAir));
    for (const auto& r : order) aggs[rng() % parts].add(r);
    Aggregator total(kAir);
    for (std::size_t i = parts; i-- > 0;) total.merge(aggs[i]);
    CHECK(to_json(total.stats()).dump() == expected);
  }
}

TEST_CASE("summary json carries every field") {
  std::vector<ScenarioResult> one{with_extras({0, 4000})};
  one[0].actual_hmd_m.reset();
  const auto j = to_json(aggregate(one, kAir));
  for (const char* key : {"scenario_count", "mean_actual_hmd_m", "min_actual_hmd_m", "rate_hmd_violation",
                          "rate_astm_los", "rate_excursion", "rate_timeout", "mean_extra_distance_m",
                          "mean_equity_std_m", "hmd_histogram"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["mean_actual_hmd_m"].is_null());
  REQUIRE(j["hmd_histogram"].size() == 1);
  CHECK(j["hmd_histogram"][0]["bin_low_m"].is_null());
  CHECK(j["hmd_histogram"][0]["count"] == 1);
  CHECK(j["mean_equity_std_m"].get<double>() == doctest::Approx(std::sqrt(8e6)));
}
