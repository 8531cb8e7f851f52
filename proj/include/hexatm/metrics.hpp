#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "hexatm/engine.hpp"

namespace hexatm {

inline constexpr double kDefaultBinWidthM = 50.0;

/// Flown distance minus the straight line between origin and destination
/// centroids. Unfinished aircraft report what they have flown so far.
double extra_distance(const AircraftResult& a, const AirspaceConfig& cfg);

/// Sample standard deviation (n - 1); empty below two values.
std::optional<double> sample_std(std::span<const double> xs);

/// Spread of extra distance among the finished aircraft of one scenario.
std::optional<double> equity_std(const ScenarioResult& r, const AirspaceConfig& cfg);
/// Mean extra distance over the finished aircraft of one scenario.
std::optional<double> mean_extra_distance(const ScenarioResult& r, const AirspaceConfig& cfg);

struct HistogramBin {
  double low_m = 0.0;
  double high_m = 0.0;
  std::uint64_t count = 0;
};

struct AggregateStats {
  Mode mode = Mode::StrategicU;
  double bin_width_m = kDefaultBinWidthM;
  std::uint64_t scenario_count = 0;
  std::optional<double> mean_actual_hmd_m;
  std::optional<double> min_actual_hmd_m;
  double rate_hmd_violation = 0.0;
  double rate_astm_los = 0.0;
  double rate_excursion = 0.0;
  double rate_timeout = 0.0;
  std::optional<double> mean_extra_distance_m;
  std::optional<double> mean_equity_std_m;
  std::vector<HistogramBin> hmd_histogram;
  std::uint64_t hmd_undefined = 0;      // scenarios where no two aircraft flew together
  std::uint64_t equity_undefined = 0;   // scenarios with fewer than two finished aircraft
  std::uint64_t unfinished_aircraft = 0;
};

/// Streaming fold over scenario results. Sums are kept in integer
/// micrometres so that merge is exactly associative and commutative.
class Aggregator {
 public:
  Aggregator(AirspaceConfig cfg, double bin_width_m = kDefaultBinWidthM);

  /// Throws std::invalid_argument when `r` comes from another mode.
  void add(const ScenarioResult& r);
  /// Throws std::invalid_argument on mismatched mode or bin width.
  void merge(const Aggregator& other);
  /// Throws std::domain_error when nothing was added.
  [[nodiscard]] AggregateStats stats() const;
  [[nodiscard]] std::uint64_t count() const { return n_; }

 private:
  struct Sum {
    std::int64_t micro = 0;
    std::uint64_t n = 0;
    void add(double x);
    void merge(const Sum& o);
    [[nodiscard]] std::optional<double> mean() const;
  };

  AirspaceConfig cfg_;
  double bin_width_m_;
  std::optional<Mode> mode_;
  std::uint64_t n_ = 0;
  std::uint64_t hmd_violation_ = 0;
  std::uint64_t astm_los_ = 0;
  std::uint64_t excursion_ = 0;
  std::uint64_t timeout_ = 0;
  std::uint64_t unfinished_ = 0;
  Sum hmd_;
  std::optional<double> min_hmd_;
  Sum extra_;
  Sum equity_;
  std::map<std::int64_t, std::uint64_t> bins_;
};

AggregateStats aggregate(std::span<const ScenarioResult> results, const AirspaceConfig& cfg,
                         double bin_width_m = kDefaultBinWidthM);

nlohmann::json to_json(const AggregateStats& s);

}  // namespace hexatm
