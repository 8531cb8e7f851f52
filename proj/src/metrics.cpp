#include "hexatm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexatm {

double extra_distance(const AircraftResult& a, const AirspaceConfig& cfg) {
  const double unimpeded = distance(centroid(a.mission.origin, cfg), centroid(a.mission.destination, cfg));
  return a.flown_distance_m - unimpeded;
}

std::optional<double> sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

namespace {

std::vector<double> finished_extras(const ScenarioResult& r, const AirspaceConfig& cfg) {
  std::vector<double> out;
  for (const auto& a : r.aircraft) {
    if (a.finished) out.push_back(extra_distance(a, cfg));
  }
  return out;
}

}  // namespace

std::optional<double> equity_std(const ScenarioResult& r, const AirspaceConfig& cfg) {
  const auto xs = finished_extras(r, cfg);
  return sample_std(xs);
}

std::optional<double> mean_extra_distance(const ScenarioResult& r, const AirspaceConfig& cfg) {
  const auto xs = finished_extras(r, cfg);
  if (xs.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

void Aggregator::Sum::add(double x) {
  micro += std::llround(x * 1e6);
  ++n;
}

void Aggregator::Sum::merge(const Sum& o) {
  micro += o.micro;
  n += o.n;
}

std::optional<double> Aggregator::Sum::mean() const {
  if (n == 0) return std::nullopt;
  return static_cast<double>(micro) / 1e6 / static_cast<double>(n);
}

Aggregator::Aggregator(AirspaceConfig cfg, double bin_width_m) : cfg_(cfg), bin_width_m_(bin_width_m) {
  if (!(bin_width_m > 0.0)) throw std::domain_error("bin width must be positive");
}

void Aggregator::add(const ScenarioResult& r) {
  if (mode_ && *mode_ != r.mode) throw std::invalid_argument("results from mixed modes");
  mode_ = r.mode;
  ++n_;
  hmd_violation_ += r.events.hmd_violation;
  astm_los_ += r.events.astm_los;
  excursion_ += r.events.excursion;
  timeout_ += r.events.timeout;
  for (const auto& a : r.aircraft) unfinished_ += !a.finished;

  if (r.actual_hmd_m) {
    hmd_.add(*r.actual_hmd_m);
    min_hmd_ = min_hmd_ ? std::min(*min_hmd_, *r.actual_hmd_m) : *r.actual_hmd_m;
    ++bins_[static_cast<std::int64_t>(std::floor(*r.actual_hmd_m / bin_width_m_))];
  }
  if (const auto e = mean_extra_distance(r, cfg_)) extra_.add(*e);
  if (const auto s = equity_std(r, cfg_)) equity_.add(*s);
}

void Aggregator::merge(const Aggregator& other) {
  if (other.bin_width_m_ != bin_width_m_) throw std::invalid_argument("bin widths differ");
  if (mode_ && other.mode_ && *mode_ != *other.mode_) throw std::invalid_argument("results from mixed modes");
  if (!mode_) mode_ = other.mode_;
  n_ += other.n_;
  hmd_violation_ += other.hmd_violation_;
  astm_los_ += other.astm_los_;
  excursion_ += other.excursion_;
  timeout_ += other.timeout_;
  unfinished_ += other.unfinished_;
  hmd_.merge(other.hmd_);
  if (other.min_hmd_) min_hmd_ = min_hmd_ ? std::min(*min_hmd_, *other.min_hmd_) : other.min_hmd_;
  extra_.merge(other.extra_);
  equity_.merge(other.equity_);
  for (const auto& [bin, count] : other.bins_) bins_[bin] += count;
}

AggregateStats Aggregator::stats() const {
  if (n_ == 0) throw std::domain_error("no scenario results to aggregate");
  AggregateStats s;
  s.mode = *mode_;
  s.bin_width_m = bin_width_m_;
  s.scenario_count = n_;
  const double n = static_cast<double>(n_);
  s.rate_hmd_violation = static_cast<double>(hmd_violation_) / n;
  s.rate_astm_los = static_cast<double>(astm_los_) / n;
  s.rate_excursion = static_cast<double>(excursion_) / n;
  s.rate_timeout = static_cast<double>(timeout_) / n;
  s.mean_actual_hmd_m = hmd_.mean();
  s.min_actual_hmd_m = min_hmd_;
  s.mean_extra_distance_m = extra_.mean();
  s.mean_equity_std_m = equity_.mean();
  s.hmd_undefined = n_ - hmd_.n;
  s.equity_undefined = n_ - equity_.n;
  s.unfinished_aircraft = unfinished_;
  if (!bins_.empty()) {
    for (std::int64_t b = 0; b <= bins_.rbegin()->first; ++b) {
      const auto it = bins_.find(b);
      const double low = static_cast<double>(b) * bin_width_m_;
      s.hmd_histogram.push_back({low, low + bin_width_m_, it == bins_.end() ? 0 : it->second});
    }
  }
  return s;
}

AggregateStats aggregate(std::span<const ScenarioResult> results, const AirspaceConfig& cfg, double bin_width_m) {
  Aggregator agg(cfg, bin_width_m);
  for (const auto& r : results) agg.add(r);
  return agg.stats();
}

nlohmann::json to_json(const AggregateStats& s) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : s.hmd_histogram) bins.push_back({{"bin_low_m", b.low_m}, {"bin_high_m", b.high_m}, {"count", b.count}});
  if (s.hmd_undefined > 0) bins.push_back({{"bin_low_m", nullptr}, {"bin_high_m", nullptr}, {"count", s.hmd_undefined}});
  return {
      {"mode", to_string(s.mode)},
      {"scenario_count", s.scenario_count},
      {"mean_actual_hmd_m", opt(s.mean_actual_hmd_m)},
      {"min_actual_hmd_m", opt(s.min_actual_hmd_m)},
      {"rate_hmd_violation", s.rate_hmd_violation},
      {"rate_astm_los", s.rate_astm_los},
      {"rate_excursion", s.rate_excursion},
      {"rate_timeout", s.rate_timeout},
      {"mean_extra_distance_m", opt(s.mean_extra_distance_m)},
      {"mean_equity_std_m", opt(s.mean_equity_std_m)},
      {"hmd_bin_width_m", s.bin_width_m},
      {"hmd_histogram", bins},
      {"hmd_undefined", s.hmd_undefined},
      {"equity_undefined", s.equity_undefined},
      {"unfinished_aircraft", s.unfinished_aircraft},
      {"unfinished_rule", "unfinished aircraft excluded from extra distance and equity; counted in rate_timeout"},
  };
}

}  // namespace hexatm
