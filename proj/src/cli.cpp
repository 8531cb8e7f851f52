#include "hexatm/cli.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hexatm/metrics.hpp"

#ifndef HEXATM_VERSION
#define HEXATM_VERSION "0.0.0"
#endif

namespace hexatm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string message;
};

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init");
  }
  void update(std::string_view s) { EVP_DigestUpdate(ctx_.get(), s.data(), s.size()); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &n);
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%02x", md[i]);
      out += buf;
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, void (*)(EVP_MD_CTX*)> ctx_;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Failure{kDataError, "cannot read " + p.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Failure{kDataError, "cannot write " + p.string()};
  return out;
}

json vec(const Vec2& v) { return json::array({v.x, v.y}); }
Vec2 vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

fs::path meta_path(const fs::path& p) { return fs::path(p.string() + ".meta.json"); }

struct Options {
  EngineConfig ec;
  double dthr_nmi = 0.66;
  double turn_rate_deg = 6.5;
  double intruder_entry_s = kDefaultIntruderEntryS;
  int max_anomalies = 0;
  double bin_width_m = kDefaultBinWidthM;

  std::string set_name;
  std::string out;
  std::string method;
  std::string set_path;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::size_t> sample_k;
  std::uint64_t seed = 1;
  std::optional<std::size_t> limit;
  std::string trace_dir;
  std::vector<std::string> results;
  std::uint64_t scenario_id = 0;
};

EngineConfig finalize(Options& o, Mode mode) {
  EngineConfig ec = o.ec;
  ec.mode = mode;
  try {
    ec.daa.dthr_m = dthr_from_nmi(o.dthr_nmi);
    ec.limits.turn_rate_radps = deg2rad(o.turn_rate_deg);
    ec.validate();
  } catch (const std::domain_error& e) {
    throw Failure{kUsage, e.what()};
  }
  return ec;
}

Mode method_mode(const std::string& method) {
  const auto m = mode_from_method(method);
  if (!m) throw Failure{kUsage, "unknown method '" + method + "' (daa, strategic, collab, daa_rec, collab_rec)"};
  return *m;
}

std::vector<ScenarioConfig> load_set(const std::string& path, const EngineConfig& ec) {
  std::istringstream in(read_file(path));
  std::vector<ScenarioConfig> set;
  try {
    set = read_scenarios_csv(in, ec.airspace);
  } catch (const DataError& e) {
    throw Failure{kDataError, path + ": " + e.what()};
  }
  for (const auto& sc : set) {
    if (sc.has_intruder() != is_recovery(ec.mode)) {
      throw Failure{kUsage, std::string("method ") + to_string(ec.mode) + " does not match set " + path +
                                (sc.has_intruder() ? " (recovery rows)" : " (unperturbed rows)")};
    }
  }
  std::stable_sort(set.begin(), set.end(),
                   [](const ScenarioConfig& a, const ScenarioConfig& b) { return a.scenario_id < b.scenario_id; });
  return set;
}

ScenarioResult run_one(const ScenarioConfig& sc, const EngineConfig& ec, Trace* trace) {
  try {
    return run_scenario(sc, ec, trace);
  } catch (const std::exception& e) {
    ScenarioResult r;
    r.scenario_id = sc.scenario_id;
    r.mode = ec.mode;
    r.anomalies.push_back(std::string("engine failure: ") + e.what());
    return r;
  }
}

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

void write_trace(const fs::path& csv_path, const ScenarioConfig& sc, const ScenarioResult& r, const Trace& t,
                 const EngineConfig& ec) {
  auto csv = open_out(csv_path);
  csv << "t_s,aircraft,x_m,y_m,heading_deg,mode,cell\n";
  for (const auto& row : t.rows) {
    csv << fmt(row.t_s, 1) << ',' << row.aircraft << ',' << fmt(row.position.x, 3) << ',' << fmt(row.position.y, 3)
        << ',' << fmt(row.heading_deg, 3) << ',' << row.mode_tag << ',' << row.cell << '\n';
  }

  json plan = json::array();
  for (const auto& p : t.plan) {
    json cells = json::array();
    for (CellId c : p) cells.push_back(c.index);
    plan.push_back(cells);
  }
  json ledger = json::array();
  for (const auto& res : t.ledger) {
    ledger.push_back({{"cell", res.cell.index}, {"owner", res.owner}, {"t_start_s", res.t_start_s},
                      {"t_end_s", res.t_end_s}, {"hold", res.hold}});
  }
  json missions = json::array();
  for (const auto& m : sc.missions) missions.push_back({{"id", m.id}, {"origin", m.origin.index}, {"destination", m.destination.index}});
  const json side = {
      {"scenario_id", sc.scenario_id},
      {"missions", missions},
      {"intruder_index", sc.intruder_index},
      {"config", config_json(ec)},
      {"plan", plan},
      {"ledger", ledger},
      {"result", result_json(r, ec.airspace)},
  };
  open_out(meta_path(csv_path)) << side.dump(2) << '\n';
}

// ---- generate ----

int cmd_generate(Options& o, std::ostream& out) {
  const auto set = parse_scenario_set(o.set_name);
  if (!set) throw Failure{kUsage, "unknown set '" + o.set_name + "' (unperturbed, recovery)"};
  const EngineConfig ec = finalize(o, Mode::StrategicU);
  const auto scenarios = *set == ScenarioSet::Recovery ? gen_recovery(ec.airspace, o.intruder_entry_s)
                                                       : gen_unperturbed(ec.airspace);
  std::ostringstream csv;
  write_scenarios_csv(csv, scenarios);
  const std::string body = csv.str();
  open_out(o.out) << body;
  const json meta = {
      {"tool", "hexatm"},
      {"version", HEXATM_VERSION},
      {"set", to_string(*set)},
      {"rule", rule_name(*set)},
      {"radius_rings", ec.airspace.radius_rings},
      {"centroid_spacing_m", ec.airspace.centroid_spacing_m},
      {"min_mission_distance", kMinMissionDistance},
      {"intruder_entry_s", *set == ScenarioSet::Recovery ? json(o.intruder_entry_s) : json(nullptr)},
      {"count", scenarios.size()},
      // published size of each set at radius 2; the recovery rule here differs from it
      {"reference_count", *set == ScenarioSet::Recovery ? 373680 : 122415},
      {"csv_sha256", sha256_hex(body)},
  };
  open_out(meta_path(o.out)) << meta.dump(2) << '\n';
  out << scenarios.size() << '\n';
  return kOk;
}

// ---- run ----

int cmd_run(Options& o, std::ostream& err) {
  const EngineConfig ec = finalize(o, method_mode(o.method));
  const std::string set_bytes = read_file(o.set_path);
  auto set = load_set(o.set_path, ec);
  if (o.sample_k) {
    if (*o.sample_k > set.size()) throw Failure{kUsage, "sample larger than the scenario set"};
    set = sample(set, *o.sample_k, o.seed);
  }
  if (o.limit && *o.limit < set.size()) set.resize(*o.limit);
  if (!o.trace_dir.empty()) fs::create_directories(o.trace_dir);

  json generator = nullptr;
  if (fs::exists(meta_path(o.set_path))) {
    try {
      generator = json::parse(read_file(meta_path(o.set_path)));
    } catch (const json::exception& e) {
      throw Failure{kDataError, meta_path(o.set_path).string() + ": " + e.what()};
    }
  }
  const json manifest = {
      {"tool", "hexatm"},
      {"version", HEXATM_VERSION},
      {"method", o.method},
      {"mode", to_string(ec.mode)},
      {"config", config_json(ec)},
      {"set_sha256", sha256_hex(set_bytes)},
      {"generator", generator},
      {"sample", o.sample_k ? json{{"k", *o.sample_k}, {"seed", o.seed}} : json(nullptr)},
      {"limit", o.limit ? json(*o.limit) : json(nullptr)},
      {"scenario_count", set.size()},
  };

  auto file = open_out(o.out);
  file << json{{"manifest", manifest}}.dump() << '\n';

  const unsigned workers = std::max(1u, std::min<unsigned>(o.workers, static_cast<unsigned>(std::max<std::size_t>(set.size(), 1))));
  err << "running " << set.size() << " scenarios on " << workers << " workers\n";

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable ready;
  std::map<std::size_t, std::pair<std::string, bool>> done;  // index -> (line, anomalous)
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= set.size()) return;
      Trace trace;
      const bool tracing = !o.trace_dir.empty();
      const ScenarioResult r = run_one(set[i], ec, tracing ? &trace : nullptr);
      if (tracing) {
        write_trace(fs::path(o.trace_dir) / ("scenario_" + std::to_string(set[i].scenario_id) + ".csv"), set[i], r,
                    trace, ec);
      }
      std::string line = result_json(r, ec.airspace).dump();
      {
        std::lock_guard lock(mu);
        done.emplace(i, std::make_pair(std::move(line), !r.anomalies.empty()));
      }
      ready.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);

  Sha256 digest;
  std::size_t anomalous = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::pair<std::string, bool> item;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return done.count(i) > 0; });
      item = std::move(done.at(i));
      done.erase(i);
    }
    digest.update(item.first);
    digest.update("\n");
    file << item.first << '\n';
    anomalous += item.second;
  }
  for (auto& t : pool) t.join();
  file << json{{"checksum", {{"records", set.size()}, {"sha256", digest.hex()}}}}.dump() << '\n';
  if (!file) throw Failure{kDataError, "write failed: " + o.out};

  if (anomalous > static_cast<std::size_t>(std::max(o.max_anomalies, 0))) {
    err << anomalous << " scenarios recorded anomalies (limit " << o.max_anomalies << ")\n";
    return kAnomalies;
  }
  return kOk;
}

// ---- analyze ----

struct ResultsFile {
  json manifest;
  std::vector<json> records;
};

ResultsFile load_results(const std::string& path) {
  std::istringstream in(read_file(path));
  ResultsFile f;
  std::string line;
  std::optional<json> checksum;
  Sha256 digest;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (checksum) throw Failure{kDataError, path + ": content after checksum line"};
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      throw Failure{kDataError, path + ":" + std::to_string(lineno) + ": not JSON"};
    }
    if (lineno == 1) {
      if (!j.contains("manifest")) throw Failure{kDataError, path + ": missing manifest"};
      f.manifest = j["manifest"];
    } else if (j.contains("checksum")) {
      checksum = j["checksum"];
    } else {
      digest.update(line);
      digest.update("\n");
      f.records.push_back(std::move(j));
    }
  }
  if (lineno == 0) throw Failure{kDataError, path + ": empty results file"};
  if (!checksum) throw Failure{kDataError, path + ": missing checksum line (truncated run?)"};
  if (checksum->value("records", std::size_t{0}) != f.records.size() ||
      checksum->value("sha256", std::string()) != digest.hex()) {
    throw Failure{kDataError, path + ": records do not match the manifest checksum"};
  }
  if (f.manifest.value("scenario_count", std::size_t{0}) != f.records.size()) {
    throw Failure{kDataError, path + ": record count differs from the manifest"};
  }
  return f;
}

AirspaceConfig airspace_of(const json& manifest) {
  AirspaceConfig a;
  const auto& c = manifest.at("config");
  a.radius_rings = c.at("radius_rings").get<int>();
  a.centroid_spacing_m = c.at("centroid_spacing_m").get<double>();
  return a;
}

int cmd_analyze(Options& o, std::ostream& out) {
  std::optional<json> manifest;
  std::optional<Aggregator> total;
  for (const auto& path : o.results) {
    const ResultsFile f = load_results(path);
    if (manifest && *manifest != f.manifest) throw Failure{kDataError, path + ": manifest differs from " + o.results[0]};
    manifest = f.manifest;
    Aggregator part(airspace_of(f.manifest), o.bin_width_m);
    try {
      for (const auto& rec : f.records) part.add(result_from_json(rec));
    } catch (const json::exception& e) {
      throw Failure{kDataError, path + ": malformed record: " + e.what()};
    } catch (const std::invalid_argument& e) {
      throw Failure{kDataError, path + ": " + e.what()};
    }
    if (total) {
      total->merge(part);
    } else {
      total = part;
    }
  }
  if (!total || total->count() == 0) throw Failure{kDataError, "no scenario records to analyze"};
  const json summary = {{"summary", to_json(total->stats())}, {"manifest", *manifest}, {"inputs", o.results.size()}};
  if (o.out.empty()) {
    out << summary.dump(2) << '\n';
  } else {
    open_out(o.out) << summary.dump(2) << '\n';
  }
  return kOk;
}

// ---- trace ----

int cmd_trace(Options& o) {
  const EngineConfig ec = finalize(o, method_mode(o.method));
  const auto set = load_set(o.set_path, ec);
  const auto it = std::find_if(set.begin(), set.end(),
                               [&](const ScenarioConfig& sc) { return sc.scenario_id == o.scenario_id; });
  if (it == set.end()) throw Failure{kDataError, "scenario " + std::to_string(o.scenario_id) + " not in " + o.set_path};
  Trace trace;
  const ScenarioResult r = run_one(*it, ec, &trace);
  write_trace(o.out, *it, r, trace, ec);
  return r.anomalies.size() > static_cast<std::size_t>(std::max(o.max_anomalies, 0)) ? kAnomalies : kOk;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data);
  return h.hex();
}

json config_json(const EngineConfig& ec) {
  return {
      {"dt_integration_s", ec.dt_integration_s},
      {"dt_metric_s", ec.dt_metric_s},
      {"timeout_s", ec.timeout_s},
      {"excursion_radius_m", ec.excursion_radius_m},
      {"hmd_violation_m", ec.hmd_violation_m},
      {"astm_los_m", ec.astm_los_m},
      {"capture_radius_m", ec.capture_radius_m},
      {"intruder_retry_s", ec.intruder_retry_s},
      {"dthr_m", ec.daa.dthr_m},
      {"lookahead_s", ec.daa.lookahead_s},
      {"daa_hold_s", ec.daa.hold_s},
      {"band_step_deg", ec.daa.band_step_deg},
      {"max_band_search_deg", ec.daa.max_band_search_deg},
      {"speed_mps", ec.limits.speed_mps},
      {"turn_rate_rad_s", ec.limits.turn_rate_radps},
      {"radius_rings", ec.airspace.radius_rings},
      {"centroid_spacing_m", ec.airspace.centroid_spacing_m},
  };
}

json result_json(const ScenarioResult& r, const AirspaceConfig& cfg) {
  json aircraft = json::array();
  for (const auto& a : r.aircraft) {
    aircraft.push_back({
        {"id", a.id},
        {"origin", a.mission.origin.index},
        {"destination", a.mission.destination.index},
        {"intruder", a.intruder},
        {"entered", a.entered},
        {"finished", a.finished},
        {"entry_time_s", a.entry_time_s},
        {"flight_time_s", a.flight_time_s},
        {"flown_distance_m", a.flown_distance_m},
        {"extra_distance_m", extra_distance(a, cfg)},
        {"plan_legs", a.plan_legs},
        {"holds", a.holds},
        {"cpa",
         {{"other", a.cpa.other},
          {"min_distance_m", a.cpa.min_distance_m},
          {"t_s", a.cpa.t_s},
          {"own_position", vec(a.cpa.own_position)},
          {"other_position", vec(a.cpa.other_position)}}},
    });
  }
  return {
      {"scenario_id", r.scenario_id},
      {"mode", to_string(r.mode)},
      {"actual_hmd_m", r.actual_hmd_m ? json(*r.actual_hmd_m) : json(nullptr)},
      {"actual_hmd_t_s", r.actual_hmd_t_s},
      {"events",
       {{"hmd_violation", r.events.hmd_violation},
        {"astm_los", r.events.astm_los},
        {"excursion", r.events.excursion},
        {"timeout", r.events.timeout}}},
      {"end_time_s", r.end_time_s},
      {"anomalies", r.anomalies},
      {"aircraft", aircraft},
  };
}

ScenarioResult result_from_json(const json& j) {
  ScenarioResult r;
  r.scenario_id = j.at("scenario_id").get<std::uint64_t>();
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown mode in record");
  r.mode = *mode;
  if (!j.at("actual_hmd_m").is_null()) r.actual_hmd_m = j["actual_hmd_m"].get<double>();
  r.actual_hmd_t_s = j.at("actual_hmd_t_s").get<double>();
  const auto& ev = j.at("events");
  r.events = {ev.at("hmd_violation").get<bool>(), ev.at("astm_los").get<bool>(), ev.at("excursion").get<bool>(),
              ev.at("timeout").get<bool>()};
  r.end_time_s = j.at("end_time_s").get<double>();
  r.anomalies = j.at("anomalies").get<std::vector<std::string>>();
  for (const auto& a : j.at("aircraft")) {
    AircraftResult x;
    x.id = a.at("id").get<int>();
    x.mission = {x.id, CellId{a.at("origin").get<std::uint32_t>()}, CellId{a.at("destination").get<std::uint32_t>()}};
    x.intruder = a.at("intruder").get<bool>();
    x.entered = a.at("entered").get<bool>();
    x.finished = a.at("finished").get<bool>();
    x.entry_time_s = a.at("entry_time_s").get<double>();
    x.flight_time_s = a.at("flight_time_s").get<double>();
    x.flown_distance_m = a.at("flown_distance_m").get<double>();
    x.plan_legs = a.at("plan_legs").get<int>();
    x.holds = a.at("holds").get<int>();
    const auto& c = a.at("cpa");
    x.cpa = {x.id, c.at("other").get<int>(), c.at("min_distance_m").get<double>(), c.at("t_s").get<double>(),
             vec(c.at("own_position")), vec(c.at("other_position"))};
    r.aircraft.push_back(x);
  }
  return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cellular airspace traffic simulator: DAA, strategic and collaborative allocation", "hexatm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file of option defaults; command-line flags win");
  app.set_version_flag("--version", HEXATM_VERSION);

  app.add_option("--dt-integration", o.ec.dt_integration_s, "integration step, s")->capture_default_str();
  app.add_option("--dt-metric", o.ec.dt_metric_s, "metric sampling step, s")->capture_default_str();
  app.add_option("--timeout", o.ec.timeout_s, "simulated time limit, s")->capture_default_str();
  app.add_option("--excursion-radius", o.ec.excursion_radius_m, "excursion circle radius, m")->capture_default_str();
  app.add_option("--hmd-violation", o.ec.hmd_violation_m, "HMD violation threshold, m")->capture_default_str();
  app.add_option("--astm-los", o.ec.astm_los_m, "ASTM loss-of-separation threshold, m")->capture_default_str();
  app.add_option("--capture-radius", o.ec.capture_radius_m, "arrival capture radius, m")->capture_default_str();
  app.add_option("--intruder-retry", o.ec.intruder_retry_s, "ground-wait retry period, s")->capture_default_str();
  app.add_option("--dthr-nmi", o.dthr_nmi, "DAA distance threshold, nmi (0.66 means 4000 ft)")->capture_default_str();
  app.add_option("--lookahead", o.ec.daa.lookahead_s, "DAA lookahead, s")->capture_default_str();
  app.add_option("--daa-hold", o.ec.daa.hold_s, "DAA maneuver hold time, s")->capture_default_str();
  app.add_option("--band-step", o.ec.daa.band_step_deg, "heading band step, deg")->capture_default_str();
  app.add_option("--max-band-search", o.ec.daa.max_band_search_deg, "recovery search span, deg")->capture_default_str();
  app.add_option("--speed", o.ec.limits.speed_mps, "airspeed, m/s")->capture_default_str();
  app.add_option("--turn-rate", o.turn_rate_deg, "turn rate, deg/s")->capture_default_str();
  app.add_option("--radius", o.ec.airspace.radius_rings, "airspace radius, rings")->capture_default_str();
  app.add_option("--spacing", o.ec.airspace.centroid_spacing_m, "centroid spacing, m")->capture_default_str();
  app.add_option("--intruder-entry", o.intruder_entry_s, "intruder entry time for recovery sets, s")->capture_default_str();
  app.add_option("--max-anomalies", o.max_anomalies, "scenarios with anomalies tolerated before exit 3")->capture_default_str();
  app.add_option("--bin-width", o.bin_width_m, "HMD histogram bin width, m")->capture_default_str();

  auto* gen = app.add_subcommand("generate", "write a scenario set as CSV");
  gen->add_option("set", o.set_name, "unperturbed or recovery")->required();
  gen->add_option("-o,--out", o.out, "output CSV")->required();

  auto* run_cmd = app.add_subcommand("run", "simulate a scenario set, writing JSON lines");
  run_cmd->add_option("-m,--method", o.method, "daa, strategic, collab, daa_rec or collab_rec")->required();
  run_cmd->add_option("-s,--set", o.set_path, "scenario CSV")->required();
  run_cmd->add_option("-o,--out", o.out, "results file")->required();
  run_cmd->add_option("-w,--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--sample", o.sample_k, "stratified sample size");
  run_cmd->add_option("--seed", o.seed, "sample seed")->capture_default_str();
  run_cmd->add_option("--limit", o.limit, "keep at most this many scenarios");
  run_cmd->add_option("--trace-dir", o.trace_dir, "also write a trace per scenario here");

  auto* analyze = app.add_subcommand("analyze", "summarize one or more results files");
  analyze->add_option("results", o.results, "results files sharing one manifest")->required();
  analyze->add_option("-o,--out", o.out, "summary JSON (stdout if omitted)");

  auto* trace = app.add_subcommand("trace", "write one scenario's trajectory CSV and sidecar JSON");
  trace->add_option("-m,--method", o.method, "daa, strategic, collab, daa_rec or collab_rec")->required();
  trace->add_option("-s,--set", o.set_path, "scenario CSV")->required();
  trace->add_option("--id", o.scenario_id, "scenario id")->required();
  trace->add_option("-o,--out", o.out, "trajectory CSV")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_generate(o, out);
    if (*run_cmd) return cmd_run(o, err);
    if (*analyze) return cmd_analyze(o, out);
    return cmd_trace(o);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace hexatm::cli
