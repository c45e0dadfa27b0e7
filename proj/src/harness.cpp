#include "iobt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

namespace iobt {

using nlohmann::json;

ExperimentConfig default_config() {
  ExperimentConfig ec;
  GameConfig& g = ec.game;
  g.H = 5;
  g.M = 5;
  const std::vector<std::vector<int>> info = {{1}, {2}, {3}, {4}, {5}, {1, 2, 3, 4}, {1, 2, 3, 5}};
  for (int tau = 1; tau <= 7; ++tau) {
    DeviceType t;
    t.type_id = tau;
    t.info = info[tau - 1];
    t.sensor_count = static_cast<int>(t.info.size());
    g.types.push_back(t);
    g.c_type.push_back(0.5 * t.sensor_count);
    g.d_type.push_back(0.5 * t.sensor_count);
  }
  g.c_L = 0.0;
  g.c_aL = 0.0;
  g.c_CH = 20.0;
  g.d_L = 50.0;
  g.nu = 1.0;
  g.eta = 1.0;
  g.mu = 100.0;
  g.lambda = 1.0;
  g.sink_weight = 15.0;
  g.ls_target = 3;
  g.horizon = 1;
  ec.threshold = 15;
  g.thresholds.assign(g.H * g.M, ec.threshold);
  ec.instance.devices_per_area = 200;
  ec.instance.sinks_per_area = 2;
  ec.instance.type_weights = {30, 30, 30, 30, 30, 25, 25};
  return ec;
}

namespace {

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig ec = default_config();
  GameConfig& g = ec.game;
  double type_cost_factor = 0.5;
  double deploy_cost_factor = 0.5;

  if (root.contains("types")) {
    const json& types = root.at("types");
    if (!types.is_array() || types.empty()) throw ConfigError("'types' must be a non-empty array");
    g.types.clear();
    int tau = 0;
    for (const json& t : types) {
      DeviceType d;
      d.type_id = ++tau;
      read(t, "info", d.info);
      std::sort(d.info.begin(), d.info.end());
      d.sensor_count = static_cast<int>(d.info.size());
      g.types.push_back(d);
    }
    g.M = 0;
    for (const auto& d : g.types) {
      for (int j : d.info) g.M = std::max(g.M, j);
    }
  }
  if (root.contains("network")) {
    const json& n = root.at("network");
    read(n, "areas", g.H);
    read(n, "devices_per_area", ec.instance.devices_per_area);
    read(n, "sinks_per_area", ec.instance.sinks_per_area);
    read(n, "threshold", ec.threshold);
    read(n, "sink_weight", g.sink_weight);
    read(n, "ls_target", g.ls_target);
    read(n, "type_weights", ec.instance.type_weights);
  }
  if (root.contains("costs")) {
    const json& c = root.at("costs");
    read(c, "type_attack_factor", type_cost_factor);
    read(c, "type_deploy_factor", deploy_cost_factor);
    read(c, "c_L", g.c_L);
    read(c, "c_aL", g.c_aL);
    read(c, "c_CH", g.c_CH);
    read(c, "d_L", g.d_L);
  }
  if (root.contains("normalizers")) {
    const json& n = root.at("normalizers");
    read(n, "nu", g.nu);
    read(n, "eta", g.eta);
    read(n, "mu", g.mu);
    read(n, "lambda", g.lambda);
  }
  if (root.contains("link")) {
    const json& l = root.at("link");
    read(l, "packet_size", g.link.packet_size);
    read(l, "capacity", g.link.capacity);
    read(l, "gs_delay", g.link.gs_delay);
  }
  if (root.contains("scenario")) {
    const json& s = root.at("scenario");
    read(s, "runs", ec.runs);
    read(s, "seed", ec.seed);
    read(s, "scale", ec.scale);
  }

  g.c_type.clear();
  g.d_type.clear();
  for (const auto& t : g.types) {
    g.c_type.push_back(type_cost_factor * t.sensor_count);
    g.d_type.push_back(deploy_cost_factor * t.sensor_count);
  }
  g.thresholds.assign(std::max(0, g.H * g.M), ec.threshold);
  if (static_cast<int>(ec.instance.type_weights.size()) != g.K()) {
    throw ConfigError("type_weights must have one entry per type");
  }
  for (double w : ec.instance.type_weights) {
    if (!(w >= 0)) throw ConfigError("type weights must be nonnegative");
  }
  if (ec.instance.devices_per_area < 1) throw ConfigError("devices_per_area must be positive");
  if (ec.instance.sinks_per_area < 1) throw ConfigError("sinks_per_area must be positive");
  if (ec.threshold < 0) throw ConfigError("threshold must be nonnegative");
  if (ec.runs < 1) throw ConfigError("runs must be positive");
  if (!(ec.scale > 0 && ec.scale <= 1)) throw ConfigError("scale must be in (0, 1]");
  g.validate();
  return ec;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GameConfig scaled_game(const ExperimentConfig& ec, double scale) {
  GameConfig g = ec.game;
  int th = static_cast<int>(std::ceil(ec.threshold * scale - 1e-9));
  g.thresholds.assign(g.H * g.M, th);
  g.c_L *= scale;
  g.c_aL *= scale;
  g.c_CH *= scale;
  g.d_L *= scale;
  return g;
}

InstanceSpec scaled_instance(const ExperimentConfig& ec, double scale) {
  InstanceSpec s = ec.instance;
  s.devices_per_area =
      std::max(1, static_cast<int>(std::ceil(ec.instance.devices_per_area * scale - 1e-9)));
  return s;
}

namespace {

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int draw_type(std::mt19937_64& rng, const std::vector<double>& w, double total) {
  double u = uniform53(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += w[k];
    if (u < acc) return static_cast<int>(k) + 1;
  }
  for (std::size_t k = w.size(); k > 0; --k) {
    if (w[k - 1] > 0) return static_cast<int>(k);
  }
  return 1;
}

}  // namespace

NetworkState generate_instance(const GameConfig& cfg, const InstanceSpec& spec,
                               std::uint64_t seed) {
  cfg.validate();
  if (static_cast<int>(spec.type_weights.size()) != cfg.K()) {
    throw ConfigError("type_weights must have one entry per type");
  }
  double total = 0.0;
  for (double w : spec.type_weights) total += w;
  if (!(total > 0)) throw ConfigError("type weights sum to zero");

  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> area_types(cfg.H);
  for (int h = 1; h <= cfg.H; ++h) {
    bool ok = false;
    for (int attempt = 0; attempt < spec.max_attempts && !ok; ++attempt) {
      std::vector<int> types(spec.devices_per_area);
      std::vector<int> count(cfg.M + 1, 0);
      for (int& tau : types) {
        tau = draw_type(rng, spec.type_weights, total);
        for (int j : cfg.type(tau).info) ++count[j];
      }
      ok = true;
      for (int j = 1; j <= cfg.M; ++j) ok = ok && count[j] >= cfg.threshold(j, h);
      if (ok) area_types[h - 1] = std::move(types);
    }
    if (!ok) {
      throw InfeasibleInstance("area " + std::to_string(h) +
                               " cannot meet the cluster thresholds");
    }
  }

  NetworkState s = NetworkState::empty(cfg.H, cfg.M);
  for (int h = 1; h <= cfg.H; ++h) {
    for (int tau : area_types[h - 1]) s.add_device(cfg, tau, h);
  }
  for (int c = 0; c < cfg.H * cfg.M; ++c) {
    s.ch[c] = s.clusters[c].empty() ? 0 : s.clusters[c].front();
  }
  for (int h = 1; h <= cfg.H; ++h) {
    for (int k = 0; k < spec.sinks_per_area; ++k) {
      int id = s.add_sink(h, cfg.sink_weight);
      if (k == 0) s.activated[h - 1] = id;
    }
  }
  s.check_invariants(cfg);
  return s;
}

Scenario scenario_definition(int id) {
  Scenario s;
  s.id = id;
  switch (id) {
    case 1:
      s.param = "c_L";
      s.values = {0, 50, 100, 150, 200};
      s.horizons = {1, 2, 3};
      break;
    case 2:
      s.param = "c_CH";
      s.values = {0, 20, 40, 60, 80, 100};
      s.horizons = {1, 2, 3};
      break;
    case 3:
      s.param = "c_aL";
      s.values = {0, 150};
      s.horizons = {1, 2, 3, 4, 5};
      break;
    default:
      throw ConfigError("unknown scenario " + std::to_string(id));
  }
  return s;
}

Metrics extract_metrics(const std::vector<StageRecord>& records) {
  Metrics m;
  if (records.empty()) return m;
  for (const auto& r : records) {
    m.p_h += r.p_h;
    m.p_c_max += r.p_c_max;
    m.n_d += r.expected_nd;
  }
  double n = static_cast<double>(records.size());
  m.p_h /= n;
  m.p_c_max /= n;
  m.n_d /= n;
  return m;
}

namespace {

// Nominal parameters of one swept point, before scaling.
ExperimentConfig point_config(const ExperimentConfig& ec, int id, double value) {
  ExperimentConfig p = ec;
  GameConfig& g = p.game;
  switch (id) {
    case 1:
      g.c_L = value;
      g.c_aL = 0.0;
      g.c_CH = 20.0;
      break;
    case 2:
      g.c_CH = value;
      g.c_aL = 100.0;
      g.c_L = 50.0;
      break;
    case 3:
      g.c_aL = value;
      g.c_L = 50.0;
      g.c_CH = 20.0;
      break;
  }
  return p;
}

}  // namespace

std::vector<MetricsRow> run_scenario(const ExperimentConfig& ec, int id,
                                     const ScenarioOptions& opts) {
  Scenario sc = scenario_definition(id);
  auto wanted = [&](Mode m) {
    return opts.modes.empty() ||
           std::find(opts.modes.begin(), opts.modes.end(), m) != opts.modes.end();
  };
  struct Job {
    Mode mode;
    int T;
  };
  std::vector<Job> jobs;
  for (int T : sc.horizons) {
    if (wanted(Mode::kFSE)) jobs.push_back({Mode::kFSE, T});
  }
  for (Mode m : {Mode::kNFSE, Mode::kEqual}) {
    if (!wanted(m)) continue;
    if (id == 3) {
      for (int T : sc.horizons) jobs.push_back({m, T});
    } else {
      jobs.push_back({m, 1});
    }
  }

  std::vector<MetricsRow> rows;
  for (double value : sc.values) {
    ExperimentConfig pc = point_config(ec, id, value);
    GameConfig base = scaled_game(pc, opts.scale);
    InstanceSpec spec = scaled_instance(pc, opts.scale);
    std::vector<NetworkState> instances;
    for (int r = 0; r < opts.runs; ++r) {
      instances.push_back(generate_instance(base, spec, opts.seed + r));
    }
    ValueCache cache;
    SolverOptions so;
    so.continuation = opts.continuation;

    for (const Job& job : jobs) {
      GameConfig cfg = base;
      cfg.horizon = job.T;
      auto start = std::chrono::steady_clock::now();
      std::vector<StageRecord> recs;
      for (int r = 0; r < opts.runs; ++r) {
        std::vector<StageRecord> part =
            simulate(instances[r], cfg, job.mode, opts.seed + r, 1, so,
                     job.mode == Mode::kEqual ? nullptr : &cache);
        for (auto& rec : part) rec.run = r;
        recs.insert(recs.end(), part.begin(), part.end());
      }
      double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      Metrics m = extract_metrics(recs);
      MetricsRow row;
      row.scenario = id;
      row.mode = to_string(job.mode);
      row.value = value;
      row.T = job.T;
      row.p_h = m.p_h;
      row.p_c_max = m.p_c_max;
      row.n_d = m.n_d;
      row.runtime = opts.timing ? secs : 0.0;
      row.seed = opts.seed;
      rows.push_back(row);
      if (opts.verbose) {
        std::cerr << "scenario " << id << ' ' << sc.param << '=' << value << ' ' << row.mode
                  << " T=" << job.T << " p_H=" << m.p_h << " p_c_max=" << m.p_c_max
                  << " N_D=" << m.n_d << " (" << secs << " s, cache " << cache.size() << ")\n";
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.mode != b.mode) return a.mode < b.mode;
    return a.T < b.T;
  });
  return rows;
}

void write_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << "scenario,mode,value,T,p_H,p_c_max,N_D,runtime,seed\n";
  std::ostringstream line;
  for (const auto& r : rows) {
    line.str("");
    line.clear();
    line << std::setprecision(12) << r.scenario << ',' << r.mode << ',' << r.value << ','
         << r.T << ',' << r.p_h << ',' << r.p_c_max << ',' << r.n_d << ',' << r.runtime << ','
         << r.seed << '\n';
    os << line.str();
  }
}

void write_dat(std::ostream& os, const std::vector<MetricsRow>& rows) {
  std::map<std::pair<std::string, int>, std::vector<const MetricsRow*>> blocks;
  for (const auto& r : rows) blocks[{r.mode, r.T}].push_back(&r);
  bool first = true;
  for (const auto& [key, list] : blocks) {
    if (!first) os << "\n\n";
    first = false;
    os << "# mode=" << key.first << " T=" << key.second << "\n# value p_H p_c_max N_D\n";
    os << std::setprecision(12);
    for (const MetricsRow* r : list) {
      os << r->value << ' ' << r->p_h << ' ' << r->p_c_max << ' ' << r->n_d << '\n';
    }
  }
}

}  // namespace iobt
