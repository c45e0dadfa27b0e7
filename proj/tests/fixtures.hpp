#ifndef IOBT_TESTS_FIXTURES_HPP_
#define IOBT_TESTS_FIXTURES_HPP_

#include <vector>

#include "iobt/netmodel.hpp"

namespace iobt::testing {

// Single-sensor types 1..M, plus any extra multi-sensor types.
inline GameConfig simple_config(int H, int M, std::vector<std::vector<int>> extra = {}) {
  GameConfig cfg;
  cfg.H = H;
  cfg.M = M;
  for (int j = 1; j <= M; ++j) cfg.types.push_back(DeviceType{j, 1, {j}});
  for (auto& info : extra) {
    int id = cfg.K() + 1;
    cfg.types.push_back(DeviceType{id, static_cast<int>(info.size()), info});
  }
  for (const auto& t : cfg.types) {
    cfg.c_type.push_back(0.5 * t.sensor_count);
    cfg.d_type.push_back(0.5 * t.sensor_count);
  }
  cfg.thresholds.assign(H * M, 1);
  cfg.c_L = 50;
  cfg.c_CH = 20;
  cfg.c_aL = 0;
  cfg.d_L = 50;
  return cfg;
}

// `per_cluster` single-type devices in every cluster, lowest id as CH, two
// sinks per area with the first activated.
inline NetworkState simple_state(const GameConfig& cfg, int per_cluster) {
  NetworkState s = NetworkState::empty(cfg.H, cfg.M);
  for (int h = 1; h <= cfg.H; ++h) {
    for (int j = 1; j <= cfg.M; ++j) {
      for (int n = 0; n < per_cluster; ++n) s.add_device(cfg, j, h);
      s.ch[s.cidx(j, h)] = s.cluster(j, h).front();
    }
    int l = s.add_sink(h, cfg.sink_weight);
    s.add_sink(h, cfg.sink_weight);
    s.activated[h - 1] = l;
  }
  return s;
}

}  // namespace iobt::testing

#endif  // IOBT_TESTS_FIXTURES_HPP_
