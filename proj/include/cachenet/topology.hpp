#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace cachenet::topology {

enum class Kind { linear, circular };

/// Partially connected interference network. Receiver i hears the L
/// consecutive transmitters starting at i. A fully connected network is the
/// circular kind with L == K.
struct NetworkConfig {
  int K = 1;
  int L = 1;
  Kind kind = Kind::linear;

  int receivers() const { return K; }
  int transmitters() const { return kind == Kind::linear ? K + L - 1 : K; }
  bool fully_connected() const { return kind == Kind::circular && L == K; }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

inline NetworkConfig make_linear(int K, int L) {
  if (K < 1) throw Error(ErrorCode::invalid_connectivity, "K must be positive, got " + std::to_string(K));
  if (L < 1 || L > K)
    throw Error(ErrorCode::invalid_connectivity,
                "need 1 <= L <= K, got K=" + std::to_string(K) + " L=" + std::to_string(L));
  return {K, L, Kind::linear};
}

inline int floor_mod(int a, int m) {
  int v = a % m;
  return v < 0 ? v + m : v;
}

inline void check_receiver(const NetworkConfig& cfg, int i) {
  if (i < 0 || i >= cfg.K)
    throw Error(ErrorCode::index_out_of_range,
                "receiver " + std::to_string(i) + " outside [0, " + std::to_string(cfg.K - 1) + "]");
}

inline void check_transmitter(const NetworkConfig& cfg, int j) {
  if (j < 0 || j >= cfg.transmitters())
    throw Error(ErrorCode::index_out_of_range,
                "transmitter " + std::to_string(j) + " outside [0, " +
                    std::to_string(cfg.transmitters() - 1) + "]");
}

/// Transmitters heard by receiver i, ascending.
inline std::vector<int> tx_set(const NetworkConfig& cfg, int i) {
  check_receiver(cfg, i);
  std::vector<int> out;
  out.reserve(cfg.L);
  for (int j = i; j < i + cfg.L; ++j) out.push_back(j);
  if (cfg.kind == Kind::circular) {
    for (int& j : out) j = floor_mod(j, cfg.K);
    std::sort(out.begin(), out.end());
  }
  return out;
}

/// Actual receivers served by transmitter j, ascending. Edge transmitters of a
/// linear network serve fewer than L receivers.
inline std::vector<int> rx_set(const NetworkConfig& cfg, int j) {
  check_transmitter(cfg, j);
  std::vector<int> out;
  for (int i = j - cfg.L + 1; i <= j; ++i) {
    if (cfg.kind == Kind::circular) {
      out.push_back(floor_mod(i, cfg.K));
    } else if (i >= 0 && i < cfg.K) {
      out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Linear network padded with non-requesting virtual receivers
/// {-L+1..-1} and {K..K+L-2}, so that every transmitter j sees exactly the L
/// receivers {j-L+1..j}.
class ExpandedConfig {
 public:
  explicit ExpandedConfig(NetworkConfig base) : base_(base) {
    if (base_.kind != Kind::linear)
      throw Error(ErrorCode::unsupported_topology, "only linear networks can be expanded");
    for (int i = -base_.L + 1; i <= -1; ++i) virtual_.push_back(i);
    for (int i = base_.K; i <= base_.K + base_.L - 2; ++i) virtual_.push_back(i);
  }

  const NetworkConfig& base() const { return base_; }
  int K() const { return base_.K; }
  int L() const { return base_.L; }
  int transmitters() const { return base_.transmitters(); }
  const std::vector<int>& virtual_receivers() const { return virtual_; }

  int min_receiver() const { return -base_.L + 1; }
  int max_receiver() const { return base_.K + base_.L - 2; }

  bool is_actual(int i) const { return i >= 0 && i < base_.K; }
  bool is_virtual(int i) const {
    return (i >= min_receiver() && i < 0) || (i >= base_.K && i <= max_receiver());
  }

  /// The actual receiver whose cache a (virtual or actual) receiver copies.
  int mirror(int i) const {
    if (is_actual(i)) return i;
    if (!is_virtual(i)) throw Error(ErrorCode::index_out_of_range, "receiver " + std::to_string(i));
    return i < 0 ? i + base_.L : i - base_.L;
  }

  /// Residue class deciding the receiver's cache content.
  int residue(int i) const { return mirror(i) % base_.L; }

  /// R_j^e = {j-L+1, ..., j}.
  std::vector<int> rx_set(int j) const {
    check_transmitter(base_, j);
    std::vector<int> out;
    for (int i = j - base_.L + 1; i <= j; ++i) out.push_back(i);
    return out;
  }

  /// Transmitters heard by any (virtual or actual) receiver, ascending.
  std::vector<int> tx_set(int i) const {
    if (!is_actual(i) && !is_virtual(i)) throw Error(ErrorCode::index_out_of_range, "receiver " + std::to_string(i));
    std::vector<int> out;
    for (int j = i; j < i + base_.L; ++j) {
      if (j >= 0 && j < transmitters()) out.push_back(j);
    }
    return out;
  }

 private:
  NetworkConfig base_;
  std::vector<int> virtual_;
};

inline ExpandedConfig expand(const NetworkConfig& cfg) { return ExpandedConfig(cfg); }

/// Transmitter pairs (j, K+j) merged when folding a linear network into a
/// circular one.
struct MergeMap {
  int K = 0;
  std::vector<std::pair<int, int>> pairs;

  /// Linear transmitter index to circular index.
  int relabel(int linear_tx) const { return linear_tx >= K ? linear_tx - K : linear_tx; }

  /// Channel (receiver, linear transmitter) to (receiver, circular transmitter).
  std::pair<int, int> relabel_channel(int i, int linear_tx) const { return {i, relabel(linear_tx)}; }
};

/// Requires L | K so that merged transmitters hold identical caches.
inline std::pair<NetworkConfig, MergeMap> to_circular(const NetworkConfig& cfg) {
  if (cfg.kind != Kind::linear)
    throw Error(ErrorCode::unsupported_topology, "to_circular expects a linear network");
  if (cfg.K % cfg.L != 0)
    throw Error(ErrorCode::divisibility, "L=" + std::to_string(cfg.L) + " does not divide K=" +
                                             std::to_string(cfg.K) + "; merged transmitters would cache different content");
  MergeMap map{cfg.K, {}};
  for (int j = 0; j <= cfg.L - 2; ++j) map.pairs.emplace_back(j, cfg.K + j);
  return {NetworkConfig{cfg.K, cfg.L, Kind::circular}, map};
}

}  // namespace cachenet::topology
