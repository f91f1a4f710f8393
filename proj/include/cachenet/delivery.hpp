#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dof.hpp"
#include "error.hpp"
#include "placement.hpp"
#include "rational.hpp"
#include "topology.hpp"

namespace cachenet::delivery {

using cachenet::to_string;
using placement::Bits;
using placement::SubfileLabel;
using topology::ExpandedConfig;
using topology::NetworkConfig;

struct Demand {
  std::vector<int> d;  // d[i] = file requested by receiver i

  /// Receiver i requests file i.
  static Demand identity(int K) {
    Demand out;
    for (int i = 0; i < K; ++i) out.d.push_back(i);
    return out;
  }
};

/// One XOR term of a coded message: the subfile intended for `receiver`.
struct Component {
  int receiver = 0;
  SubfileLabel label;

  friend bool operator==(const Component&, const Component&) = default;
};

struct CodedMessage {
  int tx = 0;
  std::vector<int> group;  // ascending, subset of R_tx^e
  int level = 0;           // |group| - 1
  std::vector<Component> composition;  // one per actual group member, ascending receiver
  Bits payload;
};

/// Picks the subfile of `file` that transmitter j sends to group member i.
using CompositionRule =
    std::function<SubfileLabel(const ExpandedConfig&, int j, const std::vector<int>& group, int i, int file)>;

/// W_{d_i, j mod L, (R mod L) \ {i mod L}}, residues of virtual members taken
/// from the receiver they mirror.
inline SubfileLabel standard_composition(const ExpandedConfig& ecfg, int j, const std::vector<int>& group, int i,
                                         int file) {
  placement::ResidueMask q = 0;
  for (int member : group) q |= placement::ResidueMask{1} << ecfg.residue(member);
  q &= ~(placement::ResidueMask{1} << ecfg.residue(i));
  return {file, j % ecfg.L(), q};
}

namespace detail {

inline void combinations(const std::vector<int>& items, int k, std::size_t start, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t idx = start; idx < items.size(); ++idx) {
    current.push_back(items[idx]);
    combinations(items, k, idx + 1, current, out);
    current.pop_back();
  }
}

}  // namespace detail

/// All size-k subsets of `items` (ascending input) in lexicographic order.
inline std::vector<std::vector<int>> subsets_of_size(const std::vector<int>& items, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  if (k >= 0 && k <= static_cast<int>(items.size())) detail::combinations(items, k, 0, current, out);
  return out;
}

inline void check_demand(const NetworkConfig& cfg, const Demand& demand) {
  if (static_cast<int>(demand.d.size()) != cfg.K)
    throw Error(ErrorCode::invalid_argument,
                "demand has " + std::to_string(demand.d.size()) + " entries, network has K=" + std::to_string(cfg.K));
  for (int f : demand.d) {
    if (f < 0) throw Error(ErrorCode::invalid_argument, "negative file index in demand");
  }
}

/// Coded messages of group level r: for every transmitter j and every
/// (r+1)-subset R of R_j^e containing an actual receiver, one message XOR-ing
/// the subfiles wanted by the actual members. Ordered by j, then R
/// lexicographically. Payloads are left empty (see `encode_payloads`).
inline std::vector<CodedMessage> generate_messages(const ExpandedConfig& ecfg, const Demand& demand, int r,
                                                   const CompositionRule& rule = standard_composition) {
  alignment::check_level(ecfg.L(), r);
  check_demand(ecfg.base(), demand);
  std::vector<CodedMessage> out;
  for (int j = 0; j < ecfg.transmitters(); ++j) {
    for (auto& group : subsets_of_size(ecfg.rx_set(j), r + 1)) {
      if (std::none_of(group.begin(), group.end(), [&](int i) { return ecfg.is_actual(i); })) continue;
      CodedMessage msg;
      msg.tx = j;
      msg.level = r;
      for (int i : group) {
        if (ecfg.is_actual(i)) msg.composition.push_back({i, rule(ecfg, j, group, i, demand.d[i])});
      }
      msg.group = std::move(group);
      out.push_back(std::move(msg));
    }
  }
  return out;
}

inline void encode_payloads(std::vector<CodedMessage>& msgs, const placement::Library& library) {
  for (auto& msg : msgs) {
    std::optional<Bits> acc;
    for (const auto& c : msg.composition) {
      Bits part = library.subfile(c.label);
      if (!acc) {
        acc = std::move(part);
      } else {
        if (acc->size() != part.size())
          throw Error(ErrorCode::internal, "XOR of unequal-length subfiles in message from tx " + std::to_string(msg.tx));
        *acc ^= part;
      }
    }
    msg.payload = acc ? std::move(*acc) : Bits();
  }
}

/// Messages whose group contains actual receiver i.
inline std::vector<CodedMessage> desired_messages(const std::vector<CodedMessage>& msgs, int i) {
  std::vector<CodedMessage> out;
  for (const auto& msg : msgs) {
    if (std::find(msg.group.begin(), msg.group.end(), i) != msg.group.end()) out.push_back(msg);
  }
  return out;
}

/// Messages heard by receiver i (sent by a transmitter in T_i) but not meant for it.
inline std::vector<CodedMessage> undesired_messages(const std::vector<CodedMessage>& msgs, const ExpandedConfig& ecfg,
                                                    int i) {
  std::vector<CodedMessage> out;
  for (const auto& msg : msgs) {
    bool hears = msg.tx >= i && msg.tx <= i + ecfg.L() - 1;
    bool member = std::find(msg.group.begin(), msg.group.end(), i) != msg.group.end();
    if (hears && !member) out.push_back(msg);
  }
  return out;
}

/// Recovers file d_i at actual receiver i from its cache and the coded
/// messages: each desired message is stripped of the other members' subfiles
/// (which i holds), the rest of the file comes from the cache.
inline Bits decode(int i, const std::vector<CodedMessage>& msgs, const placement::CacheStore& cache,
                   const Demand& demand, const placement::FileLayout& layout) {
  const int want = demand.d.at(i);
  std::map<SubfileLabel, Bits> recovered;
  for (const auto& msg : msgs) {
    if (std::find(msg.group.begin(), msg.group.end(), i) == msg.group.end()) continue;
    Bits acc = msg.payload;
    std::optional<SubfileLabel> mine;
    for (const auto& c : msg.composition) {
      if (c.receiver == i) {
        mine = c.label;
        continue;
      }
      auto it = cache.find(c.label);
      if (it == cache.end())
        throw Error(ErrorCode::coverage, "receiver " + std::to_string(i) + " cannot cancel subfile " +
                                             placement::to_string(c.label) + " in message from tx " +
                                             std::to_string(msg.tx));
      if (it->second.size() != acc.size())
        throw Error(ErrorCode::coverage, "length mismatch cancelling " + placement::to_string(c.label));
      acc ^= it->second;
    }
    if (!mine) throw Error(ErrorCode::internal, "message from tx " + std::to_string(msg.tx) + " has no part for receiver " + std::to_string(i));
    recovered.insert_or_assign(*mine, std::move(acc));
  }

  Bits file(layout.file_bits());
  for (const auto& label : placement::file_labels(layout.L(), want)) {
    const Bits* source = nullptr;
    if (auto it = cache.find(label); it != cache.end()) {
      source = &it->second;
    } else if (auto rt = recovered.find(label); rt != recovered.end()) {
      source = &rt->second;
    } else if (layout.size(label) == 0) {
      continue;
    } else {
      throw Error(ErrorCode::coverage,
                  "receiver " + std::to_string(i) + ": no message carries subfile " + placement::to_string(label));
    }
    if (source->size() != layout.size(label))
      throw Error(ErrorCode::coverage, "subfile " + placement::to_string(label) + " has wrong length");
    const std::uint64_t off = layout.offset(label);
    for (std::size_t k = 0; k < source->size(); ++k) file[off + k] = (*source)[k];
  }
  return file;
}

struct GroupReport {
  int r = 0;
  std::size_t message_count = 0;
  Rational tau;
};

struct ReceiverReport {
  int i = 0;
  bool ok = false;
  std::string detail;
};

struct DeliveryReport {
  std::vector<GroupReport> groups;
  std::vector<ReceiverReport> receivers;
  Rational tau;
  std::uint64_t file_bits = 0;
  std::vector<CodedMessage> messages;  // transmitted messages, group by group

  bool all_ok() const {
    return std::all_of(receivers.begin(), receivers.end(), [](const auto& rx) { return rx.ok; });
  }
};

struct SimulationOptions {
  std::uint64_t file_scale = 8;  // F = file_scale * minimal_file_size(ratios)
  CompositionRule rule = standard_composition;
};

/// Places the library, delivers every non-empty group in turn, decodes at
/// every actual receiver. Group r costs (worst receiver's desired subfiles) *
/// a_r / d_r, with d_r the per-user DoF of the aligned X-multicast channel.
inline DeliveryReport simulate(const NetworkConfig& cfg, const placement::CacheSpec& spec,
                               const placement::SplittingRatios& ratios, const Demand& demand, std::uint64_t seed,
                               const SimulationOptions& options = {}) {
  auto validation = placement::validate_ratios(cfg.L, ratios, spec);
  if (!validation.ok()) {
    std::string what;
    for (const auto& v : validation.violations) what += std::string(placement::to_string(v.constraint)) + " (" + v.detail + "); ";
    throw Error(ErrorCode::invalid_argument, "splitting ratios rejected: " + what);
  }
  check_demand(cfg, demand);
  for (int f : demand.d) {
    if (f >= spec.N)
      throw Error(ErrorCode::invalid_argument, "demand file " + std::to_string(f) + " outside library of N=" + std::to_string(spec.N));
  }
  const ExpandedConfig ecfg(cfg);
  const std::uint64_t F = placement::minimal_file_size(ratios) * options.file_scale;
  placement::Library library(spec.N, placement::FileLayout(ratios, F), seed);

  DeliveryReport report;
  report.file_bits = F;
  for (int r = 0; r < cfg.L; ++r) {
    GroupReport group{r, 0, Rational(0)};
    if (ratios[r] != 0) {
      auto msgs = generate_messages(ecfg, demand, r, options.rule);
      encode_payloads(msgs, library);
      std::size_t worst = 0;
      for (int i = 0; i < cfg.K; ++i) worst = std::max(worst, desired_messages(msgs, i).size());
      group.message_count = msgs.size();
      group.tau = Rational(static_cast<long long>(worst)) * ratios[r] / alignment::dof_limit(cfg.L, r);
      for (auto& m : msgs) report.messages.push_back(std::move(m));
    }
    report.tau += group.tau;
    report.groups.push_back(group);
  }

  for (int i = 0; i < cfg.K; ++i) {
    ReceiverReport rx{i, false, {}};
    try {
      auto store = placement::fill_cache(placement::receiver_cache(cfg, i, spec), library);
      Bits got = decode(i, report.messages, store, demand, library.layout());
      rx.ok = got == library.file(demand.d[i]);
      if (!rx.ok) rx.detail = "decoded bits differ from file " + std::to_string(demand.d[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::coverage && e.code() != ErrorCode::internal) throw;
      rx.detail = e.what();
    }
    report.receivers.push_back(std::move(rx));
  }
  return report;
}

}  // namespace cachenet::delivery
