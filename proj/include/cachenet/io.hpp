#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "alignment.hpp"
#include "delivery.hpp"
#include "ndt.hpp"
#include "placement.hpp"
#include "rational.hpp"

namespace cachenet::io {

using Json = nlohmann::ordered_json;
using cachenet::to_string;

inline std::string decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string decimal(const Rational& x) { return decimal(to_double(x)); }

inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

inline Json ratios_json(const placement::SplittingRatios& ratios) {
  Json out = Json::array();
  for (const auto& a : ratios.a) out.push_back(to_string(a));
  return out;
}

inline Json labels_json(const std::vector<placement::SubfileLabel>& labels) {
  Json out = Json::array();
  for (const auto& label : labels) out.push_back(placement::to_string(label));
  return out;
}

/// {K, L, N, ratios, txCaches: j -> labels, rxCaches: i -> labels}; rxCaches
/// also lists the virtual receivers of the expanded network.
inline Json placement_plan_json(const topology::NetworkConfig& cfg, const placement::CacheSpec& spec,
                                const placement::SplittingRatios& ratios) {
  Json doc;
  doc["K"] = cfg.K;
  doc["L"] = cfg.L;
  doc["N"] = spec.N;
  doc["ratios"] = ratios_json(ratios);
  Json tx = Json::object();
  for (int j = 0; j < cfg.transmitters(); ++j)
    tx[std::to_string(j)] = labels_json(placement::transmitter_cache(cfg, j, spec));
  doc["txCaches"] = tx;
  Json rx = Json::object();
  int lo = 0, hi = cfg.K - 1;
  if (cfg.kind == topology::Kind::linear) {
    lo = -cfg.L + 1;
    hi = cfg.K + cfg.L - 2;
  }
  for (int i = lo; i <= hi; ++i) rx[std::to_string(i)] = labels_json(placement::receiver_cache(cfg, i, spec));
  doc["rxCaches"] = rx;
  return doc;
}

inline Json message_json(const delivery::CodedMessage& msg) {
  Json m;
  m["r"] = msg.level;
  m["tx"] = msg.tx;
  m["group"] = msg.group;
  Json comp = Json::array();
  for (const auto& c : msg.composition) comp.push_back(placement::to_string(c.label));
  m["composition"] = comp;
  return m;
}

inline Json delivery_report_json(const delivery::DeliveryReport& report, bool dump_messages) {
  Json doc;
  Json groups = Json::array();
  for (const auto& g : report.groups) {
    Json entry;
    entry["r"] = g.r;
    entry["messageCount"] = g.message_count;
    entry["tauR"] = to_string(g.tau);
    groups.push_back(entry);
  }
  doc["groups"] = groups;
  Json receivers = Json::array();
  for (const auto& rx : report.receivers) {
    Json entry;
    entry["i"] = rx.i;
    entry["ok"] = rx.ok;
    if (!rx.ok) entry["detail"] = rx.detail;
    receivers.push_back(entry);
  }
  doc["receivers"] = receivers;
  doc["tau"] = to_string(report.tau);
  if (dump_messages) {
    Json msgs = Json::array();
    for (const auto& msg : report.messages) msgs.push_back(message_json(msg));
    doc["messages"] = msgs;
  }
  return doc;
}

inline std::string gap_text(const ndt::NdtSolution& sol) { return sol.gap ? to_string(*sol.gap) : "exact-match"; }

inline Json ndt_solution_json(const ndt::NdtSolution& sol) {
  Json doc;
  doc["tauUb"] = to_string(sol.tau_ub);
  doc["tauLb"] = to_string(sol.tau_lb);
  doc["gap"] = gap_text(sol);
  doc["ratios"] = ratios_json(sol.ratios);
  return doc;
}

inline Json sweep_json(const std::vector<ndt::NdtSolution>& rows) {
  Json doc = Json::array();
  for (const auto& sol : rows) {
    Json entry;
    entry["muR"] = to_string(sol.mu_r);
    Json body = ndt_solution_json(sol);
    for (auto& [k, v] : body.items()) entry[k] = v;
    doc.push_back(entry);
  }
  return doc;
}

/// Header muR,tauUb,tauLb,gap,a0..aL, then decimal plotting columns.
inline std::string sweep_csv(const std::vector<ndt::NdtSolution>& rows, int L) {
  std::ostringstream out;
  out << "muR,tauUb,tauLb,gap";
  for (int r = 0; r <= L; ++r) out << ",a" << r;
  out << ",muR_decimal,tauUb_decimal,tauLb_decimal,gap_decimal\n";
  for (const auto& sol : rows) {
    out << to_string(sol.mu_r) << ',' << to_string(sol.tau_ub) << ',' << to_string(sol.tau_lb) << ','
        << gap_text(sol);
    for (const auto& a : sol.ratios.a) out << ',' << to_string(a);
    out << ',' << decimal(sol.mu_r) << ',' << decimal(sol.tau_ub) << ',' << decimal(sol.tau_lb) << ','
        << (sol.gap ? decimal(*sol.gap) : std::string("1")) << '\n';
  }
  return out.str();
}

inline Json align_report_json(const alignment::AlignReport& report) {
  Json doc;
  doc["K"] = report.K;
  doc["L"] = report.L;
  doc["r"] = report.r;
  doc["n"] = report.n;
  doc["mode"] = alignment::to_string(report.mode);
  doc["Tn"] = report.T;
  doc["dofFinite"] = to_string(report.dof_finite);
  doc["dofLimit"] = to_string(report.dof_limit);
  Json trials = Json::array();
  for (const auto& t : report.trials) {
    Json entry;
    entry["seed"] = t.seed;
    entry["fullRankAllReceivers"] = t.full_rank_all;
    entry["minSigmaRatio"] = t.min_sigma_ratio ? Json(*t.min_sigma_ratio) : Json(nullptr);
    entry["minRank"] = t.min_rank;
    entry["alignedAllReceivers"] = t.aligned_all;
    entry["maxAlignmentResidual"] = t.max_residual ? Json(*t.max_residual) : Json(nullptr);
    trials.push_back(entry);
  }
  doc["trials"] = trials;
  return doc;
}

/// Splits CSV text into rows of fields (no quoting; none of the emitted fields need it).
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

inline std::string write_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += row[k];
    }
    out += '\n';
  }
  return out;
}

}  // namespace cachenet::io
