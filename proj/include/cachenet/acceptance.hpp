#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "alignment.hpp"
#include "delivery.hpp"
#include "dof.hpp"
#include "error.hpp"
#include "ndt.hpp"
#include "placement.hpp"
#include "rational.hpp"
#include "topology.hpp"

namespace cachenet::acceptance {

using cachenet::to_string;

/// The pieces of the caching scheme that the battery exercises. Mutation
/// testing swaps one of them for a perturbed copy.
struct Scheme {
  std::string name = "standard";
  ndt::SchemeCoefficients coeffs;
  delivery::CompositionRule rule = delivery::standard_composition;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;
};

struct BatteryOptions {
  bool quick = false;             // skip the depth-2 alignment runs
  bool stop_at_first_failure = false;
};

namespace detail {

inline std::string describe(const std::vector<int>& v) {
  std::string out = "{";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
  return out + "}";
}

/// Runs `body`, which fills pass/detail, and applies the runtime limit.
inline CriterionResult timed(int id, std::string name, double limit, const std::function<void(CriterionResult&)>& body) {
  CriterionResult res;
  res.id = id;
  res.name = std::move(name);
  res.limit_seconds = limit;
  auto start = std::chrono::steady_clock::now();
  try {
    body(res);
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (res.seconds >= limit) {
    res.pass = false;
    std::ostringstream msg;
    msg << "runtime " << res.seconds << " s exceeds " << limit << " s";
    res.detail = res.detail.empty() ? msg.str() : res.detail + "; " + msg.str();
  }
  return res;
}

inline Rational scheme_cost(const Scheme& s, int L, const placement::SplittingRatios& a) {
  Rational total = 0;
  for (int r = 0; r <= L; ++r) total += s.coeffs.cost(L, r) * a[r];
  return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Criteria

inline CriterionResult criterion1(const Scheme& s = {}) {
  return detail::timed(1, "L=3 closed form", 1.0, [&](CriterionResult& res) {
    const std::vector<Rational> grid{0, Rational(1, 6), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(5, 6), 1};
    const std::vector<Rational> expected{Rational(5, 3), Rational(11, 9), Rational(7, 9), Rational(5, 9),
                                         Rational(1, 3), Rational(1, 6), 0};
    res.pass = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      Rational got = ndt::optimize(3, grid[k], 1, s.coeffs).tau_ub;
      if (got != expected[k] || got != ndt::closed_form_L3(grid[k])) {
        res.pass = false;
        res.detail = "mu_R=" + to_string(grid[k]) + ": tauUb " + to_string(got) + ", expected " + to_string(expected[k]);
        return;
      }
    }
    res.detail = "7 grid points exact";
  });
}

inline CriterionResult criterion2(const Scheme& s = {}) {
  return detail::timed(2, "integer points", 1.0, [&](CriterionResult& res) {
    res.pass = true;
    int checked = 0;
    for (int L = 2; L <= 6; ++L) {
      for (int l = 0; l <= L; ++l) {
        auto ip = ndt::integer_point(L, l);
        Rational size = 0, load = 0;
        for (int r = 0; r <= L; ++r) {
          size += s.coeffs.size(L, r) * ip.ratios[r];
          load += s.coeffs.cache(L, r) * ip.ratios[r];
        }
        const std::string where = "L=" + std::to_string(L) + " l=" + std::to_string(l) + ": ";
        if (size != 1 || load > ip.mu_r) {
          res.pass = false;
          res.detail = where + "single-ratio placement infeasible (size " + to_string(size) + ", load " + to_string(load) + ")";
          return;
        }
        Rational tau = ndt::optimize(L, ip.mu_r, 1, s.coeffs).tau_ub;
        if (tau > ip.tau || (L == 3 && tau != ip.tau)) {
          res.pass = false;
          res.detail = where + "tauUb " + to_string(tau) + " vs integer-point value " + to_string(ip.tau);
          return;
        }
        ++checked;
      }
    }
    res.detail = std::to_string(checked) + " integer points";
  });
}

inline CriterionResult criterion3(const Scheme& s = {}) {
  return detail::timed(3, "bound sandwich", 5.0, [&](CriterionResult& res) {
    res.pass = true;
    Rational worst = 0;
    int points = 0;
    // L = 1 is included as well: there the sandwich collapses to equality,
    // which is the only check that pins optimality of the L = 1 placement.
    for (int L = 1; L <= 8; ++L) {
      const Rational factor(2 * L - 1, L);
      for (const auto& mu : ndt::mu_grid(101)) {
        Rational tau = ndt::optimize(L, mu, 1, s.coeffs).tau_ub;
        Rational lb = 1 - mu;
        if (tau < lb || tau > factor * lb) {
          res.pass = false;
          res.detail = "L=" + std::to_string(L) + " mu_R=" + to_string(mu) + ": tauUb " + to_string(tau) +
                       " outside [" + to_string(lb) + ", " + to_string(factor * lb) + "]";
          return;
        }
        if (lb > 0 && tau / lb > worst) worst = tau / lb;
        ++points;
      }
    }
    res.detail = std::to_string(points) + " points, largest ratio " + to_string(worst);
  });
}

/// The r = 1 coded messages of the 6x4, L = 3 example with demand (0,1,2,3),
/// as "tx|group|labels" with labels in n:p:Q form (A..D are files 0..3).
inline const std::vector<std::string>& example_messages() {
  static const std::vector<std::string> table{
      "0|-2,0|0:0:1",      "0|-1,0|0:0:2",      "1|-1,0|0:1:2",      "1|-1,1|1:1:2",
      "1|0,1|0:1:1 1:1:0", "2|0,1|0:2:1 1:2:0", "2|0,2|0:2:2 2:2:0", "2|1,2|1:2:2 2:2:1",
      "3|1,2|1:0:2 2:0:1", "3|1,3|1:0:0 3:0:1", "3|2,3|2:0:0 3:0:2", "4|2,3|2:1:0 3:1:2",
      "4|2,4|2:1:1",       "4|3,4|3:1:1",       "5|3,4|3:2:1",       "5|3,5|3:2:2",
  };
  return table;
}

inline std::string message_key(const delivery::CodedMessage& msg) {
  std::string out = std::to_string(msg.tx) + "|";
  for (std::size_t k = 0; k < msg.group.size(); ++k) out += (k ? "," : "") + std::to_string(msg.group[k]);
  out += "|";
  for (std::size_t k = 0; k < msg.composition.size(); ++k)
    out += (k ? " " : "") + placement::to_string(msg.composition[k].label);
  return out;
}

inline CriterionResult criterion4(const Scheme& s = {}) {
  return detail::timed(4, "6x4 example messages", 1.0, [&](CriterionResult& res) {
    const auto ecfg = topology::expand(topology::make_linear(4, 3));
    if (ecfg.virtual_receivers() != std::vector<int>{-2, -1, 4, 5}) {
      res.detail = "virtual receivers " + detail::describe(ecfg.virtual_receivers());
      return;
    }
    auto msgs = delivery::generate_messages(ecfg, delivery::Demand::identity(4), 1, s.rule);
    std::multiset<std::string> got, want(example_messages().begin(), example_messages().end());
    for (const auto& m : msgs) got.insert(message_key(m));
    if (got != want) {
      std::string diff;
      for (const auto& k : got)
        if (!want.count(k)) diff += " unexpected[" + k + "]";
      for (const auto& k : want)
        if (!got.count(k)) diff += " missing[" + k + "]";
      res.detail = std::to_string(msgs.size()) + " messages;" + diff;
      return;
    }
    res.pass = true;
    res.detail = "16 messages match";
  });
}

inline CriterionResult criterion5(const Scheme& s = {}, std::uint64_t seed = 20240601) {
  return detail::timed(5, "bit-exact delivery", 30.0, [&](CriterionResult& res) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    res.pass = true;
    int receivers = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int K = pick(2, 8);
      const int L = pick(1, std::min(K, 4));
      const int den = pick(1, 12);
      const Rational mu(pick(0, den), den);
      const int N = K + pick(0, 2);
      delivery::Demand demand;
      for (int i = 0; i < K; ++i) demand.d.push_back(pick(0, N - 1));
      const std::uint64_t file_seed = rng();

      std::string where = "trial " + std::to_string(trial) + " (K=" + std::to_string(K) + " L=" + std::to_string(L) +
                          " mu_R=" + to_string(mu) + " d=" + detail::describe(demand.d) + "): ";
      try {
        auto sol = ndt::optimize(L, mu, 1, s.coeffs);
        delivery::SimulationOptions opts;
        opts.rule = s.rule;
        auto report = delivery::simulate(topology::make_linear(K, L), {N, 1, mu}, sol.ratios, demand, file_seed, opts);
        for (const auto& rx : report.receivers) {
          if (!rx.ok) {
            res.pass = false;
            res.detail = where + "receiver " + std::to_string(rx.i) + ": " + rx.detail;
            return;
          }
        }
        Rational expected = detail::scheme_cost(s, L, sol.ratios);
        if (report.tau != expected) {
          res.pass = false;
          res.detail = where + "simulated NDT " + to_string(report.tau) + " != sum c_r a_r = " + to_string(expected);
          return;
        }
        receivers += K;
      } catch (const std::exception& e) {
        res.pass = false;
        res.detail = where + e.what();
        return;
      }
    }
    res.detail = "200 trials, " + std::to_string(receivers) + " receivers decoded";
  });
}

inline CriterionResult criterion6(const alignment::AlignmentOptions& options = {}) {
  return detail::timed(6, "alignment feasibility", 60.0, [&](CriterionResult& res) {
    res.pass = true;
    std::string detail;
    for (auto mode : {alignment::FieldMode::complex_float, alignment::FieldMode::prime_field}) {
      for (int r = 0; r <= 2; ++r) {
        std::string where = std::string(alignment::to_string(mode)) + " r=" + std::to_string(r);
        try {
          auto report = alignment::run_alignment(4, 3, r, 1, mode, 20, 1, options);
          int good = 0;
          std::optional<double> worst_res;
          for (const auto& t : report.trials) {
            if (t.square_all && t.full_rank_all && t.aligned_all) ++good;
            if (t.max_residual) worst_res = std::max(worst_res.value_or(0.0), *t.max_residual);
          }
          bool ok = good == 20 && (r != 1 || report.T == 70);
          res.pass = res.pass && ok;
          std::ostringstream msg;
          msg << where << ": T=" << report.T << " " << good << "/20";
          if (worst_res) msg << " maxResidual=" << *worst_res;
          detail += (detail.empty() ? "" : "; ") + msg.str();
        } catch (const Error& e) {
          res.pass = false;
          detail += (detail.empty() ? "" : "; ") + where + ": " + e.what();
        }
      }
    }
    res.detail = detail;
  });
}

inline CriterionResult criterion7() {
  return detail::timed(7, "DoF identity", 1.0, [&](CriterionResult& res) {
    res.pass = true;
    auto fail = [&](std::string why) {
      res.pass = false;
      res.detail = std::move(why);
    };
    for (int L = 1; L <= 8; ++L) {
      for (int r = 0; r <= L - 1; ++r) {
        Rational want(L * binomial(L - 1, r), L * binomial(L - 1, r) + binomial(L - 1, r + 1));
        if (alignment::dof_limit(L, r) != want)
          return fail("dof_limit(" + std::to_string(L) + "," + std::to_string(r) + ") = " +
                      to_string(alignment::dof_limit(L, r)) + ", expected " + to_string(want));
      }
    }
    if (alignment::dof_limit(3, 1) != Rational(6, 7)) return fail("dof_limit(3,1) != 6/7");
    for (int L = 1; L <= 8; ++L) {
      for (int K = L; K <= 8; ++K) {
        for (int r = 0; r <= L - 1; ++r) {
          const Rational limit = alignment::dof_limit(L, r);
          const bool grows = alignment::extension_exponent(K, L, r) > 0;
          std::optional<Rational> prev;
          for (int n = 1; n <= 3; ++n) {
            Rational d = alignment::dof_finite(K, L, r, n);
            std::string where = "K=" + std::to_string(K) + " L=" + std::to_string(L) + " r=" + std::to_string(r) +
                                " n=" + std::to_string(n) + ": ";
            if (d > limit) return fail(where + "dof_finite above the limit");
            // Without interference channels to align (r = L-1) the construction is exact at every depth.
            if (!grows && d != limit) return fail(where + "dof_finite differs from the limit");
            if (grows && (d >= limit || (prev && d <= *prev))) return fail(where + "dof_finite not strictly increasing below the limit");
            prev = d;
          }
        }
      }
    }
    res.detail = "limits exact for L<=8, dof_finite monotone for n=1..3";
  });
}

inline CriterionResult criterion8(const CriterionResult& c6, const CriterionResult& c7) {
  return detail::timed(8, "asymptotic DoF substitute", 1.0, [&](CriterionResult& res) {
    res.pass = c6.pass && c7.pass;
    res.detail = "convergence to the limit is not reproduced numerically; rests on criteria 6 (" +
                 std::string(c6.pass ? "pass" : "fail") + ") and 7 (" + (c7.pass ? "pass" : "fail") + ")";
  });
}

inline CriterionResult criterion9() {
  return detail::timed(9, "monomial distinctness", 5.0, [&](CriterionResult& res) {
    const auto ecfg = topology::expand(topology::make_linear(4, 3));
    auto msgs = delivery::generate_messages(ecfg, delivery::Demand::identity(4), 1);
    res.pass = true;
    for (int i = 0; i < 4; ++i) {
      auto row = alignment::row_monomials(ecfg, msgs, 1, 1, i);
      if (row.size() != 70 || !alignment::monomials_distinct(row)) {
        res.pass = false;
        res.detail = "receiver " + std::to_string(i) + ": " + std::to_string(row.size()) + " entries, distinct=" +
                     (alignment::monomials_distinct(row) ? "yes" : "no");
        return;
      }
    }
    res.detail = "70 distinct monomials at each of 4 receivers";
  });
}

// ---------------------------------------------------------------------------
// Mutation sensitivity

/// Perturbs coefficient (L, r) of one of the scheme's LP coefficient functions.
inline Scheme perturb(const std::string& which, int L, int r, int delta) {
  Scheme s;
  s.name = which + "(" + std::to_string(L) + "," + std::to_string(r) + ")" + (delta > 0 ? "+" : "") + std::to_string(delta);
  auto shift = [L, r, delta](std::function<std::int64_t(int, int)> base) {
    return [base, L, r, delta](int l, int q) { return base(l, q) + ((l == L && q == r) ? delta : 0); };
  };
  if (which == "cost") s.coeffs.cost = shift(s.coeffs.cost);
  if (which == "size") s.coeffs.size = shift(s.coeffs.size);
  if (which == "cache") s.coeffs.cache = shift(s.coeffs.cache);
  return s;
}

inline std::vector<Scheme> mutants() {
  std::vector<Scheme> out;
  const Scheme base;
  for (int L = 1; L <= 4; ++L) {
    for (int r = 0; r <= L; ++r) {
      for (int delta : {1, -1}) {
        if (r < L) out.push_back(perturb("cost", L, r, delta));
        if (base.coeffs.size(L, r) + delta >= 0) out.push_back(perturb("size", L, r, delta));
        if (base.coeffs.cache(L, r) + delta >= 0) out.push_back(perturb("cache", L, r, delta));
      }
    }
  }

  using topology::ExpandedConfig;
  auto rule = [&](std::string name, delivery::CompositionRule fn) {
    Scheme s;
    s.name = std::move(name);
    s.rule = std::move(fn);
    out.push_back(std::move(s));
  };
  rule("rule: p from receiver", [](const ExpandedConfig& e, int j, const std::vector<int>& g, int i, int f) {
    auto label = delivery::standard_composition(e, j, g, i, f);
    label.p = e.residue(i);
    return label;
  });
  rule("rule: Q keeps own residue", [](const ExpandedConfig& e, int j, const std::vector<int>& g, int i, int f) {
    auto label = delivery::standard_composition(e, j, g, i, f);
    label.Q |= placement::ResidueMask{1} << e.residue(i);
    return label;
  });
  rule("rule: Q ignores virtual members", [](const ExpandedConfig& e, int j, const std::vector<int>& g, int i, int f) {
    placement::ResidueMask q = 0;
    for (int m : g)
      if (e.is_actual(m) && m != i) q |= placement::ResidueMask{1} << e.residue(m);
    return placement::SubfileLabel{f, j % e.L(), q};
  });
  rule("rule: own index as file", [](const ExpandedConfig& e, int j, const std::vector<int>& g, int i, int) {
    return delivery::standard_composition(e, j, g, i, i);
  });
  return out;
}

struct MutantOutcome {
  std::string name;
  bool caught = false;
  int caught_by = 0;  // first of criteria 1-5 that failed
};

/// Runs criteria 1-5 against `s`, stopping at the first failure.
inline MutantOutcome challenge(const Scheme& s) {
  MutantOutcome out{s.name, false, 0};
  const std::vector<std::function<CriterionResult()>> battery{
      [&] { return criterion1(s); }, [&] { return criterion2(s); }, [&] { return criterion3(s); },
      [&] { return criterion4(s); }, [&] { return criterion5(s); }};
  for (std::size_t k = 0; k < battery.size(); ++k) {
    if (!battery[k]().pass) {
      out.caught = true;
      out.caught_by = static_cast<int>(k) + 1;
      break;
    }
  }
  return out;
}

inline CriterionResult criterion10() {
  return detail::timed(10, "mutation sensitivity", 30.0, [&](CriterionResult& res) {
    auto list = mutants();
    std::vector<int> by(6, 0);
    std::string survivors;
    for (const auto& m : list) {
      auto outcome = challenge(m);
      if (outcome.caught) {
        ++by[outcome.caught_by];
      } else {
        survivors += " " + outcome.name;
      }
    }
    res.pass = survivors.empty();
    std::ostringstream msg;
    msg << list.size() << " mutants; caught by criteria 1-5: " << by[1] << "/" << by[2] << "/" << by[3] << "/" << by[4]
        << "/" << by[5];
    if (!survivors.empty()) msg << "; survivors:" << survivors;
    res.detail = msg.str();
  });
}

// ---------------------------------------------------------------------------
// Battery

/// Depth-2 alignment of the 6x4 network (T_2 = 1113), one seed per field mode.
inline CriterionResult depth_two_check(const alignment::AlignmentOptions& options = {}) {
  CriterionResult res = detail::timed(0, "depth-2 alignment", 600.0, [&](CriterionResult& out) {
    out.pass = true;
    for (auto mode : {alignment::FieldMode::prime_field, alignment::FieldMode::complex_float}) {
      auto report = alignment::run_alignment(4, 3, 1, 2, mode, 1, 1, options);
      out.pass = out.pass && report.all_pass();
      out.detail += std::string(out.detail.empty() ? "" : "; ") + alignment::to_string(mode) + " T=" +
                    std::to_string(report.T) + (report.all_pass() ? " ok" : " FAILED");
    }
  });
  return res;
}

/// Criteria 1-10 for the given scheme (which only affects 1-5), then the
/// depth-2 alignment run unless quick.
inline std::vector<CriterionResult> run_battery(const Scheme& s = {}, const BatteryOptions& options = {}) {
  std::vector<CriterionResult> out;
  auto add = [&](CriterionResult r) {
    out.push_back(std::move(r));
    return out.back().pass || !options.stop_at_first_failure;
  };
  if (!add(criterion1(s)) || !add(criterion2(s)) || !add(criterion3(s)) || !add(criterion4(s)) || !add(criterion5(s)))
    return out;
  auto c6 = criterion6();
  auto c7 = criterion7();
  if (!add(c6) || !add(c7) || !add(criterion8(c6, c7)) || !add(criterion9()) || !add(criterion10())) return out;
  if (!options.quick) add(depth_two_check());
  return out;
}

inline bool all_pass(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

inline std::string format_line(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.id ? "criterion " + std::to_string(r.id) : std::string("supplement")) << (r.id >= 10 ? " " : "  ")
      << (r.pass ? "PASS" : "FAIL") << "  " << r.name << " (";
  out.setf(std::ios::fixed);
  out.precision(3);
  out << r.seconds << " s): " << r.detail;
  return out.str();
}

}  // namespace cachenet::acceptance
