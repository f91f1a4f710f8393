#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "error.hpp"
#include "rational.hpp"
#include "topology.hpp"

namespace cachenet::placement {

using cachenet::to_string;
using topology::NetworkConfig;

/// Residue subset Q of {0..L-1}; bit q set means residue q is in Q.
using ResidueMask = std::uint32_t;

inline int cardinality(ResidueMask q) { return std::popcount(q); }

inline std::vector<int> residues_of(ResidueMask q) {
  std::vector<int> out;
  for (int bit = 0; q >> bit; ++bit) {
    if ((q >> bit) & 1u) out.push_back(bit);
  }
  return out;
}

inline ResidueMask mask_of(const std::vector<int>& residues) {
  ResidueMask q = 0;
  for (int r : residues) q |= ResidueMask{1} << r;
  return q;
}

/// Subfile W_{n,p,Q}: file n, transmitter residue p, cached at receivers whose
/// residue lies in Q.
struct SubfileLabel {
  int n = 0;
  int p = 0;
  ResidueMask Q = 0;

  int level() const { return cardinality(Q); }

  friend auto operator<=>(const SubfileLabel&, const SubfileLabel&) = default;
};

/// Wire format "n:p:Q", Q as sorted comma-separated residues ("0:1:" for Q empty).
inline std::string to_string(const SubfileLabel& label) {
  std::string out = std::to_string(label.n) + ":" + std::to_string(label.p) + ":";
  bool first = true;
  for (int q : residues_of(label.Q)) {
    if (!first) out += ",";
    out += std::to_string(q);
    first = false;
  }
  return out;
}

inline SubfileLabel parse_label(std::string_view text) {
  auto bad = [&] { return Error(ErrorCode::invalid_argument, "bad subfile label '" + std::string(text) + "'"); };
  auto c1 = text.find(':');
  if (c1 == std::string_view::npos) throw bad();
  auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw bad();
  auto to_int = [&](std::string_view s) {
    if (s.empty()) throw bad();
    int v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw bad();
      v = v * 10 + (c - '0');
    }
    return v;
  };
  SubfileLabel label;
  label.n = to_int(text.substr(0, c1));
  label.p = to_int(text.substr(c1 + 1, c2 - c1 - 1));
  std::string_view rest = text.substr(c2 + 1);
  int previous = -1;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    int q = to_int(rest.substr(0, comma));
    if (q <= previous || q >= 32) throw bad();
    label.Q |= ResidueMask{1} << q;
    previous = q;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
    if (rest.empty()) throw bad();
  }
  return label;
}

struct SplittingRatios {
  std::vector<Rational> a;  // a[r] for r = 0..L

  int L() const { return static_cast<int>(a.size()) - 1; }
  const Rational& operator[](int r) const { return a.at(r); }

  friend bool operator==(const SplittingRatios&, const SplittingRatios&) = default;
};

struct CacheSpec {
  int N = 1;
  Rational mu_t = 1;
  Rational mu_r = 0;
};

/// All (p, Q) pairs of one file in canonical order: p ascending, then Q mask ascending.
inline std::vector<SubfileLabel> file_labels(int L, int n) {
  std::vector<SubfileLabel> out;
  out.reserve(static_cast<std::size_t>(L) << L);
  for (int p = 0; p < L; ++p) {
    for (ResidueMask q = 0; q < (ResidueMask{1} << L); ++q) out.push_back({n, p, q});
  }
  return out;
}

inline std::vector<SubfileLabel> transmitter_cache(const NetworkConfig& cfg, int j, const CacheSpec& spec) {
  topology::check_transmitter(cfg, j);
  const int p = j % cfg.L;
  std::vector<SubfileLabel> out;
  for (int n = 0; n < spec.N; ++n) {
    for (ResidueMask q = 0; q < (ResidueMask{1} << cfg.L); ++q) out.push_back({n, p, q});
  }
  return out;
}

/// Cache of an actual receiver, or of a virtual receiver of a linear network
/// (which copies the actual receiver L positions inward).
inline std::vector<SubfileLabel> receiver_cache(const NetworkConfig& cfg, int i, const CacheSpec& spec) {
  int source = i;
  if (i < 0 || i >= cfg.K) {
    if (cfg.kind != topology::Kind::linear)
      throw Error(ErrorCode::index_out_of_range, "receiver " + std::to_string(i));
    source = topology::ExpandedConfig(cfg).mirror(i);
  }
  const int residue = source % cfg.L;
  std::vector<SubfileLabel> out;
  for (int n = 0; n < spec.N; ++n) {
    for (const auto& label : file_labels(cfg.L, n)) {
      if ((label.Q >> residue) & 1u) out.push_back(label);
    }
  }
  return out;
}

/// Labels of file d_i that actual receiver i does not hold.
inline std::vector<SubfileLabel> needed_subfiles(const NetworkConfig& cfg, int i, int d_i) {
  if (i < 0 || i >= cfg.K)
    throw Error(ErrorCode::not_applicable, "receiver " + std::to_string(i) + " is virtual and requests nothing");
  const int residue = i % cfg.L;
  std::vector<SubfileLabel> out;
  for (const auto& label : file_labels(cfg.L, d_i)) {
    if (!((label.Q >> residue) & 1u)) out.push_back(label);
  }
  return out;
}

enum class Constraint { length, nonnegative, file_size, receiver_cache, transmitter_region };

inline const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::length: return "length";
    case Constraint::nonnegative: return "nonnegative";
    case Constraint::file_size: return "file-size";
    case Constraint::receiver_cache: return "receiver-cache";
    case Constraint::transmitter_region: return "transmitter-region";
  }
  return "?";
}

struct Violation {
  Constraint constraint;
  Rational margin;  // signed amount by which the constraint is missed
  std::string detail;
};

struct ValidationReport {
  Rational file_size_total;  // L * sum_r C(L,r) a_r, must equal 1
  Rational receiver_load;    // L * sum_{r>=1} C(L-1,r-1) a_r, must be <= mu_R
  bool receiver_cache_tight = false;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_ratios(int L, const SplittingRatios& ratios, const CacheSpec& spec) {
  ValidationReport report;
  if (ratios.L() != L) {
    report.violations.push_back({Constraint::length, Rational(ratios.L() - L),
                                 "expected " + std::to_string(L + 1) + " ratios, got " + std::to_string(ratios.a.size())});
    return report;
  }
  for (int r = 0; r <= L; ++r) {
    if (ratios[r] < 0)
      report.violations.push_back({Constraint::nonnegative, ratios[r], "a_" + std::to_string(r) + " = " + to_string(ratios[r])});
  }
  for (int r = 0; r <= L; ++r) report.file_size_total += L * binomial(L, r) * ratios[r];
  for (int r = 1; r <= L; ++r) report.receiver_load += L * binomial(L - 1, r - 1) * ratios[r];

  if (report.file_size_total != 1) {
    Rational margin = report.file_size_total - 1;
    report.violations.push_back({Constraint::file_size, margin,
                                 "file-size sum is " + to_string(report.file_size_total) + ", expected 1/1"});
  }
  if (report.receiver_load > spec.mu_r) {
    Rational margin = report.receiver_load - spec.mu_r;
    report.violations.push_back({Constraint::receiver_cache, margin,
                                 "receiver load " + to_string(report.receiver_load) + " exceeds mu_R " + to_string(spec.mu_r)});
  }
  report.receiver_cache_tight = report.receiver_load == spec.mu_r;
  Rational floor_t(1, L);
  if (spec.mu_t < floor_t) {
    report.violations.push_back({Constraint::transmitter_region, spec.mu_t - floor_t,
                                 "mu_T " + to_string(spec.mu_t) + " below 1/L"});
  }
  return report;
}

/// Smallest F such that every a_r * F is an integer.
inline std::uint64_t minimal_file_size(const SplittingRatios& ratios) {
  Integer result = 1;
  for (const auto& a : ratios.a) result = boost::multiprecision::lcm(result, Integer(denominator(a)));
  if (result > std::numeric_limits<std::uint64_t>::max())
    throw Error(ErrorCode::invalid_argument, "ratio denominators too large");
  return result.convert_to<std::uint64_t>();
}

using Bits = boost::dynamic_bitset<>;

/// Bit layout of a file of F bits: subfiles stored contiguously in
/// `file_labels` order, subfile (p, Q) taking a_{|Q|} F bits.
class FileLayout {
 public:
  FileLayout(const SplittingRatios& ratios, std::uint64_t F) : L_(ratios.L()), F_(F) {
    std::uint64_t offset = 0;
    for (const auto& label : file_labels(L_, 0)) {
      Rational bits = ratios[label.level()] * F;
      if (denominator(bits) != 1 || bits < 0)
        throw Error(ErrorCode::invalid_argument, "F=" + std::to_string(F) + " does not split into whole bits");
      std::uint64_t size = numerator(bits).convert_to<std::uint64_t>();
      offsets_.push_back(offset);
      sizes_.push_back(size);
      offset += size;
    }
    if (offset != F_)
      throw Error(ErrorCode::invalid_argument,
                  "subfile sizes sum to " + std::to_string(offset) + " bits, file has " + std::to_string(F_));
  }

  int L() const { return L_; }
  std::uint64_t file_bits() const { return F_; }
  std::uint64_t size(const SubfileLabel& label) const { return sizes_.at(slot(label)); }
  std::uint64_t offset(const SubfileLabel& label) const { return offsets_.at(slot(label)); }

 private:
  std::size_t slot(const SubfileLabel& label) const {
    return (static_cast<std::size_t>(label.p) << L_) + label.Q;
  }

  int L_;
  std::uint64_t F_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint64_t> sizes_;
};

/// N files of pseudo-random bits, reproducible from the seed.
class Library {
 public:
  Library(int N, FileLayout layout, std::uint64_t seed) : layout_(std::move(layout)) {
    std::mt19937_64 rng(seed);
    files_.reserve(N);
    for (int n = 0; n < N; ++n) {
      Bits file(layout_.file_bits());
      for (std::size_t b = 0; b < file.size(); b += 64) {
        std::uint64_t word = rng();
        for (std::size_t k = 0; k < 64 && b + k < file.size(); ++k) file[b + k] = (word >> k) & 1u;
      }
      files_.push_back(std::move(file));
    }
  }

  int N() const { return static_cast<int>(files_.size()); }
  const FileLayout& layout() const { return layout_; }
  const Bits& file(int n) const { return files_.at(n); }

  Bits subfile(const SubfileLabel& label) const {
    const Bits& f = files_.at(label.n);
    std::uint64_t off = layout_.offset(label);
    std::uint64_t len = layout_.size(label);
    Bits out(len);
    for (std::uint64_t k = 0; k < len; ++k) out[k] = f[off + k];
    return out;
  }

 private:
  FileLayout layout_;
  std::vector<Bits> files_;
};

/// Materialized cache of one node: label -> payload (zero-length when a_{|Q|} = 0).
using CacheStore = std::map<SubfileLabel, Bits>;

inline CacheStore fill_cache(const std::vector<SubfileLabel>& labels, const Library& library) {
  CacheStore store;
  for (const auto& label : labels) store.emplace(label, library.subfile(label));
  return store;
}

}  // namespace cachenet::placement
