#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "delivery.hpp"
#include "dof.hpp"
#include "error.hpp"
#include "placement.hpp"
#include "rational.hpp"
#include "topology.hpp"

namespace cachenet::alignment {

using delivery::CodedMessage;
using placement::ResidueMask;
using topology::ExpandedConfig;

// ---------------------------------------------------------------------------
// Scalar fields

/// Integers modulo the Mersenne prime 2^31 - 1.
struct ModPrime {
  static constexpr std::uint64_t p = 2147483647u;
  std::uint32_t v = 0;

  ModPrime() = default;
  explicit ModPrime(std::uint64_t x) : v(static_cast<std::uint32_t>(x % p)) {}

  /// x < 2^62.
  static ModPrime reduce(std::uint64_t x) {
    x = (x & p) + (x >> 31);
    x = (x & p) + (x >> 31);
    ModPrime out;
    out.v = static_cast<std::uint32_t>(x >= p ? x - p : x);
    return out;
  }

  friend ModPrime operator+(ModPrime a, ModPrime b) { return reduce(std::uint64_t{a.v} + b.v); }
  friend ModPrime operator-(ModPrime a, ModPrime b) { return reduce(std::uint64_t{a.v} + p - b.v); }
  friend ModPrime operator*(ModPrime a, ModPrime b) { return reduce(std::uint64_t{a.v} * b.v); }
  ModPrime& operator*=(ModPrime b) { return *this = *this * b; }
  friend bool operator==(ModPrime a, ModPrime b) { return a.v == b.v; }

  ModPrime inverse() const {
    ModPrime result(1), base = *this;
    for (std::uint64_t e = p - 2; e; e >>= 1) {
      if (e & 1) result *= base;
      base *= base;
    }
    return result;
  }
};

enum class FieldMode { complex_float, prime_field };

inline const char* to_string(FieldMode mode) { return mode == FieldMode::complex_float ? "float" : "prime"; }

inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Channel gains and basis entries of unit modulus with uniform phase.
struct ComplexField {
  using Scalar = std::complex<double>;
  static constexpr FieldMode mode = FieldMode::complex_float;
  static Scalar one() { return {1.0, 0.0}; }
  static Scalar draw(std::mt19937_64& rng) { return std::polar(1.0, 2.0 * std::numbers::pi * unit_uniform(rng)); }
};

/// Nonzero residues, uniform.
struct PrimeField {
  using Scalar = ModPrime;
  static constexpr FieldMode mode = FieldMode::prime_field;
  static Scalar one() { return ModPrime(1); }
  static Scalar draw(std::mt19937_64& rng) { return ModPrime(1 + rng() % (ModPrime::p - 1)); }
};

/// Column-major dense matrix.
template <class S>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<S> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  S& operator()(std::size_t row, std::size_t col) { return data[col * rows + row]; }
  const S& operator()(std::size_t row, std::size_t col) const { return data[col * rows + row]; }
  S* column(std::size_t col) { return data.data() + col * rows; }
  const S* column(std::size_t col) const { return data.data() + col * rows; }

  void append_column(const S* values) {
    data.insert(data.end(), values, values + rows);
    ++cols;
  }
};

// ---------------------------------------------------------------------------
// Message sets and interference channel sets

/// Strictly increasing residue tuple (q_0, ..., q_r).
using MessageSet = std::vector<int>;

inline std::vector<MessageSet> message_sets(int L, int r) {
  check_level(L, r);
  std::vector<int> all;
  for (int q = 0; q < L; ++q) all.push_back(q);
  return delivery::subsets_of_size(all, r + 1);
}

inline MessageSet classify_message(const ExpandedConfig& ecfg, const CodedMessage& msg) {
  MessageSet q;
  for (int i : msg.group) q.push_back(ecfg.residue(i));
  std::sort(q.begin(), q.end());
  return q;
}

using Channel = std::pair<int, int>;  // (receiver, transmitter), receiver possibly virtual

/// Channels (i, j) with i in R_j^e but outside the group of j's message in set
/// Q; sorted by (i, j). Beamformers of set Q are built from these.
inline std::vector<Channel> interference_matrix_set(const ExpandedConfig& ecfg, const MessageSet& Q) {
  const ResidueMask mask = placement::mask_of(Q);
  std::vector<Channel> out;
  for (int j = 0; j < ecfg.transmitters(); ++j) {
    for (int i : ecfg.rx_set(j)) {
      if (!((mask >> ecfg.residue(i)) & 1u)) out.emplace_back(i, j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Instances

inline std::uint64_t default_size_cap() {
  if (const char* env = std::getenv("CACHENET_SIZE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 5000;
}

template <class Field>
struct AlignmentInstance {
  using Scalar = typename Field::Scalar;

  int K = 0, L = 0, r = 0, n = 1;
  int E = 0;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  std::map<Channel, std::vector<Scalar>> channels;
  std::map<MessageSet, std::vector<Scalar>> basis;

  const std::vector<Scalar>& channel(int i, int j) const {
    auto it = channels.find({i, j});
    if (it == channels.end())
      throw Error(ErrorCode::internal, "no channel from tx " + std::to_string(j) + " to rx " + std::to_string(i));
    return it->second;
  }
};

/// Draws T_n-long diagonal channels for every (actual or virtual) link of the
/// expanded network and one basis vector per message set.
template <class Field>
AlignmentInstance<Field> build_instance(int K, int L, int r, int n, std::uint64_t seed,
                                        std::uint64_t size_cap = default_size_cap()) {
  const auto ecfg = topology::expand(topology::make_linear(K, L));
  const Integer T = symbol_extension(K, L, r, n);
  if (T > size_cap)
    throw Error(ErrorCode::size_cap_exceeded,
                "T_n = " + T.str() + " exceeds the size cap " + std::to_string(size_cap));
  AlignmentInstance<Field> inst;
  inst.K = K;
  inst.L = L;
  inst.r = r;
  inst.n = n;
  inst.E = extension_exponent(K, L, r);
  inst.T = T.convert_to<std::size_t>();
  inst.seed = seed;
  std::mt19937_64 rng(seed);
  for (int j = 0; j < ecfg.transmitters(); ++j) {
    for (int i : ecfg.rx_set(j)) {
      auto& diag = inst.channels[{i, j}];
      diag.resize(inst.T);
      for (auto& h : diag) h = Field::draw(rng);
    }
  }
  for (const auto& Q : message_sets(L, r)) {
    auto& b = inst.basis[Q];
    b.resize(inst.T);
    for (auto& x : b) x = Field::draw(rng);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Beamformers

/// Exponent tuples alpha in [1, m]^E, row-major lexicographic (last index fastest).
inline std::vector<std::vector<int>> exponent_tuples(int E, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(E, 1);
  while (true) {
    out.push_back(alpha);
    int k = E - 1;
    while (k >= 0 && alpha[k] == m) alpha[k--] = 1;
    if (k < 0) break;
    ++alpha[k];
  }
  return out;
}

template <class Field>
struct VectorSet {
  std::vector<Channel> channels;               // H_Q, the order alpha refers to
  std::vector<std::vector<int>> exponents;     // alpha per vector
  Matrix<typename Field::Scalar> vectors;      // T x |set|
};

/// V_Q(m) = { prod_{(i,j) in H_Q} H_ij^alpha_ij b_Q : 1 <= alpha_ij <= m }.
template <class Field>
VectorSet<Field> beamformer_set(const AlignmentInstance<Field>& inst, const ExpandedConfig& ecfg, const MessageSet& Q,
                                int m) {
  using Scalar = typename Field::Scalar;
  VectorSet<Field> out;
  out.channels = interference_matrix_set(ecfg, Q);
  out.exponents = exponent_tuples(static_cast<int>(out.channels.size()), m);
  const std::size_t T = inst.T;

  // powers[c][a-1] = H_c^a, a = 1..m
  std::vector<std::vector<std::vector<Scalar>>> powers(out.channels.size());
  for (std::size_t c = 0; c < out.channels.size(); ++c) {
    const auto& h = inst.channel(out.channels[c].first, out.channels[c].second);
    powers[c].push_back(h);
    for (int a = 2; a <= m; ++a) {
      std::vector<Scalar> next(T);
      for (std::size_t t = 0; t < T; ++t) next[t] = powers[c].back()[t] * h[t];
      powers[c].push_back(std::move(next));
    }
  }

  const auto& b = inst.basis.at(Q);
  out.vectors = Matrix<Scalar>(T, 0);
  out.vectors.data.reserve(T * out.exponents.size());
  std::vector<Scalar> column(T);
  for (const auto& alpha : out.exponents) {
    column = b;
    for (std::size_t c = 0; c < alpha.size(); ++c) {
      const auto& pw = powers[c][alpha[c] - 1];
      for (std::size_t t = 0; t < T; ++t) column[t] *= pw[t];
    }
    out.vectors.append_column(column.data());
  }
  return out;
}

/// V_Q(n) and V_Q(n+1) for every message set of the instance's level.
template <class Field>
struct BeamformerBank {
  std::map<MessageSet, VectorSet<Field>> transmit;   // V_Q(n)
  std::map<MessageSet, VectorSet<Field>> receive;    // V_Q(n+1)
};

template <class Field>
std::pair<VectorSet<Field>, VectorSet<Field>> beamformers(const AlignmentInstance<Field>& inst,
                                                          const ExpandedConfig& ecfg, const MessageSet& Q) {
  return {beamformer_set(inst, ecfg, Q, inst.n), beamformer_set(inst, ecfg, Q, inst.n + 1)};
}

template <class Field>
BeamformerBank<Field> make_bank(const AlignmentInstance<Field>& inst, const ExpandedConfig& ecfg) {
  BeamformerBank<Field> bank;
  for (const auto& Q : message_sets(inst.L, inst.r)) {
    auto [tx, rx] = beamformers(inst, ecfg, Q);
    bank.transmit.emplace(Q, std::move(tx));
    bank.receive.emplace(Q, std::move(rx));
  }
  return bank;
}

// ---------------------------------------------------------------------------
// Receive matrices

/// What one column of a receive matrix is: H_ij v for a desired message from
/// transmitter `tx`, or an interference-space vector (tx = -1).
struct ColumnInfo {
  bool desired = false;
  int tx = -1;
  MessageSet Q;
  std::vector<int> alpha;
};

/// Column order: desired block (transmitters of T_i ascending, their messages
/// in generation order, beamformers in alpha order), then one V_Q(n+1) block
/// per message set not containing the receiver's residue.
inline std::vector<ColumnInfo> receive_layout(const ExpandedConfig& ecfg, const std::vector<CodedMessage>& msgs, int r,
                                              int n, int i) {
  if (!ecfg.is_actual(i)) throw Error(ErrorCode::not_applicable, "receiver " + std::to_string(i) + " is virtual");
  const int E = extension_exponent(ecfg.K(), ecfg.L(), r);
  const auto alpha_n = exponent_tuples(E, n);
  const auto alpha_n1 = exponent_tuples(E, n + 1);
  std::vector<ColumnInfo> out;
  for (int j : ecfg.tx_set(i)) {
    for (const auto& msg : msgs) {
      if (msg.level != r)
        throw Error(ErrorCode::internal, "message of level " + std::to_string(msg.level) + " in a level-" + std::to_string(r) + " matrix");
      if (msg.tx != j || std::find(msg.group.begin(), msg.group.end(), i) == msg.group.end()) continue;
      auto Q = classify_message(ecfg, msg);
      for (const auto& a : alpha_n) out.push_back({true, j, Q, a});
    }
  }
  const int own = ecfg.residue(i);
  for (const auto& Q : message_sets(ecfg.L(), r)) {
    if (std::find(Q.begin(), Q.end(), own) != Q.end()) continue;
    for (const auto& a : alpha_n1) out.push_back({false, -1, Q, a});
  }
  return out;
}

template <class Field>
struct ReceiveMatrix {
  int receiver = 0;
  std::vector<ColumnInfo> columns;
  Matrix<typename Field::Scalar> desire;
  Matrix<typename Field::Scalar> undesire;

  /// [A_desire, A_undesire].
  Matrix<typename Field::Scalar> full() const {
    Matrix<typename Field::Scalar> a = desire;
    a.data.insert(a.data.end(), undesire.data.begin(), undesire.data.end());
    a.cols += undesire.cols;
    return a;
  }
};

template <class Field>
ReceiveMatrix<Field> receive_matrix(const AlignmentInstance<Field>& inst, const BeamformerBank<Field>& bank,
                                    const ExpandedConfig& ecfg, const std::vector<CodedMessage>& msgs, int i) {
  using Scalar = typename Field::Scalar;
  ReceiveMatrix<Field> out;
  out.receiver = i;
  out.columns = receive_layout(ecfg, msgs, inst.r, inst.n, i);
  out.desire = Matrix<Scalar>(inst.T, 0);
  out.undesire = Matrix<Scalar>(inst.T, 0);

  // Each alpha tuple indexes V_Q(m) at its row-major position.
  auto index_of = [](const std::vector<int>& alpha, int m) {
    std::size_t idx = 0;
    for (int a : alpha) idx = idx * m + (a - 1);
    return idx;
  };
  std::vector<Scalar> column(inst.T);
  for (const auto& info : out.columns) {
    if (info.desired) {
      const auto& v = bank.transmit.at(info.Q).vectors;
      const Scalar* src = v.column(index_of(info.alpha, inst.n));
      const auto& h = inst.channel(i, info.tx);
      for (std::size_t t = 0; t < inst.T; ++t) column[t] = h[t] * src[t];
      out.desire.append_column(column.data());
    } else {
      const auto& v = bank.receive.at(info.Q).vectors;
      out.undesire.append_column(v.column(index_of(info.alpha, inst.n + 1)));
    }
  }

  const Integer want_desire = desired_columns(inst.K, inst.L, inst.r, inst.n);
  const Integer want_undesire = interference_columns(inst.K, inst.L, inst.r, inst.n);
  if (Integer(out.desire.cols) != want_desire || Integer(out.undesire.cols) != want_undesire ||
      out.desire.cols + out.undesire.cols != inst.T)
    throw Error(ErrorCode::internal, "receive matrix of rx " + std::to_string(i) + " is " + std::to_string(inst.T) +
                                         " x (" + std::to_string(out.desire.cols) + " + " +
                                         std::to_string(out.undesire.cols) + "), expected " + want_desire.str() +
                                         " + " + want_undesire.str());
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic structure

/// Variable of a row monomial: channel gain h_ij(tau) or basis entry b_Q(tau).
struct Variable {
  int kind = 0;  // 0 channel, 1 basis
  int i = 0;
  int j = 0;
  ResidueMask Q = 0;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using Monomial = std::map<Variable, int>;

/// Monomial of one receive-matrix column, identical in every row.
inline Monomial column_monomial(const ExpandedConfig& ecfg, const ColumnInfo& info, int i) {
  Monomial m;
  const auto channels = interference_matrix_set(ecfg, info.Q);
  for (std::size_t c = 0; c < channels.size(); ++c) m[{0, channels[c].first, channels[c].second, 0}] += info.alpha[c];
  if (info.desired) m[{0, i, info.tx, 0}] += 1;
  m[{1, 0, 0, placement::mask_of(info.Q)}] += 1;
  return m;
}

inline std::vector<Monomial> row_monomials(const ExpandedConfig& ecfg, const std::vector<CodedMessage>& msgs, int r,
                                           int n, int i) {
  std::vector<Monomial> out;
  for (const auto& info : receive_layout(ecfg, msgs, r, n, i)) out.push_back(column_monomial(ecfg, info, i));
  return out;
}

inline bool monomials_distinct(std::vector<Monomial> monomials) {
  std::sort(monomials.begin(), monomials.end());
  return std::adjacent_find(monomials.begin(), monomials.end()) == monomials.end();
}

// ---------------------------------------------------------------------------
// Rank and alignment checks

struct RankDiagnostic {
  bool full_rank = false;
  std::size_t rank = 0;
  std::optional<double> min_sigma_ratio;  // float mode only
};

/// Full rank iff sigma_min > threshold * sigma_max.
inline RankDiagnostic verify_full_rank(const Matrix<std::complex<double>>& a, double threshold = 1e-9) {
  RankDiagnostic diag;
  if (a.rows != a.cols) throw Error(ErrorCode::invalid_argument, "rank check expects a square matrix");
  if (a.rows == 0) return {true, 0, 1.0};
  Eigen::Map<const Eigen::MatrixXcd> view(a.data.data(), static_cast<Eigen::Index>(a.rows),
                                          static_cast<Eigen::Index>(a.cols));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(view);
  const auto& sigma = svd.singularValues();
  const double largest = sigma.maxCoeff();
  const double smallest = sigma.minCoeff();
  diag.min_sigma_ratio = largest > 0 ? smallest / largest : 0.0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > threshold * largest) ++diag.rank;
  }
  diag.full_rank = *diag.min_sigma_ratio > threshold;
  return diag;
}

/// Exact rank by Gaussian elimination modulo the prime. Works on columns
/// (rank A = rank A^T) so the inner loop stays contiguous.
inline std::size_t rank_mod_prime(Matrix<ModPrime> a) {
  const std::size_t rows = a.rows, cols = a.cols;
  std::size_t rank = 0;
  for (std::size_t row = 0; row < rows && rank < cols; ++row) {
    std::size_t pivot = rank;
    while (pivot < cols && a(row, pivot).v == 0) ++pivot;
    if (pivot == cols) continue;
    if (pivot != rank) std::swap_ranges(a.column(pivot), a.column(pivot) + rows, a.column(rank));
    const ModPrime* pc = a.column(rank);
    const ModPrime inv = pc[row].inverse();
    for (std::size_t c = rank + 1; c < cols; ++c) {
      ModPrime* col = a.column(c);
      if (col[row].v == 0) continue;
      const std::uint64_t factor = ModPrime::p - (col[row] * inv).v;
      for (std::size_t t = row; t < rows; ++t) col[t] = ModPrime::reduce(col[t].v + factor * pc[t].v);
    }
    ++rank;
  }
  return rank;
}

inline RankDiagnostic verify_full_rank(const Matrix<ModPrime>& a) {
  if (a.rows != a.cols) throw Error(ErrorCode::invalid_argument, "rank check expects a square matrix");
  RankDiagnostic diag;
  diag.rank = rank_mod_prime(a);
  diag.full_rank = diag.rank == a.rows;
  return diag;
}

/// Orthonormal basis of span(basis) via column-pivoted QR.
inline Eigen::MatrixXcd orthonormal_span(const Matrix<std::complex<double>>& basis) {
  const auto rows = static_cast<Eigen::Index>(basis.rows);
  Eigen::Map<const Eigen::MatrixXcd> b(basis.data.data(), rows, static_cast<Eigen::Index>(basis.cols));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(b);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, qr.rank());
}

/// Largest relative residual ||x - P x|| / ||x|| over the given vectors, P the
/// orthogonal projector onto the span of the orthonormal columns `q`.
inline double subspace_residual(const Eigen::MatrixXcd& q,
                                const std::vector<std::vector<std::complex<double>>>& vectors) {
  double worst = 0.0;
  for (const auto& vec : vectors) {
    Eigen::Map<const Eigen::VectorXcd> x(vec.data(), q.rows());
    Eigen::VectorXcd res = x - q * (q.adjoint() * x);
    const double norm = x.norm();
    worst = std::max(worst, norm > 0 ? res.norm() / norm : 0.0);
  }
  return worst;
}

inline double subspace_residual(const Matrix<std::complex<double>>& basis,
                                const std::vector<std::vector<std::complex<double>>>& vectors) {
  return subspace_residual(orthonormal_span(basis), vectors);
}

/// Exact containment: every vector equals some column of `basis`.
inline bool contained_exactly(const Matrix<ModPrime>& basis, const std::vector<std::vector<ModPrime>>& vectors) {
  std::set<std::vector<std::uint32_t>> columns;
  for (std::size_t c = 0; c < basis.cols; ++c) {
    std::vector<std::uint32_t> col(basis.rows);
    for (std::size_t t = 0; t < basis.rows; ++t) col[t] = basis(t, c).v;
    columns.insert(std::move(col));
  }
  for (const auto& vec : vectors) {
    std::vector<std::uint32_t> key(vec.size());
    for (std::size_t t = 0; t < vec.size(); ++t) key[t] = vec[t].v;
    if (!columns.count(key)) return false;
  }
  return true;
}

/// Received vectors H_ij v of the undesired messages at actual receiver i,
/// grouped by message set.
template <class Field>
std::map<MessageSet, std::vector<std::vector<typename Field::Scalar>>> interference_vectors(
    const AlignmentInstance<Field>& inst, const BeamformerBank<Field>& bank, const ExpandedConfig& ecfg,
    const std::vector<CodedMessage>& msgs, int i) {
  std::map<MessageSet, std::vector<std::vector<typename Field::Scalar>>> out;
  for (const auto& msg : delivery::undesired_messages(msgs, ecfg, i)) {
    auto Q = classify_message(ecfg, msg);
    const auto& v = bank.transmit.at(Q).vectors;
    const auto& h = inst.channel(i, msg.tx);
    for (std::size_t c = 0; c < v.cols; ++c) {
      std::vector<typename Field::Scalar> x(inst.T);
      for (std::size_t t = 0; t < inst.T; ++t) x[t] = h[t] * v(t, c);
      out[Q].push_back(std::move(x));
    }
  }
  return out;
}

struct AlignmentOptions {
  std::uint64_t size_cap = default_size_cap();
  double rank_threshold = 1e-9;
  double residual_threshold = 1e-8;
};

struct TrialResult {
  std::uint64_t seed = 0;
  bool square_all = true;
  bool full_rank_all = true;
  bool aligned_all = true;
  std::optional<double> min_sigma_ratio;
  std::size_t min_rank = 0;
  std::optional<double> max_residual;  // float mode only
};

template <class Field>
TrialResult run_trial(int K, int L, int r, int n, std::uint64_t seed, const AlignmentOptions& options = {}) {
  const auto ecfg = topology::expand(topology::make_linear(K, L));
  auto inst = build_instance<Field>(K, L, r, n, seed, options.size_cap);
  auto bank = make_bank(inst, ecfg);
  auto msgs = delivery::generate_messages(ecfg, delivery::Demand::identity(K), r);

  TrialResult result;
  result.seed = seed;
  result.min_rank = inst.T;
  std::map<MessageSet, Eigen::MatrixXcd> spans;  // float mode, shared by all receivers
  for (int i = 0; i < K; ++i) {
    auto rm = receive_matrix(inst, bank, ecfg, msgs, i);
    auto a = rm.full();
    result.square_all = result.square_all && a.rows == a.cols;
    RankDiagnostic diag;
    if constexpr (Field::mode == FieldMode::complex_float) {
      diag = verify_full_rank(a, options.rank_threshold);
      result.min_sigma_ratio = std::min(result.min_sigma_ratio.value_or(1.0), *diag.min_sigma_ratio);
    } else {
      diag = verify_full_rank(a);
    }
    result.full_rank_all = result.full_rank_all && diag.full_rank;
    result.min_rank = std::min(result.min_rank, diag.rank);

    for (const auto& [Q, vectors] : interference_vectors(inst, bank, ecfg, msgs, i)) {
      const auto& space = bank.receive.at(Q).vectors;
      if constexpr (Field::mode == FieldMode::complex_float) {
        auto it = spans.find(Q);
        if (it == spans.end()) it = spans.emplace(Q, orthonormal_span(space)).first;
        double res = subspace_residual(it->second, vectors);
        result.max_residual = std::max(result.max_residual.value_or(0.0), res);
        if (!(res < options.residual_threshold)) result.aligned_all = false;
      } else {
        if (!contained_exactly(space, vectors)) result.aligned_all = false;
      }
    }
  }
  return result;
}

struct AlignReport {
  int K = 0, L = 0, r = 0, n = 1;
  FieldMode mode = FieldMode::complex_float;
  std::uint64_t T = 0;
  Rational dof_finite;
  Rational dof_limit;
  std::vector<TrialResult> trials;

  bool all_pass() const {
    return std::all_of(trials.begin(), trials.end(),
                       [](const auto& t) { return t.square_all && t.full_rank_all && t.aligned_all; });
  }
};

/// Runs `seeds` trials with seeds base_seed, base_seed + 1, ...
inline AlignReport run_alignment(int K, int L, int r, int n, FieldMode mode, int seeds, std::uint64_t base_seed,
                                 const AlignmentOptions& options = {}) {
  topology::make_linear(K, L);
  AlignReport report;
  report.K = K;
  report.L = L;
  report.r = r;
  report.n = n;
  report.mode = mode;
  const Integer T = symbol_extension(K, L, r, n);
  if (T > options.size_cap)
    throw Error(ErrorCode::size_cap_exceeded, "T_n = " + T.str() + " exceeds the size cap " + std::to_string(options.size_cap));
  report.T = T.convert_to<std::uint64_t>();
  report.dof_finite = alignment::dof_finite(K, L, r, n);
  report.dof_limit = alignment::dof_limit(L, r);
  for (int s = 0; s < seeds; ++s) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(s);
    report.trials.push_back(mode == FieldMode::complex_float ? run_trial<ComplexField>(K, L, r, n, seed, options)
                                                             : run_trial<PrimeField>(K, L, r, n, seed, options));
  }
  return report;
}

}  // namespace cachenet::alignment
