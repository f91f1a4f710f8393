#include <gtest/gtest.h>

#include <cachenet/topology.hpp>

#include "oracles.hpp"

using namespace cachenet;
using namespace cachenet::topology;

TEST(Topology, MakeLinearCounts) {
  auto cfg = make_linear(4, 3);
  EXPECT_EQ(cfg.transmitters(), 6);
  EXPECT_EQ(cfg.receivers(), 4);
  EXPECT_EQ(make_linear(5, 5).transmitters(), 9);
  auto one = make_linear(1, 1);
  EXPECT_EQ(one.transmitters(), 1);
  EXPECT_EQ(one.receivers(), 1);
}

TEST(Topology, MakeLinearRejectsBadConnectivity) {
  for (auto [K, L] : {std::pair{3, 4}, {3, 0}, {0, 0}, {2, -1}}) {
    try {
      make_linear(K, L);
      FAIL() << "accepted K=" << K << " L=" << L;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::invalid_connectivity);
    }
  }
}

TEST(Topology, TxSetOfSixByFour) {
  auto cfg = make_linear(4, 3);
  EXPECT_EQ(tx_set(cfg, 0), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(tx_set(cfg, 3), (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(tx_set(make_linear(5, 1), 2), (std::vector<int>{2}));
}

TEST(Topology, RxSetOfSixByFour) {
  auto cfg = make_linear(4, 3);
  EXPECT_EQ(rx_set(cfg, 0), (std::vector<int>{0}));
  EXPECT_EQ(rx_set(cfg, 2), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(rx_set(cfg, 5), (std::vector<int>{3}));
}

TEST(Topology, IndexErrors) {
  auto cfg = make_linear(4, 3);
  EXPECT_THROW(tx_set(cfg, 4), Error);
  EXPECT_THROW(tx_set(cfg, -1), Error);
  EXPECT_THROW(rx_set(cfg, 6), Error);
  try {
    rx_set(cfg, -1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::index_out_of_range);
  }
}

TEST(Topology, AdjacencyMatchesDefinitionAndIsSymmetric) {
  for (int K = 1; K <= 9; ++K) {
    for (int L = 1; L <= K; ++L) {
      auto cfg = make_linear(K, L);
      for (int i = 0; i < K; ++i) {
        auto tx = tx_set(cfg, i);
        EXPECT_EQ(static_cast<int>(tx.size()), L);
        for (int j = 0; j < cfg.transmitters(); ++j) {
          bool listed = std::count(tx.begin(), tx.end(), j) > 0;
          EXPECT_EQ(listed, oracle::connected(K, L, false, i, j));
          auto rx = rx_set(cfg, j);
          EXPECT_EQ(listed, std::count(rx.begin(), rx.end(), i) > 0);
        }
      }
    }
  }
}

TEST(Topology, ExpandedVirtualReceivers) {
  EXPECT_EQ(expand(make_linear(4, 3)).virtual_receivers(), (std::vector<int>{-2, -1, 4, 5}));
  EXPECT_TRUE(expand(make_linear(4, 1)).virtual_receivers().empty());
  EXPECT_EQ(expand(make_linear(5, 2)).virtual_receivers(), (std::vector<int>{-1, 5}));
}

TEST(Topology, ExpandedEveryTransmitterSeesL) {
  for (int K = 1; K <= 8; ++K) {
    for (int L = 1; L <= K; ++L) {
      auto e = expand(make_linear(K, L));
      for (int j = 0; j < e.transmitters(); ++j) {
        auto rx = e.rx_set(j);
        ASSERT_EQ(static_cast<int>(rx.size()), L);
        for (int i : rx) EXPECT_TRUE(e.is_actual(i) || e.is_virtual(i));
      }
    }
  }
}

TEST(Topology, MirrorCopiesReceiverLInward) {
  auto e = expand(make_linear(4, 3));
  EXPECT_EQ(e.mirror(-2), 1);
  EXPECT_EQ(e.mirror(-1), 2);
  EXPECT_EQ(e.mirror(4), 1);
  EXPECT_EQ(e.mirror(5), 2);
  EXPECT_EQ(e.mirror(3), 3);
  for (int i = e.min_receiver(); i <= e.max_receiver(); ++i) EXPECT_EQ(e.residue(i), floor_mod(i, 3));
  EXPECT_THROW(e.mirror(6), Error);
  EXPECT_THROW(e.mirror(-3), Error);
}

TEST(Topology, ExpandRejectsCircular) {
  auto [circ, map] = to_circular(make_linear(4, 2));
  try {
    expand(circ);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported_topology);
  }
}

TEST(Topology, ToCircularMergesPairs) {
  auto [circ, map] = to_circular(make_linear(4, 2));
  EXPECT_EQ(circ.kind, Kind::circular);
  EXPECT_EQ(circ.transmitters(), 4);
  EXPECT_EQ(map.pairs, (std::vector<std::pair<int, int>>{{0, 4}}));
  EXPECT_EQ(map.relabel(4), 0);
  EXPECT_EQ(map.relabel(3), 3);
  EXPECT_EQ(tx_set(circ, 3), (std::vector<int>{0, 3}));
}

TEST(Topology, ToCircularNeedsDivisibility) {
  try {
    to_circular(make_linear(4, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::divisibility);
  }
}

TEST(Topology, FullyConnectedIsCircularWithLEqualK) {
  auto [circ, map] = to_circular(make_linear(3, 3));
  EXPECT_TRUE(circ.fully_connected());
  for (int i = 0; i < 3; ++i) EXPECT_EQ(tx_set(circ, i), (std::vector<int>{0, 1, 2}));
}

TEST(Topology, CircularAdjacencyMatchesDefinition) {
  for (int K = 1; K <= 9; ++K) {
    for (int L = 1; L <= K; ++L) {
      if (K % L) continue;
      auto [circ, map] = to_circular(make_linear(K, L));
      for (int i = 0; i < K; ++i) {
        auto tx = tx_set(circ, i);
        for (int j = 0; j < K; ++j) {
          EXPECT_EQ(std::count(tx.begin(), tx.end(), j) > 0, oracle::connected(K, L, true, i, j));
          auto rx = rx_set(circ, j);
          EXPECT_EQ(std::count(rx.begin(), rx.end(), i) > 0, oracle::connected(K, L, true, i, j));
        }
      }
      // merged transmitters hold the same residue, hence the same cache
      for (auto [a, b] : map.pairs) EXPECT_EQ(a % L, b % L);
    }
  }
}
