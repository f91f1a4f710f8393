#include <gtest/gtest.h>

#include <set>

#include <cachenet/placement.hpp>

#include "oracles.hpp"

using namespace cachenet;
using namespace cachenet::placement;

namespace {

SplittingRatios ratios(std::vector<Rational> a) { return SplittingRatios{std::move(a)}; }

std::set<SubfileLabel> as_set(const std::vector<SubfileLabel>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Placement, LabelWireFormat) {
  EXPECT_EQ(to_string(SubfileLabel{2, 1, mask_of({0, 2})}), "2:1:0,2");
  EXPECT_EQ(to_string(SubfileLabel{0, 1, 0}), "0:1:");
  for (const auto& label : file_labels(4, 3)) EXPECT_EQ(parse_label(to_string(label)), label);
  for (const char* bad : {"", "1", "1:2", "a:0:", "1:0:2,1", "1:0:1,", "1:0:1,1", "-1:0:"}) {
    EXPECT_THROW(parse_label(bad), Error) << bad;
  }
}

TEST(Placement, TransmittersWithEqualResidueCacheTheSame) {
  auto cfg = topology::make_linear(4, 3);
  CacheSpec spec{4, 1, Rational(1, 3)};
  EXPECT_EQ(transmitter_cache(cfg, 1, spec), transmitter_cache(cfg, 4, spec));
  EXPECT_EQ(transmitter_cache(cfg, 0, spec), transmitter_cache(cfg, 3, spec));
  EXPECT_EQ(transmitter_cache(cfg, 2, spec), transmitter_cache(cfg, 5, spec));
  auto tx2 = transmitter_cache(cfg, 2, spec);
  EXPECT_EQ(tx2.size(), 4u * 8u);
  for (const auto& label : tx2) EXPECT_EQ(label.p, 2);
}

TEST(Placement, SingleConnectivityTransmitterHoldsEverything) {
  auto cfg = topology::make_linear(3, 1);
  CacheSpec spec{3, 1, 0};
  for (int j = 0; j < 3; ++j) {
    auto c = transmitter_cache(cfg, j, spec);
    EXPECT_EQ(c.size(), 6u);
    for (const auto& label : c) EXPECT_EQ(label.p, 0);
  }
}

TEST(Placement, ReceiversWithEqualResidueCacheTheSame) {
  auto cfg = topology::make_linear(4, 3);
  CacheSpec spec{4, 1, Rational(1, 3)};
  EXPECT_EQ(receiver_cache(cfg, 0, spec), receiver_cache(cfg, 3, spec));
  // virtual receivers copy the actual receiver L positions inward
  EXPECT_EQ(receiver_cache(cfg, -2, spec), receiver_cache(cfg, 1, spec));
  EXPECT_EQ(receiver_cache(cfg, 4, spec), receiver_cache(cfg, 1, spec));
  EXPECT_EQ(receiver_cache(cfg, -1, spec), receiver_cache(cfg, 2, spec));
  EXPECT_EQ(receiver_cache(cfg, 5, spec), receiver_cache(cfg, 2, spec));
  EXPECT_THROW(receiver_cache(cfg, 6, spec), Error);
}

TEST(Placement, ZeroCacheMeansZeroSizedLabelsOnly) {
  auto a = ratios({Rational(1, 3), 0, 0, 0});
  FileLayout layout(a, 3);
  auto cfg = topology::make_linear(4, 3);
  for (int i = 0; i < 4; ++i)
    for (const auto& label : receiver_cache(cfg, i, {4, 1, 0})) EXPECT_EQ(layout.size(label), 0u);
}

TEST(Placement, ValidateExamples) {
  auto r1 = validate_ratios(3, ratios({Rational(1, 3), 0, 0, 0}), {1, 1, 0});
  EXPECT_TRUE(r1.ok());
  EXPECT_TRUE(r1.receiver_cache_tight);

  auto r2 = validate_ratios(3, ratios({0, Rational(1, 9), 0, 0}), {1, 1, Rational(1, 3)});
  EXPECT_TRUE(r2.ok());
  EXPECT_TRUE(r2.receiver_cache_tight);
  EXPECT_EQ(r2.receiver_load, Rational(1, 3));

  auto r3 = validate_ratios(3, ratios({Rational(1, 3), Rational(1, 9), 0, 0}), {1, 1, 1});
  ASSERT_FALSE(r3.ok());
  EXPECT_EQ(r3.file_size_total, 2);
  EXPECT_EQ(r3.violations[0].constraint, Constraint::file_size);
  EXPECT_EQ(r3.violations[0].margin, 1);
}

TEST(Placement, ValidateReportsEachConstraint) {
  auto over = validate_ratios(3, ratios({0, Rational(1, 9), 0, 0}), {1, 1, Rational(1, 4)});
  ASSERT_EQ(over.violations.size(), 1u);
  EXPECT_EQ(over.violations[0].constraint, Constraint::receiver_cache);
  EXPECT_EQ(over.violations[0].margin, Rational(1, 12));

  auto neg = validate_ratios(2, ratios({Rational(1, 2), Rational(-1, 8), Rational(1, 4)}), {1, 1, 1});
  EXPECT_EQ(neg.violations[0].constraint, Constraint::nonnegative);

  auto len = validate_ratios(3, ratios({1, 0}), {1, 1, 1});
  EXPECT_EQ(len.violations[0].constraint, Constraint::length);

  auto tx = validate_ratios(3, ratios({Rational(1, 3), 0, 0, 0}), {1, Rational(1, 4), 0});
  EXPECT_EQ(tx.violations[0].constraint, Constraint::transmitter_region);
}

TEST(Placement, NeededSubfilesOfReceiverZero) {
  auto cfg = topology::make_linear(4, 3);
  std::set<SubfileLabel> level1;
  for (const auto& label : needed_subfiles(cfg, 0, 0))
    if (label.level() == 1) level1.insert(label);
  std::set<SubfileLabel> want;
  for (int p = 0; p < 3; ++p)
    for (int q : {1, 2}) want.insert({0, p, mask_of({q})});
  EXPECT_EQ(level1, want);

  EXPECT_EQ(needed_subfiles(topology::make_linear(3, 1), 1, 2), (std::vector<SubfileLabel>{{2, 0, 0}}));
  try {
    needed_subfiles(cfg, -1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_applicable);
  }
}

TEST(Placement, NeededIsComplementOfCache) {
  for (int K = 1; K <= 6; ++K) {
    for (int L = 1; L <= K; ++L) {
      auto cfg = topology::make_linear(K, L);
      for (int i = 0; i < K; ++i) {
        auto cached = as_set(receiver_cache(cfg, i, {2, 1, 0}));
        std::set<SubfileLabel> file1;
        for (const auto& label : cached)
          if (label.n == 1) file1.insert(label);
        auto needed = as_set(needed_subfiles(cfg, i, 1));
        for (const auto& label : file_labels(L, 1)) EXPECT_NE(file1.count(label) > 0, needed.count(label) > 0);
      }
    }
  }
}

TEST(Placement, ReceiverLoadMatchesLabelCount) {
  // Brute force: add up the sizes of the labels a receiver stores.
  for (int L = 1; L <= 5; ++L) {
    std::vector<Rational> a(L + 1);
    for (int r = 0; r <= L; ++r) a[r] = Rational(r + 1, 7 * L * oracle::choose(L, r) * (L + 1));
    auto cfg = topology::make_linear(L, L);
    for (int i = 0; i < L; ++i) {
      Rational stored = 0;
      for (const auto& label : receiver_cache(cfg, i, {1, 1, 0})) stored += a[label.level()];
      EXPECT_EQ(stored, validate_ratios(L, ratios(a), {1, 1, 1}).receiver_load);
    }
  }
}

TEST(Placement, MinimalFileSize) {
  EXPECT_EQ(minimal_file_size(ratios({Rational(1, 3), 0, 0, 0})), 3u);
  EXPECT_EQ(minimal_file_size(ratios({0, Rational(1, 9), 0, 0})), 9u);
  EXPECT_EQ(minimal_file_size(ratios({0, Rational(1, 18), Rational(1, 18), 0})), 18u);
}

TEST(Placement, LayoutPartitionsTheFile) {
  auto a = ratios({0, Rational(1, 18), Rational(1, 18), 0});
  FileLayout layout(a, 36);
  std::uint64_t expected_offset = 0;
  for (const auto& label : file_labels(3, 0)) {
    EXPECT_EQ(layout.offset(label), expected_offset);
    EXPECT_EQ(layout.size(label), (a[label.level()] * 36).convert_to<std::uint64_t>());
    expected_offset += layout.size(label);
  }
  EXPECT_EQ(expected_offset, 36u);
  EXPECT_THROW(FileLayout(a, 17), Error);
}

TEST(Placement, LibraryIsSeeded) {
  auto a = ratios({Rational(1, 2), 0, 0});
  Library one(3, FileLayout(a, 200), 42), two(3, FileLayout(a, 200), 42), other(3, FileLayout(a, 200), 43);
  for (int n = 0; n < 3; ++n) EXPECT_EQ(one.file(n), two.file(n));
  EXPECT_NE(one.file(0), other.file(0));
  EXPECT_NE(one.file(0), one.file(1));
  auto sub = one.subfile({1, 1, 0});
  ASSERT_EQ(sub.size(), 100u);
  for (std::size_t k = 0; k < sub.size(); ++k) EXPECT_EQ(sub[k], one.file(1)[100 + k]);
}
