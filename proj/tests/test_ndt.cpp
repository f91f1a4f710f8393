#include <gtest/gtest.h>

#include <cachenet/ndt.hpp>
#include <cachenet/placement.hpp>

#include "oracles.hpp"

using namespace cachenet;
using namespace cachenet::ndt;

TEST(Ndt, GroupCosts) {
  EXPECT_EQ(group_cost(3, 0), 5);
  EXPECT_EQ(group_cost(3, 1), 7);
  EXPECT_EQ(group_cost(3, 2), 3);
  EXPECT_EQ(group_cost(1, 0), 1);
  for (int L = 1; L <= 8; ++L) EXPECT_EQ(group_cost(L, L - 1), L);
  EXPECT_THROW(group_cost(3, 3), Error);
  EXPECT_THROW(group_cost(3, -1), Error);
}

TEST(Ndt, OptimizeSixByFourPoints) {
  auto cold = optimize(3, 0);
  EXPECT_EQ(cold.tau_ub, Rational(5, 3));
  EXPECT_EQ(cold.ratios.a, (std::vector<Rational>{Rational(1, 3), 0, 0, 0}));
  EXPECT_EQ(optimize(3, Rational(1, 2)).tau_ub, Rational(5, 9));
  auto full = optimize(3, 1);
  EXPECT_EQ(full.tau_ub, 0);
  EXPECT_FALSE(full.gap.has_value());
}

TEST(Ndt, ClosedFormBreakpoints) {
  EXPECT_EQ(closed_form_L3(Rational(1, 3)), Rational(7, 9));
  EXPECT_EQ(Rational(5, 3) - Rational(8, 3) * Rational(1, 3), Rational(7, 9));
  EXPECT_EQ(closed_form_L3(Rational(2, 3)), Rational(1, 3));
  EXPECT_EQ(closed_form_L3(0), Rational(5, 3));
}

TEST(Ndt, MatchesClosedFormOnFineGrid) {
  for (int k = 0; k <= 360; ++k) {
    Rational mu(k, 360);
    EXPECT_EQ(optimize(3, mu).tau_ub, closed_form_L3(mu)) << to_string(mu);
  }
}

TEST(Ndt, MatchesDualOracle) {
  for (int L = 1; L <= 10; ++L) {
    for (int k = 0; k <= 60; ++k) {
      Rational mu(k, 60);
      EXPECT_EQ(optimize(L, mu).tau_ub, oracle::lp_value(L, mu)) << "L=" << L << " mu=" << to_string(mu);
    }
  }
}

TEST(Ndt, RatiosAreFeasibleAndPriced) {
  for (int L = 1; L <= 8; ++L) {
    for (int k = 0; k <= 24; ++k) {
      Rational mu(k, 24);
      auto sol = optimize(L, mu);
      placement::CacheSpec spec{1, 1, mu};
      EXPECT_TRUE(placement::validate_ratios(L, sol.ratios, spec).ok());
      Rational priced = 0;
      for (int r = 0; r < L; ++r) priced += group_cost(L, r) * sol.ratios[r];
      EXPECT_EQ(priced, sol.tau_ub);
    }
  }
}

TEST(Ndt, SandwichUpToTen) {
  for (int L = 1; L <= 10; ++L) {
    for (int k = 0; k <= 40; ++k) {
      Rational mu(k, 40);
      auto sol = optimize(L, mu);
      EXPECT_LE(sol.tau_lb, sol.tau_ub);
      EXPECT_LE(sol.tau_ub, Rational(2 * L - 1, L) * (1 - mu));
      if (sol.gap) EXPECT_LT(*sol.gap, 2);
    }
  }
}

TEST(Ndt, TieBreakIsDeterministic) {
  // At mu_R = 1/3 with L = 3 the optimum is the single ratio a_1 = 1/9.
  auto sol = optimize(3, Rational(1, 3));
  EXPECT_EQ(sol.ratios.a, (std::vector<Rational>{0, Rational(1, 9), 0, 0}));
  EXPECT_EQ(optimize(3, Rational(1, 3)).ratios, sol.ratios);
}

TEST(Ndt, BindingConstraints) {
  EXPECT_EQ(optimize(3, Rational(1, 2)).binding_constraints, (std::vector<std::string>{"file-size", "receiver-cache"}));
}

TEST(Ndt, RegionHandling) {
  try {
    optimize(3, 0, Rational(1, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::out_of_region);
  }
  EXPECT_NO_THROW(optimize(3, 0, Rational(1, 3)));
  auto clamped = optimize(3, 2, 5);
  EXPECT_EQ(clamped.mu_r, 1);
  EXPECT_EQ(clamped.mu_t, 1);
  EXPECT_EQ(clamped.warnings.size(), 2u);
  EXPECT_THROW(optimize(3, Rational(-1, 2)), Error);
}

TEST(Ndt, IndependentOfTransmitterCache) {
  for (int k = 0; k <= 12; ++k) {
    Rational mu(k, 12);
    EXPECT_EQ(optimize(4, mu, Rational(1, 4)).tau_ub, optimize(4, mu, 1).tau_ub);
    EXPECT_EQ(optimize(4, mu, Rational(1, 2)).ratios, optimize(4, mu, 1).ratios);
  }
}

TEST(Ndt, IntegerPoints) {
  auto p = integer_point(3, 1);
  EXPECT_EQ(p.ratios.a, (std::vector<Rational>{0, Rational(1, 9), 0, 0}));
  EXPECT_EQ(p.tau, Rational(7, 9));
  EXPECT_EQ(integer_point(3, 2).tau, Rational(1, 3));
  for (int L = 1; L <= 6; ++L) EXPECT_EQ(integer_point(L, L).tau, 0);
  EXPECT_THROW(integer_point(3, 4), Error);
}

TEST(Ndt, IntegerPointPricedBySchemeCosts) {
  // The product form equals the priced single-ratio placement.
  for (int L = 1; L <= 8; ++L) {
    for (int l = 0; l < L; ++l) {
      auto p = integer_point(L, l);
      EXPECT_EQ(p.tau, Rational(group_cost(L, l), L * oracle::choose(L, l)));
    }
  }
}

TEST(Ndt, LowerBoundAndGap) {
  EXPECT_EQ(lower_bound(0), 1);
  EXPECT_EQ(lower_bound(1), 0);
  EXPECT_EQ(lower_bound(Rational(1, 2)), Rational(1, 2));
  EXPECT_EQ(gap(3, 0), Rational(5, 3));
  EXPECT_EQ(gap(3, Rational(2, 3)), 1);
  EXPECT_LE(*gap(2, 0), Rational(3, 2));
  EXPECT_FALSE(gap(3, 1).has_value());
}

TEST(Ndt, Grid) {
  EXPECT_EQ(mu_grid(7).size(), 7u);
  EXPECT_EQ(mu_grid(7)[1], Rational(1, 6));
  EXPECT_EQ(mu_grid(1), (std::vector<Rational>{0}));
  EXPECT_THROW(mu_grid(0), Error);
  auto rows = sweep(3, 7);
  for (const auto& row : rows) EXPECT_EQ(row.tau_ub, closed_form_L3(row.mu_r));
}
