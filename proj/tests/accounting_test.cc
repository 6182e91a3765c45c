// Copyright 2026 The indknn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "indknn/accounting.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "indknn/errors.h"

namespace indknn {
namespace {

// Independent dense scan over alpha of the same conversion, used to bound
// how far the grid minimum sits from the continuous one.
double dense_conversion(double b, double delta) {
  double best = 1e300;
  for (double a = 1.0001; a < 5000.0; a *= 1.0001) {
    const double e = b * a + std::log(1.0 / (a * delta)) / (a - 1.0) +
                     std::log(1.0 - 1.0 / a);
    best = std::min(best, e);
  }
  return best;
}

TEST(GaussianIndividualRdpTest, FormulaValues) {
  EXPECT_DOUBLE_EQ(gaussian_individual_rdp(1.0, 1.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(gaussian_individual_rdp(0.0, 3.0, 7.0), 0.0);
  EXPECT_NEAR(gaussian_individual_rdp(1.0, std::sqrt(2.0), 1.5), 0.375, 1e-15);
}

TEST(GaussianIndividualRdpTest, RejectsBadSigma) {
  EXPECT_THROW(gaussian_individual_rdp(1.0, 0.0, 2.0), InvalidArgument);
  EXPECT_THROW(gaussian_individual_rdp(1.0, -1.0, 2.0), InvalidArgument);
}

TEST(ConversionOrdersTest, GridShape) {
  const auto& orders = conversion_orders();
  EXPECT_DOUBLE_EQ(orders.front(), 1.01);
  EXPECT_DOUBLE_EQ(orders[899], 10.0);
  EXPECT_DOUBLE_EQ(orders.back(), 512.0);
  EXPECT_EQ(orders.size(), 900u + 252u);
}

TEST(RdpToDpTest, ZeroBudgetIsZero) {
  EXPECT_EQ(rdp_to_dp({0.0}, 1e-5), 0.0);
}

TEST(RdpToDpTest, UnitBudgetBelowClassicalBound) {
  const double eps = rdp_to_dp({1.0}, 1e-5);
  EXPECT_LE(eps, 1.0 + 2.0 * std::sqrt(std::log(1e5)));
  EXPECT_LE(eps, 7.787);
  // Continuous minimum, from a 30-digit evaluation: 7.0771966958063397.
  EXPECT_NEAR(eps, 7.0771966958063397, 1e-4);
  EXPECT_GE(eps, 7.0771966958063397 - 1e-12);
}

TEST(RdpToDpTest, GridMinimumCloseToContinuous) {
  for (double b : {1e-4, 1e-3, 0.01, 0.0306, 0.1, 1.0, 5.0}) {
    for (double delta : {1e-6, 1e-5, 1e-3}) {
      const double dense = dense_conversion(b, delta);
      const double eps = rdp_to_dp({b}, delta);
      // The order grid is coarse above 10, so only near-optimality holds.
      EXPECT_GE(eps, dense - 1e-6) << b << " " << delta;
      EXPECT_LE(eps, dense + 1e-2) << b << " " << delta;
    }
  }
}

TEST(RdpToDpTest, MonotoneInBudget) {
  const double mid = rdp_to_dp({0.1}, 1e-5);
  EXPECT_GT(mid, rdp_to_dp({0.05}, 1e-5));
  EXPECT_LT(mid, rdp_to_dp({0.2}, 1e-5));
}

TEST(RdpToDpTest, RejectsBadDelta) {
  EXPECT_THROW(rdp_to_dp({1.0}, 0.0), InvalidArgument);
  EXPECT_THROW(rdp_to_dp({1.0}, 1.0), InvalidArgument);
  EXPECT_THROW(rdp_to_dp({1.0}, -0.5), InvalidArgument);
}

TEST(RdpToDpTest, RandomBudgetsRespectClassicalBoundAndMonotonicity) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> log_b(-8.0, 2.0);
  std::uniform_real_distribution<double> log_d(-12.0, -1.0);
  for (int i = 0; i < 300; ++i) {
    const double b = std::pow(10.0, log_b(rng));
    const double d = std::pow(10.0, log_d(rng));
    const double eps = rdp_to_dp({b}, d);
    EXPECT_LE(eps, classical_rdp_to_dp_bound({b}, d) + 1e-12);
    EXPECT_LE(eps, rdp_to_dp({b * 1.01}, d));
    EXPECT_GE(eps, rdp_to_dp({b}, std::min(d * 1.5, 0.999)));
  }
}

TEST(BudgetForDpTest, RoundTrips) {
  for (double eps : {0.5, 1.0, 2.0}) {
    const RdpBudget b = budget_for_dp({eps, 1e-5});
    EXPECT_NEAR(rdp_to_dp(b, 1e-5), eps, 1e-6);
    EXPECT_LE(rdp_to_dp(b, 1e-5), eps);
  }
}

TEST(BudgetForDpTest, MonotoneInEpsilon) {
  EXPECT_GT(budget_for_dp({2.0, 1e-5}).value, budget_for_dp({1.0, 1e-5}).value);
}

TEST(BudgetForDpTest, RejectsBadTarget) {
  EXPECT_THROW(budget_for_dp({0.0, 1e-5}), InvalidArgument);
  EXPECT_THROW(budget_for_dp({1.0, 2.0}), InvalidArgument);
}

TEST(DefaultCountSigmaTest, SixHundredQueriesUnitBudget) {
  EXPECT_DOUBLE_EQ(default_count_sigma(600, {1.0}), 10.0);
}

TEST(FilterActiveTest, FreshLedgerKeepsEveryPrivateEntry) {
  IndividualLedger ledger({0.5});
  for (int i = 0; i < 5; ++i) ledger.add_private();
  const auto active = filter_active(ledger, 0.01);
  EXPECT_EQ(active, (std::vector<ExampleId>{0, 1, 2, 3, 4}));
}

TEST(FilterActiveTest, ExhaustedLedgerKeepsOnlyPublic) {
  IndividualLedger ledger({0.5});
  for (int i = 0; i < 3; ++i) ledger.add_private();
  const ExampleId pub = ledger.add_unlimited();
  for (ExampleId i = 0; i < 3; ++i) ledger.exhaust(i);
  EXPECT_EQ(filter_active(ledger, 0.01), (std::vector<ExampleId>{pub}));
}

TEST(FilterActiveTest, BoundaryIsInclusive) {
  const double threshold = 0.125;
  IndividualLedger ledger({1.0});
  for (int i = 0; i < 3; ++i) ledger.add_private();
  ledger.charge(0, 1.0 - threshold);
  ledger.charge(1, 1.0 - (threshold - 1e-12));
  ledger.charge(2, 1.0 - 2.0 * threshold);
  ASSERT_EQ(ledger.remaining(0), threshold);
  ASSERT_LT(ledger.remaining(1), threshold);
  EXPECT_EQ(filter_active(ledger, threshold), (std::vector<ExampleId>{0, 2}));
}

TEST(IndividualLedgerTest, RemovalDropsEntry) {
  IndividualLedger ledger({1.0});
  ledger.add_private();
  ledger.add_private();
  ledger.add_unlimited();
  EXPECT_EQ(ledger.size(), 2u);
  ledger.remove(0);
  EXPECT_EQ(ledger.size(), 1u);
  EXPECT_FALSE(ledger.is_live(0));
  EXPECT_THROW(ledger.remove(0), InvalidArgument);
  EXPECT_EQ(filter_active(ledger, 0.0), (std::vector<ExampleId>{1, 2}));
}

TEST(IndividualLedgerTest, OverspendIsAnInvariantViolation) {
  IndividualLedger ledger({1.0});
  ledger.add_private();
  ledger.charge(0, 1.0 + 1e-10);
  EXPECT_THROW(ledger.charge(0, 1e-8), InvariantViolation);
  const ExampleId pub = ledger.add_unlimited();
  EXPECT_THROW(ledger.charge(pub, 0.1), InvariantViolation);
}

TEST(OracleComposeTest, EmptyRecords) {
  const auto totals = oracle_compose({}, 4);
  EXPECT_EQ(totals, std::vector<double>(4, 0.0));
}

TEST(OracleComposeTest, SingleRecord) {
  const std::vector<ChargeRecord> records{{0, 2, 0.25, 0.125}};
  const auto totals = oracle_compose(records, 3);
  EXPECT_EQ(totals[0], 0.0);
  EXPECT_EQ(totals[2], 0.375);
}

}  // namespace
}  // namespace indknn
