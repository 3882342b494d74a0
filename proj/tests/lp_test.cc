// Copyright 2026 The Coflow Scheduling Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coflow/lp.h"

#include <cmath>
#include <random>
#include <vector>

#include "coflow/errors.h"
#include "gtest/gtest.h"

namespace coflow::lp {
namespace {

using ::testing::Test;

TEST(LpSolve, SingleBindingConstraint) {
  LpProblem p;
  const int x = p.add_var(1.0);
  p.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 3.0);
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 3.0, 1e-12);
  EXPECT_NEAR(s.values[x], 3.0, 1e-12);
}

TEST(LpSolve, SymmetricCone) {
  LpProblem p;
  const int x = p.add_var(1.0);
  const int y = p.add_var(1.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kGreaterEqual, 2.0);
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 2.0, 1e-12);
  EXPECT_TRUE(check_feasible(p, s.values).feasible);
}

TEST(LpSolve, ClassicMaximization) {
  // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), 36.
  LpProblem p;
  const int x = p.add_var(-3.0);
  const int y = p.add_var(-5.0);
  p.add_constraint({{x, 1.0}}, Relation::kLessEqual, 4.0);
  p.add_constraint({{y, 2.0}}, Relation::kLessEqual, 12.0);
  p.add_constraint({{x, 3.0}, {y, 2.0}}, Relation::kLessEqual, 18.0);
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, -36.0, 1e-9);
  EXPECT_NEAR(s.values[x], 2.0, 1e-9);
  EXPECT_NEAR(s.values[y], 6.0, 1e-9);
}

TEST(LpSolve, Infeasible) {
  LpProblem p;
  const int x = p.add_var(1.0);
  const int y = p.add_var(1.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kLessEqual, 1.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kGreaterEqual, 2.0);
  EXPECT_EQ(solve(p).status, LpStatus::kInfeasible);
}

TEST(LpSolve, InfeasibleBounds) {
  LpProblem p;
  const int x = p.add_var(1.0, {0.0, 1.0});
  p.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 2.0);
  EXPECT_EQ(solve(p).status, LpStatus::kInfeasible);
}

TEST(LpSolve, Unbounded) {
  LpProblem p;
  const int x = p.add_var(-1.0);
  const int y = p.add_var(0.0);
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::kLessEqual, 1.0);
  EXPECT_EQ(solve(p).status, LpStatus::kUnbounded);
}

TEST(LpSolve, UpperBoundsAndEqualities) {
  // min -x - 2y  s.t. x + y = 1.5, 0 <= x, y <= 1  -> y = 1, x = 0.5.
  LpProblem p;
  const int x = p.add_var(-1.0, {0.0, 1.0});
  const int y = p.add_var(-2.0, {0.0, 1.0});
  const int z = p.add_var(0.0, {0.0, 5.0});
  p.add_constraint({{x, 1.0}, {y, 1.0}, {z, 0.0}}, Relation::kEqual, 1.5);
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.values[x], 0.5, 1e-12);
  EXPECT_NEAR(s.values[y], 1.0, 1e-12);
  EXPECT_NEAR(s.objective_value, -2.5, 1e-12);
}

TEST(LpSolve, NonzeroLowerBounds) {
  LpProblem p;
  const int x = p.add_var(1.0, {2.0, 10.0});
  const int y = p.add_var(1.0, {-3.0, 10.0});
  p.add_constraint({{x, 1.0}, {y, 1.0}, {x, 1.0}}, Relation::kGreaterEqual, 4.5);
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  // 2x + y >= 4.5 with x >= 2, y >= -3: cheapest is x = 3.75, y = -3.
  EXPECT_NEAR(s.objective_value, 0.75, 1e-12);
  EXPECT_TRUE(check_feasible(p, s.values).feasible);
}

TEST(LpSolve, RedundantEqualities) {
  LpProblem p;
  const int x = p.add_var(1.0);
  const int y = p.add_var(2.0);
  const int z = p.add_var(3.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}, {z, 1.0}}, Relation::kEqual, 3.0);
  p.add_constraint({{x, 2.0}, {y, 2.0}, {z, 2.0}}, Relation::kEqual, 6.0);
  p.add_constraint({{y, 1.0}, {z, 1.0}}, Relation::kGreaterEqual, 1.0);
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 4.0, 1e-12);
}

// Beale's example cycles under the textbook largest-coefficient rule
// without an anti-cycling safeguard.
TEST(LpSolve, DegenerateBealeTerminates) {
  LpProblem p;
  const int x1 = p.add_var(-0.75);
  const int x2 = p.add_var(150.0);
  const int x3 = p.add_var(-0.02);
  const int x4 = p.add_var(6.0);
  p.add_constraint({{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}},
                   Relation::kLessEqual, 0.0);
  p.add_constraint({{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}},
                   Relation::kLessEqual, 0.0);
  p.add_constraint({{x3, 1.0}}, Relation::kLessEqual, 1.0);
  p.add_constraint({{x1, 1.0}, {x2, 1.0}, {x3, 1.0}, {x4, 1.0}},
                   Relation::kLessEqual, 1e6);  // keeps x3's row non-singleton
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, -0.05, 1e-9);
}

TEST(LpSolve, DimensionMismatchIsStructuralError) {
  LpProblem p;
  p.add_var(1.0);
  p.objective.push_back(2.0);
  EXPECT_THROW(solve(p), StructuralError);
  LpProblem q;
  q.add_var(1.0);
  q.add_constraint({{3, 1.0}}, Relation::kLessEqual, 1.0);
  EXPECT_THROW(solve(q), StructuralError);
}

TEST(LpCheckFeasible, ReportsViolatedRows) {
  LpProblem p;
  const int x = p.add_var(1.0);
  p.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 3.0);
  p.add_constraint({{x, 1.0}}, Relation::kLessEqual, 5.0);
  const std::vector<double> point = {1.0};
  const FeasibilityReport r = check_feasible(p, point);
  EXPECT_FALSE(r.feasible);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].row, 0);
  EXPECT_DOUBLE_EQ(r.violations[0].amount, 2.0);
  const std::vector<double> negative = {-1.0};
  EXPECT_FALSE(check_feasible(p, negative).feasible);
  const std::vector<double> too_long = {1.0, 2.0};
  EXPECT_THROW(check_feasible(p, too_long), ArgumentError);
}

TEST(LpFormat, MentionsEverySection) {
  LpProblem p;
  const int x = p.add_var(1.0, {0.0, 1.0}, "delta_0_1");
  p.add_constraint({{x, 2.0}}, Relation::kGreaterEqual, 1.0, "rt_0");
  const std::string text = to_lp_format(p);
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("rt_0: + 2 delta_0_1 >= 1"), std::string::npos);
  EXPECT_NE(text.find("0 <= delta_0_1 <= 1"), std::string::npos);
}

// Random LPs  min c.x  s.t.  A x >= b, x >= 0  with c > 0 and A >= 0 are
// feasible and bounded. The dual  max b.y  s.t.  A^T y <= c, y >= 0  is
// solved with the same routine; strong duality and complementary slackness
// must hold between the two independently computed optima.
TEST(LpDuality, ComplementarySlacknessOnRandomProblems) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> coef(0.0, 5.0);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = dim(rng);
    const int m = dim(rng);
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    std::vector<double> b(m), c(n);
    for (auto& row : a) {
      for (double& v : row) v = (rng() % 3 == 0) ? 0.0 : coef(rng);
    }
    for (int i = 0; i < m; ++i) {
      a[i][rng() % n] += 1.0;
      b[i] = coef(rng);
    }
    for (double& v : c) v = 0.5 + coef(rng);

    LpProblem primal;
    for (int j = 0; j < n; ++j) primal.add_var(c[j]);
    for (int i = 0; i < m; ++i) {
      std::vector<Term> t;
      for (int j = 0; j < n; ++j) t.push_back({j, a[i][j]});
      primal.add_constraint(t, Relation::kGreaterEqual, b[i]);
    }
    LpProblem dual;
    for (int i = 0; i < m; ++i) dual.add_var(-b[i]);
    for (int j = 0; j < n; ++j) {
      std::vector<Term> t;
      for (int i = 0; i < m; ++i) t.push_back({i, a[i][j]});
      dual.add_constraint(t, Relation::kLessEqual, c[j]);
    }
    const LpSolution ps = solve(primal);
    const LpSolution ds = solve(dual);
    ASSERT_EQ(ps.status, LpStatus::kOptimal) << "trial " << trial;
    ASSERT_EQ(ds.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_TRUE(check_feasible(primal, ps.values).feasible);
    EXPECT_TRUE(check_feasible(dual, ds.values).feasible);
    EXPECT_NEAR(ps.objective_value, -ds.objective_value, 1e-8) << "trial " << trial;
    for (int i = 0; i < m; ++i) {
      double act = 0;
      for (int j = 0; j < n; ++j) act += a[i][j] * ps.values[j];
      EXPECT_NEAR(ds.values[i] * (act - b[i]), 0.0, 1e-8);
    }
    for (int j = 0; j < n; ++j) {
      double act = 0;
      for (int i = 0; i < m; ++i) act += a[i][j] * ds.values[i];
      EXPECT_NEAR(ps.values[j] * (c[j] - act), 0.0, 1e-8);
    }
  }
}

TEST(LpSolve, DeterministicAcrossRuns) {
  LpProblem p;
  for (int j = 0; j < 6; ++j) p.add_var(1.0 + (j % 3));
  for (int i = 0; i < 5; ++i) {
    std::vector<Term> t;
    for (int j = 0; j < 6; ++j) t.push_back({j, 1.0 + ((i + j) % 4)});
    p.add_constraint(t, Relation::kGreaterEqual, 3.0 + i);
  }
  const LpSolution a = solve(p);
  const LpSolution b = solve(p);
  ASSERT_EQ(a.status, LpStatus::kOptimal);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.objective_value, b.objective_value);
}

}  // namespace
}  // namespace coflow::lp
