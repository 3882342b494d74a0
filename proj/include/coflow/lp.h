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

// A small self-contained linear programming toolkit: problem representation,
// an exact two-phase primal simplex, and a feasibility checker.
//
// Problems are minimizations over variables with finite lower bounds and
// optional upper bounds. The solver is a dense bounded-variable tableau
// simplex. A presolve folds singleton rows into bounds and substitutes out
// doubleton equalities, which removes the pairwise ordering constraints of
// the coflow LP before the tableau is built. Pricing is Dantzig's rule with
// lowest-index ties; after a run of degenerate pivots it falls back to
// Bland's rule until the objective moves again, so the method terminates on
// degenerate problems. Every step is deterministic.

#ifndef COFLOW_LP_H_
#define COFLOW_LP_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace coflow::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kOptimalityTolerance = 1e-9;

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  int var = 0;
  double coef = 0;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0;
  std::string name;
};

struct Bounds {
  double lower = 0;
  double upper = kInfinity;
};

struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;  // minimized
  std::vector<Constraint> constraints;
  std::vector<Bounds> bounds;
  std::vector<std::string> var_names;  // optional, for dumps

  // Appends a variable and returns its index.
  int add_var(double cost, Bounds b = {}, std::string name = {});
  void add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                      std::string name = {});

  // Throws StructuralError when sizes or indices are inconsistent or a lower
  // bound is not finite.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective_value = 0;
  std::vector<double> values;
  int iterations = 0;
};

LpSolution solve(const LpProblem& problem);

struct Violation {
  // Row index, or -1 - var for a bound violation of variable `var`.
  int row = 0;
  double amount = 0;  // how far outside the feasible side, > 0
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

// Throws ArgumentError when point.size() != num_vars.
FeasibilityReport check_feasible(const LpProblem& problem,
                                 std::span<const double> point,
                                 double tolerance = kFeasibilityTolerance);

// CPLEX-style LP text, for cross-checking against external solvers.
std::string to_lp_format(const LpProblem& problem);

}  // namespace coflow::lp

#endif  // COFLOW_LP_H_
