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

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "coflow/errors.h"

namespace coflow::lp {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kDropTolerance = 1e-13;
constexpr int kDegenerateRunBeforeBland = 50;
constexpr double kCostPerturbation = 1e-7;
constexpr int kMaxRefactorRounds = 6;

// ---------------------------------------------------------------------------
// Presolve

using SparseTerms = std::vector<std::pair<int, double>>;

struct WorkRow {
  SparseTerms terms;  // sorted by variable, no zeros
  Relation relation;
  double rhs;
  bool active = true;
};

// x_eliminated = offset + factor * x_kept
struct Substitution {
  int eliminated;
  int kept;
  double offset;
  double factor;
};

enum class VarState { kActive, kFixed, kEliminated };

struct ReducedProblem {
  std::vector<int> columns;  // reduced column -> original variable
  std::vector<double> lower, upper, cost;
  std::vector<WorkRow> rows;  // terms indexed by reduced column
  double objective_offset = 0;
};

class Presolver {
 public:
  explicit Presolver(const LpProblem& p)
      : n_(p.num_vars),
        lower_(n_),
        upper_(n_),
        cost_(p.objective),
        state_(n_, VarState::kActive),
        col_rows_(n_) {
    for (int v = 0; v < n_; ++v) {
      lower_[v] = p.bounds[v].lower;
      upper_[v] = p.bounds[v].upper;
    }
    rows_.reserve(p.constraints.size());
    for (const Constraint& c : p.constraints) {
      WorkRow row{{}, c.relation, c.rhs};
      std::vector<std::pair<int, double>> terms;
      for (const Term& t : c.terms) terms.emplace_back(t.var, t.coef);
      std::sort(terms.begin(), terms.end());
      for (const auto& [var, coef] : terms) {
        if (!row.terms.empty() && row.terms.back().first == var) {
          row.terms.back().second += coef;
        } else {
          row.terms.emplace_back(var, coef);
        }
      }
      std::erase_if(row.terms, [](const auto& t) { return t.second == 0.0; });
      const int r = static_cast<int>(rows_.size());
      for (const auto& [var, coef] : row.terms) col_rows_[var].push_back(r);
      rows_.push_back(std::move(row));
    }
  }

  // Returns false when the problem is found infeasible.
  bool run() {
    for (int v = 0; v < n_; ++v) {
      if (lower_[v] > upper_[v] + kFeasibilityTolerance) return false;
      if (upper_[v] - lower_[v] <= 0) fix(v);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        WorkRow& row = rows_[r];
        if (!row.active) continue;
        const std::size_t size = row.terms.size();
        if (size == 0) {
          if (!empty_row_holds(row)) return false;
          row.active = false;
          changed = true;
        } else if (size == 1) {
          if (!fold_singleton(row)) return false;
          changed = true;
        } else if (size == 2 && row.relation == Relation::kEqual) {
          if (!substitute_doubleton(static_cast<int>(r))) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  ReducedProblem reduced() const {
    ReducedProblem out;
    std::vector<int> column_of(n_, -1);
    out.objective_offset = objective_offset_;
    for (int v = 0; v < n_; ++v) {
      if (state_[v] == VarState::kFixed) {
        out.objective_offset += cost_[v] * lower_[v];
      } else if (state_[v] == VarState::kActive) {
        column_of[v] = static_cast<int>(out.columns.size());
        out.columns.push_back(v);
        out.lower.push_back(lower_[v]);
        out.upper.push_back(upper_[v]);
        out.cost.push_back(cost_[v]);
      }
    }
    for (const WorkRow& row : rows_) {
      if (!row.active) continue;
      WorkRow copy{{}, row.relation, row.rhs};
      for (const auto& [var, coef] : row.terms) {
        copy.terms.emplace_back(column_of[var], coef);
      }
      out.rows.push_back(std::move(copy));
    }
    return out;
  }

  std::vector<double> postsolve(const ReducedProblem& reduced,
                                std::span<const double> column_values) const {
    std::vector<double> x(n_, 0.0);
    for (int v = 0; v < n_; ++v) {
      if (state_[v] == VarState::kFixed) x[v] = lower_[v];
    }
    for (std::size_t c = 0; c < reduced.columns.size(); ++c) {
      x[reduced.columns[c]] = column_values[c];
    }
    for (auto it = substitutions_.rbegin(); it != substitutions_.rend(); ++it) {
      x[it->eliminated] = it->offset + it->factor * x[it->kept];
    }
    return x;
  }

 private:
  static bool empty_row_holds(const WorkRow& row) {
    const double tol = kFeasibilityTolerance * std::max(1.0, std::abs(row.rhs));
    switch (row.relation) {
      case Relation::kLessEqual:
        return row.rhs >= -tol;
      case Relation::kGreaterEqual:
        return row.rhs <= tol;
      case Relation::kEqual:
        return std::abs(row.rhs) <= tol;
    }
    return false;
  }

  // a x (rel) b  ->  bound on x.
  bool fold_singleton(WorkRow& row) {
    const auto [var, coef] = row.terms.front();
    const double value = row.rhs / coef;
    Relation rel = row.relation;
    if (coef < 0 && rel != Relation::kEqual) {
      rel = rel == Relation::kLessEqual ? Relation::kGreaterEqual
                                        : Relation::kLessEqual;
    }
    if (rel != Relation::kGreaterEqual) upper_[var] = std::min(upper_[var], value);
    if (rel != Relation::kLessEqual) lower_[var] = std::max(lower_[var], value);
    row.active = false;
    return settle_bounds(var);
  }

  bool settle_bounds(int var) {
    const double tol =
        kFeasibilityTolerance * std::max(1.0, std::abs(lower_[var]));
    if (lower_[var] > upper_[var] + tol) return false;
    if (upper_[var] - lower_[var] <= 0) {
      upper_[var] = lower_[var];
      fix(var);
    }
    return true;
  }

  void remove_term(WorkRow& row, int var, double* coef_out) {
    auto it = std::lower_bound(
        row.terms.begin(), row.terms.end(), var,
        [](const std::pair<int, double>& t, int v) { return t.first < v; });
    if (it == row.terms.end() || it->first != var) {
      *coef_out = 0;
      return;
    }
    *coef_out = it->second;
    row.terms.erase(it);
  }

  void add_term(int r, int var, double coef) {
    WorkRow& row = rows_[r];
    auto it = std::lower_bound(
        row.terms.begin(), row.terms.end(), var,
        [](const std::pair<int, double>& t, int v) { return t.first < v; });
    if (it != row.terms.end() && it->first == var) {
      it->second += coef;
      if (std::abs(it->second) <= kDropTolerance) row.terms.erase(it);
    } else {
      row.terms.insert(it, {var, coef});
      col_rows_[var].push_back(r);
    }
  }

  void fix(int var) {
    if (state_[var] != VarState::kActive) return;
    state_[var] = VarState::kFixed;
    for (int r : col_rows_[var]) {
      WorkRow& row = rows_[r];
      if (!row.active) continue;
      double coef;
      remove_term(row, var, &coef);
      row.rhs -= coef * lower_[var];
    }
  }

  // a x_p + b x_q = c: eliminate the variable with the larger coefficient
  // magnitude (higher index on ties).
  bool substitute_doubleton(int r) {
    WorkRow& row = rows_[r];
    auto [p, a] = row.terms[0];
    auto [q, b] = row.terms[1];
    if (std::abs(a) > std::abs(b)) {
      std::swap(p, q);
      std::swap(a, b);
    }
    const double c = row.rhs;
    row.active = false;
    const double offset = c / b;
    const double factor = -a / b;  // x_q = offset + factor * x_p
    // Bounds of x_q translate into bounds on x_p.
    const double lo_q = lower_[q] - offset;
    const double hi_q = upper_[q] - offset;
    if (factor > 0) {
      lower_[p] = std::max(lower_[p], lo_q / factor);
      upper_[p] = std::min(upper_[p], hi_q / factor);
    } else {
      lower_[p] = std::max(lower_[p], hi_q / factor);
      upper_[p] = std::min(upper_[p], lo_q / factor);
    }
    state_[q] = VarState::kEliminated;
    substitutions_.push_back({q, p, offset, factor});
    cost_[p] += cost_[q] * factor;
    objective_offset_ += cost_[q] * offset;
    cost_[q] = 0;
    const std::vector<int> rows_of_q = col_rows_[q];
    for (int other : rows_of_q) {
      WorkRow& o = rows_[other];
      if (!o.active) continue;
      double e;
      remove_term(o, q, &e);
      if (e == 0) continue;
      o.rhs -= e * offset;
      add_term(other, p, e * factor);
    }
    return settle_bounds(p);
  }

  int n_;
  std::vector<double> lower_, upper_, cost_;
  std::vector<VarState> state_;
  std::vector<WorkRow> rows_;
  std::vector<std::vector<int>> col_rows_;
  std::vector<Substitution> substitutions_;
  double objective_offset_ = 0;
};

// ---------------------------------------------------------------------------
// Dense LU with partial pivoting, used to re-derive basic values and duals
// from the original data.

class DenseLu {
 public:
  explicit DenseLu(std::vector<double> a, int n) : n_(n), lu_(std::move(a)), perm_(n) {
    for (int i = 0; i < n_; ++i) perm_[i] = i;
    for (int k = 0; k < n_; ++k) {
      int best = k;
      for (int i = k + 1; i < n_; ++i) {
        if (std::abs(at(i, k)) > std::abs(at(best, k))) best = i;
      }
      if (std::abs(at(best, k)) < 1e-14) {
        singular_ = true;
        return;
      }
      if (best != k) {
        for (int j = 0; j < n_; ++j) std::swap(at(k, j), at(best, j));
        std::swap(perm_[k], perm_[best]);
      }
      const double pivot = at(k, k);
      for (int i = k + 1; i < n_; ++i) {
        double& f = at(i, k);
        if (f == 0) continue;
        f /= pivot;
        const double* src = &lu_[static_cast<std::size_t>(k) * n_];
        double* dst = &lu_[static_cast<std::size_t>(i) * n_];
        for (int j = k + 1; j < n_; ++j) dst[j] -= f * src[j];
      }
    }
  }

  bool singular() const { return singular_; }

  // Solves A x = b.
  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) x[i] -= at(i, j) * x[j];
      x[i] /= at(i, i);
    }
    return x;
  }

  // Solves A^T y = c.
  std::vector<double> solve_transposed(std::span<const double> c) const {
    std::vector<double> z(c.begin(), c.end());
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) z[i] -= at(j, i) * z[j];
      z[i] /= at(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) z[i] -= at(j, i) * z[j];
    }
    std::vector<double> y(n_);
    for (int i = 0; i < n_; ++i) y[perm_[i]] = z[i];
    return y;
  }

 private:
  double& at(int i, int j) { return lu_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const {
    return lu_[static_cast<std::size_t>(i) * n_ + j];
  }

  int n_;
  std::vector<double> lu_;
  std::vector<int> perm_;
  bool singular_ = false;
};

// ---------------------------------------------------------------------------
// Bounded-variable tableau simplex over  A x = b, 0 <= x <= u.

class Tableau {
 public:
  enum class Outcome { kOptimal, kUnbounded };

  Tableau(int rows, int cols)
      : m_(rows),
        n_(cols),
        t_(static_cast<std::size_t>(rows) * cols, 0.0),
        upper_(cols, kInfinity),
        cost_(cols, 0.0),
        d_(cols, 0.0),
        at_upper_(cols, false),
        basic_row_(cols, -1),
        basis_(rows, -1),
        x_b_(rows, 0.0) {}

  double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * n_ + c]; }
  double at(int r, int c) const {
    return t_[static_cast<std::size_t>(r) * n_ + c];
  }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void set_upper(int c, double u) { upper_[c] = u; }
  void start_at_upper(int c) { at_upper_[c] = true; }
  // Columns [first, first + m) hold B^-1; the dual row choice then weighs
  // infeasibilities by the row norms (dual steepest edge).
  void use_steepest_edge(int first) { dse_first_ = first; }
  double upper(int c) const { return upper_[c]; }
  void set_basic(int r, int c, double value) {
    basis_[r] = c;
    basic_row_[c] = r;
    x_b_[r] = value;
  }
  int basis(int r) const { return basis_[r]; }

  void exchange(int r, int c) {
    const double v = value(c);
    basic_row_[basis_[r]] = -1;
    pivot(r, c);
    at_upper_[c] = false;
    set_basic(r, c, v);
  }
  bool is_basic(int c) const { return basic_row_[c] >= 0; }
  bool at_upper(int c) const { return at_upper_[c]; }
  double basic_value(int r) const { return x_b_[r]; }

  double value(int c) const {
    if (basic_row_[c] >= 0) return x_b_[basic_row_[c]];
    return at_upper_[c] ? upper_[c] : 0.0;
  }

  // Installs a cost vector and prices it against the current tableau.
  void set_costs(std::vector<double> cost) {
    cost_ = std::move(cost);
    for (int j = 0; j < n_; ++j) d_[j] = cost_[j];
    for (int r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0) continue;
      const double* row = &t_[static_cast<std::size_t>(r) * n_];
      for (int j = 0; j < n_; ++j) d_[j] -= cb * row[j];
    }
    for (int r = 0; r < m_; ++r) d_[basis_[r]] = 0;
  }

  double objective() const {
    double z = 0;
    for (int j = 0; j < n_; ++j) z += cost_[j] * value(j);
    return z;
  }

  Outcome iterate(int* iterations, int limit) {
    int degenerate_run = 0;
    bool bland = false;
    for (;;) {
      if (++*iterations > limit) {
        throw InternalError("simplex iteration limit exceeded");
      }
      const int e = choose_entering(bland);
      if (e < 0) return Outcome::kOptimal;
      const double dir = at_upper_[e] ? -1.0 : 1.0;
      double theta = kInfinity;
      int leave = -1;
      ratio_test(e, dir, bland, &theta, &leave);
      const bool flip = upper_[e] < kInfinity && upper_[e] <= theta;
      if (flip) theta = upper_[e];
      if (theta == kInfinity) return Outcome::kUnbounded;

      if (theta <= 1e-12) {
        if (++degenerate_run > kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      if (theta > 0) {
        for (int r = 0; r < m_; ++r) {
          const double a = at(r, e);
          if (a != 0) x_b_[r] -= dir * a * theta;
        }
      }
      if (flip) {
        at_upper_[e] = !at_upper_[e];
        continue;
      }
      const double entering_value = (at_upper_[e] ? upper_[e] : 0.0) + dir * theta;
      const int leaving = basis_[leave];
      // The leaving variable exits at whichever bound it reached.
      const double a = at(leave, e);
      at_upper_[leaving] = (-dir * a > 0) && upper_[leaving] < kInfinity;
      at_upper_[e] = false;
      basic_row_[leaving] = -1;
      pivot(leave, e);
      basis_[leave] = e;
      basic_row_[e] = leave;
      x_b_[leave] = entering_value;
    }
  }

  // Dual simplex from a dual feasible basis. Returns false when some row
  // cannot be repaired, i.e. the problem is infeasible.
  bool dual_iterate(int* iterations, int limit) {
    for (;;) {
      int r = -1;
      double worst = 0;
      for (int i = 0; i < m_; ++i) {
        const double scale = std::max(1.0, std::abs(x_b_[i]));
        const double u = upper_[basis_[i]];
        double excess = 0;
        if (x_b_[i] < -kFeasibilityTolerance * scale) {
          excess = -x_b_[i];
        } else if (u < kInfinity && x_b_[i] > u + kFeasibilityTolerance * scale) {
          excess = x_b_[i] - u;
        }
        if (excess > 0 && dse_first_ >= 0) {
          double norm = 0;
          const double* row = &t_[static_cast<std::size_t>(i) * n_ + dse_first_];
          for (int k = 0; k < m_; ++k) norm += row[k] * row[k];
          excess = excess * excess / std::max(norm, 1e-12);
        }
        if (excess > worst) {
          worst = excess;
          r = i;
        }
      }
      if (r < 0) return true;
      if (++*iterations > limit) {
        throw InternalError("simplex iteration limit exceeded");
      }
      const bool below = x_b_[r] < 0;
      const double target = below ? 0.0 : upper_[basis_[r]];
      // Breakpoints of the dual objective along the ray. Boxed columns whose
      // breakpoint is passed while the slope stays positive flip bounds.
      struct Breakpoint {
        double ratio;
        double alpha;
        int col;
      };
      std::vector<Breakpoint> points;
      for (int j = 0; j < n_; ++j) {
        if (basic_row_[j] >= 0 || upper_[j] <= 0) continue;
        const double a = at(r, j);
        if (std::abs(a) <= kPivotTolerance) continue;
        // Moving x_j away from its bound must push x_B(r) toward target.
        const bool helps = at_upper_[j] ? (below ? a > 0 : a < 0) : (below ? a < 0 : a > 0);
        if (!helps) continue;
        points.push_back({std::max(0.0, at_upper_[j] ? -d_[j] : d_[j]) / std::abs(a), a, j});
      }
      if (points.empty()) return false;
      std::ranges::sort(points, [](const Breakpoint& x, const Breakpoint& y) {
        if (x.ratio != y.ratio) return x.ratio < y.ratio;
        if (std::abs(x.alpha) != std::abs(y.alpha)) return std::abs(x.alpha) > std::abs(y.alpha);
        return x.col < y.col;
      });
      double slope = std::abs(x_b_[r] - target);
      std::size_t pick = 0;
      for (; pick + 1 < points.size(); ++pick) {
        const double u = upper_[points[pick].col];
        if (u == kInfinity) break;
        const double next = slope - std::abs(points[pick].alpha) * u;
        if (next <= 0) break;
        slope = next;
      }
      for (std::size_t k = 0; k < pick; ++k) {
        const int j = points[k].col;
        const double move = at_upper_[j] ? -upper_[j] : upper_[j];
        at_upper_[j] = !at_upper_[j];
        for (int i = 0; i < m_; ++i) {
          const double a = at(i, j);
          if (a != 0) x_b_[i] -= a * move;
        }
      }
      const int e = points[pick].col;
      const double step = (x_b_[r] - target) / at(r, e);
      const double entering_value = value(e) + step;
      for (int i = 0; i < m_; ++i) {
        const double a = at(i, e);
        if (a != 0) x_b_[i] -= a * step;
      }
      const int leaving = basis_[r];
      at_upper_[leaving] = !below;
      at_upper_[e] = false;
      basic_row_[leaving] = -1;
      pivot(r, e);
      basis_[r] = e;
      basic_row_[e] = r;
      x_b_[r] = entering_value;
    }
  }

  void pivot(int p, int e) {
    double* prow = &t_[static_cast<std::size_t>(p) * n_];
    const double inv = 1.0 / prow[e];
    nz_.clear();
    for (int j = 0; j < n_; ++j) {
      if (prow[j] == 0) continue;
      prow[j] *= inv;
      if (std::abs(prow[j]) <= kDropTolerance) {
        prow[j] = 0;
      } else {
        nz_.push_back(j);
      }
    }
    prow[e] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == p) continue;
      double* row = &t_[static_cast<std::size_t>(r) * n_];
      const double f = row[e];
      if (f == 0) continue;
      for (int j : nz_) {
        double v = row[j] - f * prow[j];
        row[j] = std::abs(v) <= kDropTolerance ? 0.0 : v;
      }
      row[e] = 0;
    }
    const double f = d_[e];
    if (f != 0) {
      for (int j : nz_) d_[j] -= f * prow[j];
    }
    d_[e] = 0;
  }

  // Removes the given columns and rows; remaining indices are compacted.
  void compact(const std::vector<bool>& drop_col,
               const std::vector<bool>& drop_row) {
    std::vector<int> new_col(n_, -1);
    int nc = 0;
    for (int j = 0; j < n_; ++j) {
      if (!drop_col[j]) new_col[j] = nc++;
    }
    int nr = 0;
    for (int r = 0; r < m_; ++r) nr += drop_row[r] ? 0 : 1;
    std::vector<double> t(static_cast<std::size_t>(nr) * nc);
    std::vector<int> basis;
    std::vector<double> x_b;
    int rr = 0;
    for (int r = 0; r < m_; ++r) {
      if (drop_row[r]) continue;
      for (int j = 0; j < n_; ++j) {
        if (new_col[j] >= 0) t[static_cast<std::size_t>(rr) * nc + new_col[j]] = at(r, j);
      }
      basis.push_back(new_col[basis_[r]]);
      x_b.push_back(x_b_[r]);
      ++rr;
    }
    auto squeeze = [&](auto& v) {
      std::decay_t<decltype(v)> out;
      for (int j = 0; j < n_; ++j) {
        if (new_col[j] >= 0) out.push_back(v[j]);
      }
      v = std::move(out);
    };
    squeeze(upper_);
    squeeze(cost_);
    squeeze(d_);
    std::vector<bool> au;
    for (int j = 0; j < n_; ++j) {
      if (new_col[j] >= 0) au.push_back(at_upper_[j]);
    }
    at_upper_ = std::move(au);
    m_ = nr;
    n_ = nc;
    t_ = std::move(t);
    basis_ = std::move(basis);
    x_b_ = std::move(x_b);
    basic_row_.assign(n_, -1);
    for (int r = 0; r < m_; ++r) basic_row_[basis_[r]] = r;
  }

  // Rebuilds B^-1 A, basic values and reduced costs from the original
  // standard-form matrix. Returns false when the basis matrix is singular.
  bool refactor(const std::vector<SparseTerms>& a_cols,
                std::span<const double> b, bool rebuild_tableau) {
    std::vector<double> bm(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      for (const auto& [row, v] : a_cols[basis_[r]]) {
        bm[static_cast<std::size_t>(row) * m_ + r] = v;
      }
    }
    DenseLu lu(std::move(bm), m_);
    if (lu.singular()) return false;
    std::vector<double> rhs(b.begin(), b.end());
    for (int j = 0; j < n_; ++j) {
      if (basic_row_[j] < 0 && at_upper_[j]) {
        for (const auto& [row, v] : a_cols[j]) rhs[row] -= v * upper_[j];
      }
    }
    x_b_ = lu.solve(rhs);
    std::vector<double> cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = cost_[basis_[r]];
    const std::vector<double> y = lu.solve_transposed(cb);
    for (int j = 0; j < n_; ++j) {
      double dj = cost_[j];
      for (const auto& [row, v] : a_cols[j]) dj -= y[row] * v;
      d_[j] = basic_row_[j] >= 0 ? 0.0 : dj;
    }
    if (rebuild_tableau) {
      std::vector<double> col(m_);
      for (int j = 0; j < n_; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        for (const auto& [row, v] : a_cols[j]) col[row] = v;
        const std::vector<double> s = lu.solve(col);
        for (int r = 0; r < m_; ++r) {
          at(r, j) = std::abs(s[r]) <= kDropTolerance ? 0.0 : s[r];
        }
      }
    }
    return true;
  }

  bool primal_feasible(double tol) const {
    for (int r = 0; r < m_; ++r) {
      const double scale = std::max(1.0, std::abs(x_b_[r]));
      if (x_b_[r] < -tol * scale) return false;
      const double u = upper_[basis_[r]];
      if (u < kInfinity && x_b_[r] > u + tol * scale) return false;
    }
    return true;
  }

  bool dual_feasible(double tol) const { return choose_entering_with(false, tol) < 0; }

  void clamp_basic_values() {
    for (int r = 0; r < m_; ++r) {
      x_b_[r] = std::clamp(x_b_[r], 0.0, upper_[basis_[r]]);
    }
  }

 private:
  int choose_entering(bool bland) const {
    return choose_entering_with(bland, kOptimalityTolerance);
  }

  int choose_entering_with(bool bland, double tol) const {
    int best = -1;
    double best_score = 0;
    for (int j = 0; j < n_; ++j) {
      if (basic_row_[j] >= 0) continue;
      double score;
      if (at_upper_[j]) {
        score = d_[j];
      } else {
        if (upper_[j] <= 0) continue;
        score = -d_[j];
      }
      if (score <= tol) continue;
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  void ratio_test(int e, double dir, bool bland, double* theta,
                  int* leave) const {
    double best = kInfinity;
    int best_row = -1;
    for (int r = 0; r < m_; ++r) {
      const double a = at(r, e);
      if (std::abs(a) <= kPivotTolerance) continue;
      const double rate = -dir * a;  // change of x_B(r) per unit step
      double limit;
      if (rate < 0) {
        limit = std::max(0.0, x_b_[r]) / -rate;
      } else {
        const double u = upper_[basis_[r]];
        if (u == kInfinity) continue;
        limit = std::max(0.0, u - x_b_[r]) / rate;
      }
      if (best_row < 0 || limit < best - 1e-12) {
        best = limit;
        best_row = r;
      } else if (limit <= best + 1e-12) {
        const bool take = bland ? basis_[r] < basis_[best_row]
                                : std::abs(a) > std::abs(at(best_row, e));
        if (take) {
          best = std::min(best, limit);
          best_row = r;
        }
      }
    }
    *theta = best;
    *leave = best_row;
  }

  int m_, n_;
  std::vector<double> t_;
  std::vector<double> upper_, cost_, d_;
  std::vector<bool> at_upper_;
  std::vector<int> basic_row_, basis_;
  std::vector<double> x_b_;
  std::vector<int> nz_;
  int dse_first_ = -1;  // first column of the B^-1 block, or -1
};

// Primal phase 2 from a feasible basis, refactorization checks and postsolve.
LpSolution finish(const LpProblem& problem, const Presolver& presolver,
                  const ReducedProblem& red, Tableau& tab,
                  const std::vector<SparseTerms>& a_cols, std::span<const double> b,
                  LpSolution sol) {
  const int n = static_cast<int>(red.columns.size());
  const int limit = 50 * (tab.rows() + tab.cols()) + 10000;
  std::vector<double> phase2(tab.cols(), 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = red.cost[j];
  tab.set_costs(phase2);

  for (int round = 0;; ++round) {
    if (tab.iterate(&sol.iterations, limit) == Tableau::Outcome::kUnbounded) {
      sol.status = LpStatus::kUnbounded;
      return sol;
    }
    if (tab.rows() == 0) break;
    if (!tab.refactor(a_cols, b, /*rebuild_tableau=*/false)) {
      throw InternalError("simplex basis became singular");
    }
    if (tab.primal_feasible(kFeasibilityTolerance) &&
        tab.dual_feasible(kOptimalityTolerance)) {
      break;
    }
    if (round == kMaxRefactorRounds) {
      throw InternalError("simplex failed to converge after refactorization");
    }
    tab.refactor(a_cols, b, /*rebuild_tableau=*/true);
    // Drift left the basis slightly infeasible. While it is still dual
    // feasible the dual simplex repairs it; otherwise snap to the bounds.
    if (!tab.primal_feasible(kFeasibilityTolerance) &&
        tab.dual_feasible(kOptimalityTolerance)) {
      if (!tab.dual_iterate(&sol.iterations, limit)) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
    } else {
      tab.clamp_basic_values();
    }
  }
  tab.clamp_basic_values();

  std::vector<double> column_values(n);
  for (int j = 0; j < n; ++j) column_values[j] = red.lower[j] + tab.value(j);
  sol.values = presolver.postsolve(red, column_values);
  for (int v = 0; v < problem.num_vars; ++v) {
    sol.values[v] = std::clamp(sol.values[v], problem.bounds[v].lower,
                               problem.bounds[v].upper);
  }
  sol.status = LpStatus::kOptimal;
  sol.objective_value = 0;
  for (int v = 0; v < problem.num_vars; ++v) {
    sol.objective_value += problem.objective[v] * sol.values[v];
  }
  return sol;
}

LpSolution solve_from_slack_basis(const LpProblem& problem, const Presolver& presolver,
                                  const ReducedProblem& red) {
  const int n = static_cast<int>(red.columns.size());
  const int m = static_cast<int>(red.rows.size());
  const int cols = n + m;
  Tableau tab(m, cols);
  std::vector<SparseTerms> a_cols(cols);
  std::vector<double> b(m);
  std::vector<double> upper(n);
  for (int j = 0; j < n; ++j) {
    upper[j] = red.upper[j] - red.lower[j];
    tab.set_upper(j, upper[j]);
    if (red.cost[j] < 0) tab.start_at_upper(j);
  }
  for (int r = 0; r < m; ++r) {
    const WorkRow& row = red.rows[r];
    // Greater-or-equal rows are negated so every row gets a +1 slack.
    const double sign = row.relation == Relation::kGreaterEqual ? -1 : 1;
    double rhs = row.rhs;
    for (const auto& [c, v] : row.terms) rhs -= v * red.lower[c];
    b[r] = sign * rhs;
    double basic = b[r];
    for (const auto& [c, v] : row.terms) {
      tab.at(r, c) = sign * v;
      a_cols[c].emplace_back(r, sign * v);
      if (red.cost[c] < 0) basic -= sign * v * upper[c];
    }
    const int slack = n + r;
    tab.at(r, slack) = 1;
    a_cols[slack].emplace_back(r, 1.0);
    tab.set_upper(slack, row.relation == Relation::kEqual ? 0.0 : kInfinity);
    tab.set_basic(r, slack, basic);
  }
  // Zero costs make the dual massively degenerate. The dual pass runs on
  // costs nudged away from their bounds by distinct tiny amounts; the
  // primal pass in finish() then restores the true costs.
  double cost_scale = 1;
  for (int j = 0; j < n; ++j) cost_scale = std::max(cost_scale, std::abs(red.cost[j]));
  std::vector<double> cost(cols, 0.0);
  for (int j = 0; j < n; ++j) {
    const double nudge = kCostPerturbation * cost_scale * (1.0 + 0.618033988749895 * (j % 97) / 97.0);
    cost[j] = red.cost[j] + (red.cost[j] < 0 ? -nudge : nudge);
  }
  tab.set_costs(cost);
  tab.use_steepest_edge(n);

  LpSolution sol;
  const int limit = 50 * (m + cols) + 10000;
  if (!tab.dual_iterate(&sol.iterations, limit)) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  return finish(problem, presolver, red, tab, a_cols, b, sol);
}

LpSolution solve_reduced(const LpProblem& problem, const Presolver& presolver,
                         const ReducedProblem& red) {
  const int n = static_cast<int>(red.columns.size());
  const int m = static_cast<int>(red.rows.size());

  // With every cost pointing toward a finite bound, the all-slack basis is
  // dual feasible and the dual simplex needs no artificial phase.
  bool dual_start = true;
  for (int j = 0; j < n; ++j) {
    if (red.cost[j] < 0 && red.upper[j] == kInfinity) dual_start = false;
  }
  if (dual_start) return solve_from_slack_basis(problem, presolver, red);

  // Shift x = lower + x', normalize rhs >= 0 and lay out columns:
  // [structural | slack/surplus | artificial].
  struct RowPlan {
    double sign;
    Relation relation;
    double rhs;
    int slack = -1;
    double slack_coef = 0;
    int artificial = -1;
  };
  std::vector<RowPlan> plan(m);
  std::vector<double> upper(n);
  for (int j = 0; j < n; ++j) upper[j] = red.upper[j] - red.lower[j];
  int next_col = n;
  for (int r = 0; r < m; ++r) {
    const WorkRow& row = red.rows[r];
    double rhs = row.rhs;
    for (const auto& [c, v] : row.terms) rhs -= v * red.lower[c];
    Relation rel = row.relation;
    double sign = 1;
    if (rhs < 0 || (rhs == 0 && rel == Relation::kGreaterEqual)) {
      sign = -1;
      rhs = -rhs;
      if (rel == Relation::kLessEqual) {
        rel = Relation::kGreaterEqual;
      } else if (rel == Relation::kGreaterEqual) {
        rel = Relation::kLessEqual;
      }
    }
    plan[r] = {sign, rel, rhs};
    if (rel == Relation::kLessEqual) {
      plan[r].slack = next_col++;
      plan[r].slack_coef = 1;
    } else if (rel == Relation::kGreaterEqual) {
      plan[r].slack = next_col++;
      plan[r].slack_coef = -1;
    }
  }
  const int first_artificial = next_col;
  for (int r = 0; r < m; ++r) {
    if (plan[r].relation != Relation::kLessEqual) plan[r].artificial = next_col++;
  }
  const int cols = next_col;

  Tableau tab(m, cols);
  std::vector<SparseTerms> a_cols(cols);
  std::vector<double> b(m);
  for (int r = 0; r < m; ++r) {
    for (const auto& [c, v] : red.rows[r].terms) {
      tab.at(r, c) = plan[r].sign * v;
      a_cols[c].emplace_back(r, plan[r].sign * v);
    }
    b[r] = plan[r].rhs;
    if (plan[r].slack >= 0) {
      tab.at(r, plan[r].slack) = plan[r].slack_coef;
      a_cols[plan[r].slack].emplace_back(r, plan[r].slack_coef);
    }
    if (plan[r].artificial >= 0) {
      tab.at(r, plan[r].artificial) = 1;
      a_cols[plan[r].artificial].emplace_back(r, 1.0);
      tab.set_basic(r, plan[r].artificial, plan[r].rhs);
    } else {
      tab.set_basic(r, plan[r].slack, plan[r].rhs);
    }
  }
  for (int j = 0; j < n; ++j) tab.set_upper(j, upper[j]);

  LpSolution sol;
  const int limit = 50 * (m + cols) + 10000;

  if (first_artificial < cols) {
    std::vector<double> phase1(cols, 0.0);
    for (int j = first_artificial; j < cols; ++j) phase1[j] = 1;
    tab.set_costs(phase1);
    tab.iterate(&sol.iterations, limit);
    double bscale = 1;
    for (double v : b) bscale = std::max(bscale, std::abs(v));
    if (tab.objective() > 1e-7 * bscale) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis; rows where that is
    // impossible are linearly dependent and are dropped.
    std::vector<bool> drop_row(m, false);
    for (int r = 0; r < tab.rows(); ++r) {
      if (tab.basis(r) < first_artificial) continue;
      int best = -1;
      for (int j = 0; j < first_artificial; ++j) {
        if (tab.is_basic(j) || std::abs(tab.at(r, j)) <= 1e-7) continue;
        if (best < 0 || std::abs(tab.at(r, j)) > std::abs(tab.at(r, best))) best = j;
      }
      if (best < 0) {
        drop_row[r] = true;
        continue;
      }
      // Zero-length exchange: the artificial leaves at zero and `best`
      // enters at its current bound value.
      tab.exchange(r, best);
    }
    std::vector<bool> drop_col(cols, false);
    for (int j = first_artificial; j < cols; ++j) drop_col[j] = true;
    // Rebuild the original-column view without artificials and dropped rows.
    std::vector<int> new_row(m, -1);
    int nr = 0;
    for (int r = 0; r < m; ++r) {
      if (!drop_row[r]) new_row[r] = nr++;
    }
    std::vector<SparseTerms> kept_cols(first_artificial);
    for (int j = 0; j < first_artificial; ++j) {
      for (const auto& [r, v] : a_cols[j]) {
        if (new_row[r] >= 0) kept_cols[j].emplace_back(new_row[r], v);
      }
    }
    std::vector<double> kept_b;
    for (int r = 0; r < m; ++r) {
      if (!drop_row[r]) kept_b.push_back(b[r]);
    }
    tab.compact(drop_col, drop_row);
    a_cols = std::move(kept_cols);
    b = std::move(kept_b);
  }

  return finish(problem, presolver, red, tab, a_cols, b, sol);
}

double row_activity(const Constraint& c, std::span<const double> x) {
  double s = 0;
  for (const Term& t : c.terms) s += t.coef * x[t.var];
  return s;
}

}  // namespace

int LpProblem::add_var(double cost, Bounds b, std::string name) {
  objective.push_back(cost);
  bounds.push_back(b);
  var_names.push_back(std::move(name));
  return num_vars++;
}

void LpProblem::add_constraint(std::vector<Term> terms, Relation relation,
                               double rhs, std::string name) {
  constraints.push_back({std::move(terms), relation, rhs, std::move(name)});
}

void LpProblem::validate() const {
  if (num_vars < 0) throw StructuralError("negative variable count");
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(bounds.size()) != num_vars) {
    throw StructuralError(fmt::format(
        "objective/bounds sizes ({}, {}) do not match num_vars {}",
        objective.size(), bounds.size(), num_vars));
  }
  for (int v = 0; v < num_vars; ++v) {
    const Bounds& b = bounds[v];
    if (!std::isfinite(b.lower)) {
      throw StructuralError(fmt::format("variable {} needs a finite lower bound", v));
    }
    if (std::isnan(b.upper) || b.lower > b.upper) {
      throw StructuralError(fmt::format("variable {} has lower > upper", v));
    }
    if (!std::isfinite(objective[v])) {
      throw StructuralError(fmt::format("objective coefficient {} not finite", v));
    }
  }
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const Constraint& c = constraints[r];
    if (!std::isfinite(c.rhs)) {
      throw StructuralError(fmt::format("row {} rhs not finite", r));
    }
    for (const Term& t : c.terms) {
      if (t.var < 0 || t.var >= num_vars || !std::isfinite(t.coef)) {
        throw StructuralError(fmt::format("row {} has a bad term", r));
      }
    }
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LpSolution solve(const LpProblem& problem) {
  problem.validate();
  Presolver presolver(problem);
  if (!presolver.run()) return LpSolution{LpStatus::kInfeasible, 0, {}, 0};
  const ReducedProblem reduced = presolver.reduced();
  return solve_reduced(problem, presolver, reduced);
}

FeasibilityReport check_feasible(const LpProblem& problem,
                                 std::span<const double> point,
                                 double tolerance) {
  if (static_cast<int>(point.size()) != problem.num_vars) {
    throw ArgumentError(fmt::format("point has {} entries, problem has {} variables",
                                    point.size(), problem.num_vars));
  }
  FeasibilityReport report;
  for (std::size_t r = 0; r < problem.constraints.size(); ++r) {
    const Constraint& c = problem.constraints[r];
    const double act = row_activity(c, point);
    double excess = 0;
    switch (c.relation) {
      case Relation::kLessEqual:
        excess = act - c.rhs;
        break;
      case Relation::kGreaterEqual:
        excess = c.rhs - act;
        break;
      case Relation::kEqual:
        excess = std::abs(act - c.rhs);
        break;
    }
    if (excess > tolerance) {
      report.violations.push_back({static_cast<int>(r), excess});
    }
  }
  for (int v = 0; v < problem.num_vars; ++v) {
    const double excess = std::max(problem.bounds[v].lower - point[v],
                                   point[v] - problem.bounds[v].upper);
    if (excess > tolerance) report.violations.push_back({-1 - v, excess});
  }
  report.feasible = report.violations.empty();
  return report;
}

std::string to_lp_format(const LpProblem& problem) {
  auto name = [&](int v) {
    if (v < static_cast<int>(problem.var_names.size()) &&
        !problem.var_names[v].empty()) {
      return problem.var_names[v];
    }
    return fmt::format("x{}", v);
  };
  auto terms_text = [&](auto begin, auto end) {
    std::string s;
    for (auto it = begin; it != end; ++it) {
      const auto [var, coef] = *it;
      if (coef == 0) continue;
      s += fmt::format(" {} {} {}", coef < 0 ? '-' : '+', std::abs(coef), name(var));
    }
    return s.empty() ? std::string(" 0 ") + name(0) : s;
  };
  std::ostringstream out;
  std::vector<std::pair<int, double>> obj;
  for (int v = 0; v < problem.num_vars; ++v) obj.emplace_back(v, problem.objective[v]);
  out << "Minimize\n obj:" << terms_text(obj.begin(), obj.end()) << "\n";
  out << "Subject To\n";
  for (std::size_t r = 0; r < problem.constraints.size(); ++r) {
    const Constraint& c = problem.constraints[r];
    std::vector<std::pair<int, double>> t;
    for (const Term& term : c.terms) t.emplace_back(term.var, term.coef);
    const char* rel = c.relation == Relation::kLessEqual      ? "<="
                      : c.relation == Relation::kGreaterEqual ? ">="
                                                              : "=";
    const std::string label = c.name.empty() ? fmt::format("c{}", r) : c.name;
    out << " " << label << ":" << terms_text(t.begin(), t.end()) << " " << rel
        << " " << c.rhs << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < problem.num_vars; ++v) {
    const Bounds& b = problem.bounds[v];
    if (b.upper == kInfinity) {
      out << " " << name(v) << " >= " << b.lower << "\n";
    } else {
      out << " " << b.lower << " <= " << name(v) << " <= " << b.upper << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace coflow::lp
