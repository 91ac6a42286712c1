#include "ess/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ess::lp {

std::size_t Problem::add_variable(double cost, double upper) {
  cost_.push_back(cost);
  upper_.push_back(upper);
  return cost_.size() - 1;
}

std::size_t Problem::add_row(std::vector<Term> terms, Sense sense, double rhs) {
  rows_.push_back(Row{std::move(terms), sense, rhs});
  return rows_.size() - 1;
}

namespace {

constexpr double kPivotTol = 1e-9;

// Dense tableau. Row m is the reduced-cost row; column `cols` is the right hand side.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), data_((m + 1) * (n + 1), 0.0), basis_(m, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& reduced(std::size_t c) { return at(m_, c); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Rebuilds the reduced-cost row for cost vector `c` (size n_) at the current basis.
  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j < n_; ++j) reduced(j) = c[j];
    reduced(n_) = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(m_, j) -= cb * at(r, j);
    }
  }

  // Bland's rule. Columns with allowed[j] == false never enter.
  Status optimize(const std::vector<bool>& allowed, double cost_scale, std::size_t& iterations,
                  std::size_t max_iterations) {
    const double dtol = 1e-9 * cost_scale;
    while (true) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (allowed[j] && reduced(j) < -dtol) {
          enter = j;
          break;
        }
      }
      if (enter == n_) return Status::Optimal;
      if (++iterations > max_iterations) return Status::IterationLimit;

      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (leave == m_ || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) return Status::Unbounded;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const Problem& problem, std::size_t max_iterations) {
  const std::size_t nv = problem.num_variables();

  // Finite upper bounds become explicit <= rows.
  std::vector<Row> rows = problem.rows();
  const std::size_t user_rows = rows.size();
  for (std::size_t j = 0; j < nv; ++j) {
    if (std::isfinite(problem.upper()[j])) rows.push_back(Row{{Term{j, 1.0}}, Sense::LessEqual, problem.upper()[j]});
  }
  const std::size_t m = rows.size();

  // Normalize to rhs >= 0.
  std::vector<double> flip(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].rhs < 0) {
      flip[i] = -1.0;
      rows[i].rhs = -rows[i].rhs;
      for (auto& t : rows[i].terms) t.coef = -t.coef;
      if (rows[i].sense == Sense::LessEqual)
        rows[i].sense = Sense::GreaterEqual;
      else if (rows[i].sense == Sense::GreaterEqual)
        rows[i].sense = Sense::LessEqual;
    }
  }

  // Column layout: structural | slack/surplus | artificial.
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::Equal) ++n_slack;
    if (r.sense != Sense::LessEqual) ++n_art;
  }
  const std::size_t n = nv + n_slack + n_art;
  Tableau t(m, n);
  // unit[i]: the column holding +e_i in the original system (slack or artificial).
  std::vector<std::size_t> unit(m);
  std::vector<bool> is_art(n, false);
  {
    std::size_t s = nv, a = nv + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& term : rows[i].terms) t.at(i, term.var) += term.coef;
      t.rhs(i) = rows[i].rhs;
      switch (rows[i].sense) {
        case Sense::LessEqual:
          t.at(i, s) = 1.0;
          unit[i] = s++;
          break;
        case Sense::GreaterEqual:
          t.at(i, s++) = -1.0;
          t.at(i, a) = 1.0;
          is_art[a] = true;
          unit[i] = a++;
          break;
        case Sense::Equal:
          t.at(i, a) = 1.0;
          is_art[a] = true;
          unit[i] = a++;
          break;
      }
      t.basis()[i] = unit[i];
    }
  }

  Solution sol;
  double cost_scale = 1.0;
  for (double c : problem.cost()) cost_scale = std::max(cost_scale, std::abs(c));

  // Phase 1.
  std::vector<bool> allowed(n, true);
  if (n_art > 0) {
    std::vector<double> c1(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) c1[j] = is_art[j] ? 1.0 : 0.0;
    t.price(c1);
    Status st = t.optimize(allowed, 1.0, sol.iterations, max_iterations);
    if (st == Status::IterationLimit) {
      sol.status = st;
      return sol;
    }
    double rhs_scale = 1.0;
    for (const auto& r : rows) rhs_scale = std::max(rhs_scale, std::abs(r.rhs));
    if (-t.reduced(n) > 1e-7 * rhs_scale) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible; rows where
    // that is impossible are redundant and keep their artificial at zero.
    for (std::size_t r = 0; r < m; ++r) {
      if (!is_art[t.basis()[r]]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_art[j] && std::abs(t.at(r, j)) > kPivotTol) {
          t.pivot(r, j);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) allowed[j] = !is_art[j];
  }

  // Phase 2.
  std::vector<double> c2(n, 0.0);
  std::copy(problem.cost().begin(), problem.cost().end(), c2.begin());
  t.price(c2);
  Status st = t.optimize(allowed, cost_scale, sol.iterations, max_iterations);
  if (st != Status::Optimal) {
    sol.status = st;
    return sol;
  }

  sol.status = Status::Optimal;
  sol.x.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = t.basis()[r];
    if (b < nv) sol.x[b] = std::max(0.0, t.rhs(r));
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < nv; ++j) sol.objective += problem.cost()[j] * sol.x[j];

  // y_i = c_B B^-1 e_i = -(reduced cost of the +e_i column), since that column costs 0.
  sol.duals.assign(user_rows, 0.0);
  for (std::size_t i = 0; i < user_rows; ++i) sol.duals[i] = -t.reduced(unit[i]) * flip[i];

  sol.activity.assign(user_rows, 0.0);
  for (std::size_t i = 0; i < user_rows; ++i) {
    double a = 0.0;
    for (const auto& term : problem.rows()[i].terms) a += term.coef * sol.x[term.var];
    sol.activity[i] = a;
  }
  return sol;
}

}  // namespace ess::lp
