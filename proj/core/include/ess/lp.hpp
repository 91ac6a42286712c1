#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

// Small dense linear programming solver used by the clearing engine.
//
//   minimize    c'x
//   subject to  a_i'x  {<=, >=, =}  b_i
//               0 <= x_j <= u_j
//
// Two-phase tableau simplex with Bland's pivoting rule, so the final basis (and
// therefore the reported duals) is reproducible for degenerate problems.
namespace ess::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var;
  double coef;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

class Problem {
 public:
  std::size_t add_variable(double cost, double upper = kInfinity);
  std::size_t add_row(std::vector<Term> terms, Sense sense, double rhs);

  std::size_t num_variables() const { return cost_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<double> cost_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  /// d objective / d rhs for each row (shadow prices). For a minimization, >= rows
  /// have non-negative duals and <= rows non-positive ones.
  std::vector<double> duals;
  std::vector<double> activity;  // a_i'x
  std::size_t iterations = 0;
};

Solution solve(const Problem& problem, std::size_t max_iterations = 100000);

}  // namespace ess::lp
