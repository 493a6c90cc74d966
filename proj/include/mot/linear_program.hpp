// Equality-form linear programming with certified duals. The solver is a
// dense revised simplex with Bland's anti-cycling rule, sized for the
// desk-scale transport programs built elsewhere in this library.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mot {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LpEntry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

/// maximize objective . z  subject to  A z = rhs, z >= 0.
/// Duplicate (row, col) entries are summed when the matrix is assembled.
struct LinearProgram {
  Index num_vars = 0;
  Index num_cons = 0;
  std::vector<LpEntry> entries;
  VectorXd objective;
  VectorXd rhs;

  void add_entry(Index row, Index col, double value) {
    entries.push_back({row, col, value});
  }
};

struct LpTolerances {
  double feas = 1e-9;
  double opt = 1e-9;
  double gap = 1e-8;
  LpTolerances scaled(double factor) const {
    return {feas * factor, opt * factor, gap * factor};
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  VectorXd primal;            // size num_vars
  VectorXd dual;              // one multiplier per constraint
  double objective = 0.0;
  double primal_residual = 0.0;    // max |A z - rhs|
  double dual_violation = 0.0;     // max (objective - A^T dual)_j, clamped at 0
  double slackness_residual = 0.0; // sum_j z_j max(0, (A^T dual - objective)_j)
  int iterations = 0;
};

/// Deterministic solve: Dantzig pricing with lowest-index tie breaks,
/// switching to Bland's rule after 50 consecutive degenerate pivots.
/// Infeasible and unbounded programs are reported through status; malformed
/// programs (bad indices, size mismatches, non-finite data) throw.
LpSolution solve_lp(const LinearProgram& lp, const LpTolerances& tol = {});

/// Plain-text triplet dump ("p m n", "c j v", "r i v", "t i j v" lines).
std::string dump_program(const LinearProgram& lp);

}  // namespace mot
