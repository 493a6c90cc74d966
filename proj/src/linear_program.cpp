#include "mot/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mot {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kStallThreshold = 50;   // degenerate pivots before Bland's rule
constexpr int kRefactorEvery = 100;

bool lp_debug_enabled() {
  static const bool enabled = [] {
    const char* v = std::getenv("MOT_LOG");
    return v != nullptr && std::string(v) == "debug";
  }();
  return enabled;
}

MatrixXd assemble_dense(const LinearProgram& lp) {
  MatrixXd dense = MatrixXd::Zero(lp.num_cons, lp.num_vars);
  for (const LpEntry& e : lp.entries) {
    if (e.row < 0 || e.row >= lp.num_cons || e.col < 0 || e.col >= lp.num_vars)
      throw std::invalid_argument("solve_lp: triplet index out of range");
    if (!std::isfinite(e.value))
      throw std::invalid_argument("solve_lp: non-finite matrix entry");
    dense(e.row, e.col) += e.value;
  }
  return dense;
}

// Revised simplex over one phase. The caller owns the working matrix; the
// solver keeps a dense basis inverse updated in product form.
class SimplexCore {
 public:
  SimplexCore(const MatrixXd& A, const VectorXd& b, double enter_tol)
      : A_(A), b_(b), m_(A.rows()), n_(A.cols()), enter_tol_(enter_tol) {}

  void set_basis(std::vector<Index> basis) {
    basis_ = std::move(basis);
    in_basis_.assign(static_cast<size_t>(n_), false);
    for (Index j : basis_) in_basis_[static_cast<size_t>(j)] = true;
    refactorize();
  }

  // Columns >= first_locked_col never enter the basis (phase-1 artificials).
  void lock_columns_from(Index first_locked_col) { locked_from_ = first_locked_col; }

  enum class Outcome { optimal, unbounded };

  Outcome run(const VectorXd& cost, int* iteration_counter) {
    bool bland = false;
    int degenerate_streak = 0;
    const long max_pivots = 10000 + 200 * static_cast<long>(m_ + n_);
    for (long pivots = 0;; ++pivots) {
      if (pivots > max_pivots)
        throw std::runtime_error("solve_lp: pivot limit exceeded");

      VectorXd c_basis(m_);
      for (Index r = 0; r < m_; ++r) c_basis(r) = cost(basis_[static_cast<size_t>(r)]);
      const VectorXd y = binv_.transpose() * c_basis;
      const VectorXd reduced = cost - A_.transpose() * y;

      Index entering = -1;
      double best = enter_tol_;
      const Index scan_end = std::min(n_, locked_from_);
      for (Index j = 0; j < scan_end; ++j) {
        if (in_basis_[static_cast<size_t>(j)]) continue;
        if (reduced(j) > best) {
          best = reduced(j);
          entering = j;
          if (bland) break;  // first eligible index wins
        } else if (bland && entering >= 0) {
          break;
        }
      }
      if (entering < 0) return Outcome::optimal;

      const VectorXd direction = binv_ * A_.col(entering);
      Index leave_pos = -1;
      double best_ratio = 0.0;
      for (Index r = 0; r < m_; ++r) {
        if (direction(r) <= kPivotTol) continue;
        const double ratio = std::max(x_basis_(r), 0.0) / direction(r);
        if (leave_pos < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave_pos)])) {
          leave_pos = r;
          best_ratio = ratio;
        }
      }
      if (leave_pos < 0) return Outcome::unbounded;

      if (best_ratio < 1e-13) {
        if (++degenerate_streak >= kStallThreshold) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }

      pivot(entering, leave_pos, direction, best_ratio);
      if (iteration_counter) ++*iteration_counter;
      if ((pivots + 1) % kRefactorEvery == 0) refactorize();
    }
  }

  // Basis change with zero step; used to drive artificials out.
  void pivot_in_place(Index entering, Index leave_pos) {
    const VectorXd direction = binv_ * A_.col(entering);
    pivot(entering, leave_pos, direction, 0.0);
  }

  const std::vector<Index>& basis() const { return basis_; }
  const VectorXd& basic_values() const { return x_basis_; }
  const MatrixXd& basis_inverse() const { return binv_; }

  VectorXd tableau_row(Index pos) const { return A_.transpose() * binv_.row(pos).transpose(); }

  VectorXd duals(const VectorXd& cost) const {
    VectorXd c_basis(m_);
    for (Index r = 0; r < m_; ++r) c_basis(r) = cost(basis_[static_cast<size_t>(r)]);
    return binv_.transpose() * c_basis;
  }

  void refactorize() {
    MatrixXd basis_matrix(m_, m_);
    for (Index r = 0; r < m_; ++r) basis_matrix.col(r) = A_.col(basis_[static_cast<size_t>(r)]);
    binv_ = basis_matrix.partialPivLu().inverse();
    if (m_ > 0 && !((basis_matrix * binv_ - MatrixXd::Identity(m_, m_)).cwiseAbs().maxCoeff() < 1e-6))
      throw std::runtime_error("solve_lp: singular or ill-conditioned basis");
    x_basis_ = binv_ * b_;
    x_basis_ = x_basis_.cwiseMax(0.0);
  }

 private:
  void pivot(Index entering, Index leave_pos, const VectorXd& direction, double step) {
    x_basis_ -= step * direction;
    x_basis_ = x_basis_.cwiseMax(0.0);
    x_basis_(leave_pos) = step;

    in_basis_[static_cast<size_t>(basis_[static_cast<size_t>(leave_pos)])] = false;
    basis_[static_cast<size_t>(leave_pos)] = entering;
    in_basis_[static_cast<size_t>(entering)] = true;

    const double pivot_value = direction(leave_pos);
    binv_.row(leave_pos) /= pivot_value;
    for (Index r = 0; r < m_; ++r) {
      if (r == leave_pos) continue;
      const double factor = direction(r);
      if (factor != 0.0) binv_.row(r) -= factor * binv_.row(leave_pos);
    }
  }

  const MatrixXd& A_;
  const VectorXd& b_;
  Index m_, n_;
  double enter_tol_;
  Index locked_from_ = std::numeric_limits<Index>::max();
  std::vector<Index> basis_;
  std::vector<bool> in_basis_;
  MatrixXd binv_;
  VectorXd x_basis_;
};

}  // namespace

std::string dump_program(const LinearProgram& lp) {
  std::ostringstream os;
  char buf[64];
  os << "p " << lp.num_cons << " " << lp.num_vars << "\n";
  for (Index j = 0; j < lp.num_vars; ++j) {
    std::snprintf(buf, sizeof(buf), "c %ld %.17g\n", static_cast<long>(j), lp.objective(j));
    os << buf;
  }
  for (Index i = 0; i < lp.num_cons; ++i) {
    std::snprintf(buf, sizeof(buf), "r %ld %.17g\n", static_cast<long>(i), lp.rhs(i));
    os << buf;
  }
  for (const LpEntry& e : lp.entries) {
    std::snprintf(buf, sizeof(buf), "t %ld %ld %.17g\n", static_cast<long>(e.row),
                  static_cast<long>(e.col), e.value);
    os << buf;
  }
  return os.str();
}

LpSolution solve_lp(const LinearProgram& lp, const LpTolerances& tol) {
  if (lp.objective.size() != lp.num_vars || lp.rhs.size() != lp.num_cons)
    throw std::invalid_argument("solve_lp: objective/rhs size mismatch");
  if (!lp.objective.allFinite() || !lp.rhs.allFinite())
    throw std::invalid_argument("solve_lp: non-finite objective or rhs");

  const MatrixXd original = assemble_dense(lp);
  if (lp_debug_enabled())
    std::cerr << "[mot lp] solving " << lp.num_cons << " x " << lp.num_vars << "\n"
              << dump_program(lp);

  const Index m0 = lp.num_cons;
  const Index n = lp.num_vars;
  const double b_scale = m0 > 0 ? 1.0 + lp.rhs.cwiseAbs().maxCoeff() : 1.0;
  const double c_scale = n > 0 ? 1.0 + lp.objective.cwiseAbs().maxCoeff() : 1.0;

  // Orient rows so the right-hand side is nonnegative, then append one
  // artificial column per row for phase 1.
  VectorXd row_sign = VectorXd::Ones(m0);
  for (Index i = 0; i < m0; ++i)
    if (lp.rhs(i) < 0.0) row_sign(i) = -1.0;

  MatrixXd work(m0, n + m0);
  VectorXd b_work(m0);
  for (Index i = 0; i < m0; ++i) {
    work.row(i).head(n) = row_sign(i) * original.row(i);
    b_work(i) = row_sign(i) * lp.rhs(i);
  }
  work.rightCols(m0) = MatrixXd::Identity(m0, m0);

  LpSolution sol;
  sol.primal = VectorXd::Zero(n);
  sol.dual = VectorXd::Zero(m0);

  // ---- Phase 1: drive artificial mass to zero.
  VectorXd phase1_cost = VectorXd::Zero(n + m0);
  phase1_cost.tail(m0).setConstant(-1.0);

  SimplexCore phase1(work, b_work, tol.opt * 2.0);
  std::vector<Index> basis(static_cast<size_t>(m0));
  for (Index i = 0; i < m0; ++i) basis[static_cast<size_t>(i)] = n + i;
  phase1.set_basis(std::move(basis));
  phase1.lock_columns_from(n);  // artificials leave but never re-enter
  phase1.run(phase1_cost, &sol.iterations);

  double artificial_mass = 0.0;
  for (Index r = 0; r < m0; ++r)
    if (phase1.basis()[static_cast<size_t>(r)] >= n)
      artificial_mass += phase1.basic_values()(r);
  if (artificial_mass > tol.feas * b_scale) {
    sol.status = LpStatus::infeasible;
    return sol;
  }

  // Remove leftover artificials from the basis: pivot them onto a real
  // column when the tableau row has one, otherwise the row is redundant and
  // is dropped from the working problem (its dual multiplier is zero).
  std::vector<bool> keep_row(static_cast<size_t>(m0), true);
  for (Index r = 0; r < m0; ++r) {
    if (phase1.basis()[static_cast<size_t>(r)] < n) continue;
    // Artificials never re-enter, so one still in the basis sits at its
    // starting position and names the row it was created for.
    if (phase1.basis()[static_cast<size_t>(r)] != n + r)
      throw std::runtime_error("solve_lp: artificial column moved position");
    const VectorXd row = phase1.tableau_row(r);
    Index enter = -1;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(row(j)) > 1e-9) {
        bool basic = false;
        for (Index q = 0; q < m0; ++q)
          if (phase1.basis()[static_cast<size_t>(q)] == j) {
            basic = true;
            break;
          }
        if (!basic) {
          enter = j;
          break;
        }
      }
    }
    if (enter >= 0)
      phase1.pivot_in_place(enter, r);
    else
      keep_row[static_cast<size_t>(r)] = false;
  }

  std::vector<Index> kept_rows;
  for (Index i = 0; i < m0; ++i) {
    // Row r of the basis corresponds to the artificial n + i only at start;
    // after pivoting, position r still belongs to working row r.
    if (keep_row[static_cast<size_t>(i)]) kept_rows.push_back(i);
  }
  const Index m = static_cast<Index>(kept_rows.size());

  MatrixXd A2(m, n);
  VectorXd b2(m);
  std::vector<Index> basis2;
  for (Index r2 = 0; r2 < m; ++r2) {
    const Index r = kept_rows[static_cast<size_t>(r2)];
    A2.row(r2) = work.row(r).head(n);
    b2(r2) = b_work(r);
  }
  for (Index r = 0; r < m0; ++r)
    if (keep_row[static_cast<size_t>(r)] && phase1.basis()[static_cast<size_t>(r)] < n)
      basis2.push_back(phase1.basis()[static_cast<size_t>(r)]);
  if (static_cast<Index>(basis2.size()) != m)
    throw std::runtime_error("solve_lp: internal basis bookkeeping error");

  // ---- Phase 2: original objective on the reduced row set.
  SimplexCore phase2(A2, b2, tol.opt * c_scale);
  phase2.set_basis(std::move(basis2));
  const auto outcome = phase2.run(lp.objective, &sol.iterations);
  if (outcome == SimplexCore::Outcome::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  phase2.refactorize();  // clean factorization before extracting certificates

  for (Index r = 0; r < m; ++r)
    sol.primal(phase2.basis()[static_cast<size_t>(r)]) = phase2.basic_values()(r);

  const VectorXd y2 = phase2.duals(lp.objective);
  for (Index r2 = 0; r2 < m; ++r2) {
    const Index orig_row = kept_rows[static_cast<size_t>(r2)];
    sol.dual(orig_row) = row_sign(orig_row) * y2(r2);
  }

  sol.status = LpStatus::optimal;
  sol.objective = lp.objective.dot(sol.primal);
  if (m0 > 0) {
    sol.primal_residual = (original * sol.primal - lp.rhs).cwiseAbs().maxCoeff();
    const VectorXd reduced = lp.objective - original.transpose() * sol.dual;
    sol.dual_violation = std::max(0.0, reduced.maxCoeff());
    sol.slackness_residual = sol.primal.dot((-reduced).cwiseMax(0.0));
  } else {
    sol.dual_violation = n > 0 ? std::max(0.0, lp.objective.maxCoeff()) : 0.0;
  }
  if (lp_debug_enabled())
    std::cerr << "[mot lp] optimal value " << sol.objective << " after "
              << sol.iterations << " pivots, residual " << sol.primal_residual
              << "\n";
  return sol;
}

}  // namespace mot
